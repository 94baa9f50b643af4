use clap::Parser;

fn main() {
    env_logger::init();
    let cli = madforge::cli::Cli::parse();
    std::process::exit(madforge::cli::run(cli));
}
