//! Compares two per-sample score lists with Welch's t-test and Cohen's d,
//! the same statistics the `report` subcommand applies to two run
//! directories.
//!
//! ```sh
//! cargo run --example compare_runs
//! ```

use madforge::metrics::{effect_size_band, welch_t_test};

fn main() {
    // Per-sample metric scores from two techniques over the same samples.
    let technique_a = [0.42, 0.55, 0.48, 0.61, 0.39, 0.58, 0.47, 0.52, 0.44, 0.60];
    let technique_b = [0.38, 0.49, 0.45, 0.52, 0.35, 0.50, 0.41, 0.47, 0.40, 0.53];

    let report = welch_t_test(&technique_a, &technique_b).unwrap();
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;

    println!("mean A:        {:.4}", mean(&technique_a));
    println!("mean B:        {:.4}", mean(&technique_b));
    println!("t statistic:   {:.4}", report.t_statistic);
    println!("deg. freedom:  {:.2}", report.degrees_of_freedom);
    println!(
        "p-value:       {:.4}{}",
        report.p_value,
        if report.p_value < 0.05 { "  (significant)" } else { "" }
    );
    println!(
        "Cohen's d:     {:.4} ({} effect)",
        report.cohens_d,
        effect_size_band(report.cohens_d)
    );
}
