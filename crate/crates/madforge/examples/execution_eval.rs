//! Runs translated programs through the execution-based evaluation suite:
//! compile check, per-test stdin/stdout comparison, and the two accuracy
//! metrics. Requires `python3` on PATH.
//!
//! ```sh
//! cargo run --example execution_eval
//! ```

use madforge::metrics::{
    computational_accuracy, execution_accuracy, run_execution_suite, RunnerConfig, TestCase,
};

fn main() {
    env_logger::init();
    let config = RunnerConfig::with_python3();
    let tests = vec![
        TestCase {
            test_id: "doubles".to_string(),
            stdin: "21\n".to_string(),
            expected_stdout: "42\n".to_string(),
        },
        TestCase {
            test_id: "zero".to_string(),
            stdin: "0\n".to_string(),
            expected_stdout: "0\n".to_string(),
        },
    ];

    let programs = [
        ("correct", "print(int(input()) * 2)\n"),
        ("wrong-output", "print(int(input()) + 1)\n"),
        ("does-not-compile", "def broken(:\n"),
    ];

    let mut results = Vec::new();
    for (name, code) in programs {
        let result = run_execution_suite(code, "python", &tests, &config).unwrap();
        let passed = result.tests.iter().filter(|t| t.passed).count();
        println!(
            "{name:<18} compiled={} tests passed={}/{}",
            result.compiled,
            passed,
            result.tests.len()
        );
        results.push(result);
    }

    println!();
    println!("execution accuracy:     {:.2}", execution_accuracy(&results));
    println!("computational accuracy: {:.2}", computational_accuracy(&results));
}
