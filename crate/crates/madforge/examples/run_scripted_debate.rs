//! Runs a complete three-stage debate against the deterministic scripted
//! backend and prints the resulting log summary and token usage.
//!
//! ```sh
//! cargo run --example run_scripted_debate
//! ```

use madforge::backends::{ledger_report, ScriptedBackend};
use madforge::config::DebateConfig;
use madforge::orchestrator::{Orchestrator, Sample};
use madforge::record::TaskKind;
use madforge::testutil;

fn main() {
    env_logger::init();
    let config = DebateConfig::default(); // 3 debaters, 2 rounds, judge, temp 0
    let script = testutil::script_accepting_debate(&config, "demo");
    let backend = ScriptedBackend::new(script);

    let sample = Sample {
        sample_id: "demo-1".to_string(),
        task_kind: TaskKind::CodeSummarization,
        source_code: "def add(a, b):\n    return a + b".to_string(),
        source_language: "python".to_string(),
        target_language: None,
        reference: Some("Adds two numbers.".to_string()),
        tests: Vec::new(),
    };

    let orchestrator = Orchestrator::new(&backend);
    let log = orchestrator
        .run_debate(&sample, &config)
        .expect("scripted debate completes");
    log.validate().expect("log is structurally valid");

    println!("sample:   {}", log.sample_id);
    println!("outcome:  {:?}", log.outcome);
    println!("answer:   {:?}", log.final_answer);
    for (i, stage) in log.stages.iter().enumerate() {
        let turns: usize = stage.attempts.iter().map(|a| a.turns.len()).sum();
        println!(
            "stage {i} ({}): {} attempt(s), {turns} turns, winner {:?}",
            stage.stage_spec_id,
            stage.attempts.len(),
            stage.winning_verdict().and_then(|v| v.winner.as_deref()),
        );
    }
    println!();
    println!("{}", ledger_report(std::slice::from_ref(&log)).render_table());
}
