//! End-to-end command flows: run with resume, classify, report, usage, and
//! smoke tests of the installed binary's exit codes.

use std::io::Write;
use std::path::Path;
use std::process::Command;

use madforge::backends::{Script, ScriptedBackend};
use madforge::cli::{cmd_classify, cmd_report, cmd_run};
use madforge::config::DebateConfig;
use madforge::dataset::{ingest_dataset, Dataset};
use madforge::record::{write_corpus, TaskKind};
use madforge::testutil;

fn dataset_file(dir: &Path, ids: &[&str]) -> std::path::PathBuf {
    let path = dir.join("data.jsonl");
    let mut f = std::fs::File::create(&path).unwrap();
    for id in ids {
        writeln!(
            f,
            r#"{{"id":"{id}","code":"def f():\n    return 1","language":"python","reference":"Returns one."}}"#
        )
        .unwrap();
    }
    path
}

fn load(path: &Path, ids: &[&str]) -> Dataset {
    ingest_dataset(&dataset_file(path, ids), TaskKind::CodeSummarization).unwrap()
}

/// One script covering `n` sequential accepted debates.
fn script_for(n: usize) -> Script {
    let config = DebateConfig::default();
    let mut script = Script::default();
    for i in 0..n {
        let one = testutil::script_accepting_debate(&config, &format!("s{i}"));
        script.entries.extend(one.entries);
    }
    script
}

#[test]
fn run_writes_logs_and_manifest_then_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let dataset = load(dir.path(), &["a", "b"]);
    let out = dir.path().join("out");
    let config = DebateConfig::default();

    let backend = ScriptedBackend::new(script_for(2));
    let summary = cmd_run(&dataset, &config, &backend, &out, 1).unwrap();
    assert_eq!((summary.completed, summary.resumed, summary.failed), (2, 0, 0));
    assert!(out.join("a.json").exists());
    assert!(out.join("b.json").exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["completed"], 2);
    assert_eq!(manifest["api_calls"], 42); // 21 per sample

    // Resume: an empty script suffices because nothing is recomputed.
    let before = std::fs::read_to_string(out.join("a.json")).unwrap();
    let empty = ScriptedBackend::new(Script::default());
    let summary = cmd_run(&dataset, &config, &empty, &out, 1).unwrap();
    assert_eq!((summary.completed, summary.resumed, summary.failed), (0, 2, 0));
    assert_eq!(std::fs::read_to_string(out.join("a.json")).unwrap(), before);
}

#[test]
fn starved_script_yields_partial_failure_with_preserved_results() {
    let dir = tempfile::tempdir().unwrap();
    let dataset = load(dir.path(), &["a", "b"]);
    let out = dir.path().join("out");
    let config = DebateConfig::default();

    // Enough for one debate only; the second aborts mid-flight.
    let backend = ScriptedBackend::new(script_for(1));
    let err = cmd_run(&dataset, &config, &backend, &out, 1).unwrap_err();
    assert_eq!(err.exit_code, 1);
    let logs: Vec<_> = std::fs::read_dir(&out)
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().into_string().unwrap())
        .collect();
    assert!(logs.iter().any(|n| n.ends_with(".partial.json")));
    assert_eq!(logs.iter().filter(|n| *n == "a.json" || *n == "b.json").count(), 1);
}

#[test]
fn classify_reports_distribution_and_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let log_dir = dir.path().join("logs");
    std::fs::create_dir(&log_dir).unwrap();
    let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(5);
    for i in 0..10 {
        let log = testutil::random_log(&mut rng, &format!("c{i:02}"));
        std::fs::write(log_dir.join(format!("c{i:02}.json")), log.to_document()).unwrap();
    }
    std::fs::write(log_dir.join("broken.json"), "{ not json").unwrap();

    let report = cmd_classify(&log_dir, None).unwrap();
    assert_eq!(report.matches('\t').count(), 10);
    assert!(report.contains("unreadable logs:"));
    assert!(report.contains("broken.json"));
    assert!(report.contains("Category"));

    // Self-labels give 100% agreement.
    let labels = dir.path().join("labels.tsv");
    let own: String = report
        .lines()
        .filter(|l| l.contains('\t'))
        .map(|l| format!("{l}\n"))
        .collect();
    std::fs::write(&labels, own).unwrap();
    let with_irr = cmd_classify(&log_dir, Some(&labels)).unwrap();
    assert!(with_irr.contains("Inter-rater agreement: 100.00%"));
}

#[test]
fn report_of_a_run_against_itself_is_null() {
    let dir = tempfile::tempdir().unwrap();
    let dataset = load(dir.path(), &["a", "b", "c"]);
    let out = dir.path().join("run");
    let config = DebateConfig::default();
    let backend = ScriptedBackend::new(script_for(3));
    cmd_run(&dataset, &config, &backend, &out, 1).unwrap();

    let report = cmd_report(&out, &out, &dataset, &[]).unwrap();
    for line in report.lines().skip(1).filter(|l| l.starts_with(char::is_alphanumeric)) {
        if line.starts_with("bleu") || line.starts_with("rouge-l") || line.starts_with("meteor") {
            assert!(line.contains("1.0000") || line.contains("0.0000"), "{line}");
            assert!(!line.contains("**"), "self-comparison must not be significant: {line}");
        }
    }
    assert!(report.contains("corpus-level BLEU"));
}

#[test]
fn report_rejects_mismatched_runs() {
    let dir = tempfile::tempdir().unwrap();
    let dataset = load(dir.path(), &["a", "b"]);
    let run_a = dir.path().join("ra");
    let run_b = dir.path().join("rb");
    std::fs::create_dir_all(&run_a).unwrap();
    std::fs::create_dir_all(&run_b).unwrap();
    let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(9);
    std::fs::write(
        run_a.join("a.json"),
        testutil::random_log(&mut rng, "a").to_document(),
    )
    .unwrap();
    std::fs::write(
        run_b.join("b.json"),
        testutil::random_log(&mut rng, "b").to_document(),
    )
    .unwrap();
    let err = cmd_report(&run_a, &run_b, &dataset, &[]).unwrap_err();
    assert_eq!(err.exit_code, 2);
    assert!(err.message.contains("a"));
    assert!(err.message.contains("b"));
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_madforge"))
}

#[test]
fn binary_ingest_check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dataset_file(dir.path(), &["x", "y"]);
    let status = bin()
        .args(["ingest-check", good.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "not json\n").unwrap();
    let status = bin()
        .args(["ingest-check", bad.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn binary_rejects_invalid_configuration_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let data = dataset_file(dir.path(), &["x"]);
    let status = bin()
        .args(["run", data.to_str().unwrap(), "--agents", "17"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn binary_runs_scripted_and_reports_usage() {
    let dir = tempfile::tempdir().unwrap();
    let data = dataset_file(dir.path(), &["m1"]);
    let script_path = dir.path().join("script.json");
    std::fs::write(&script_path, serde_json::to_string(&script_for(1)).unwrap()).unwrap();
    let out = dir.path().join("out");

    let output = bin()
        .args([
            "run",
            data.to_str().unwrap(),
            "--backend",
            &format!("scripted:{}", script_path.display()),
            "--out",
            out.to_str().unwrap(),
            "--parallel",
            "1",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", String::from_utf8_lossy(&output.stderr));
    assert!(out.join("m1.json").exists());

    let usage = bin()
        .args(["usage", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&usage.stdout);
    assert!(stdout.contains("Default MAD"));
    assert!(stdout.contains("21"), "{stdout}");

    let classify = bin()
        .args(["classify", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(classify.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&classify.stdout).contains("m1"));
}

#[test]
fn corpus_files_round_trip_through_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(3);
    let logs: Vec<_> = (0..20)
        .map(|i| testutil::random_log(&mut rng, &format!("corpus-{i}")))
        .collect();
    let path = dir.path().join("corpus.jsonl");
    write_corpus(&path, &logs).unwrap();
    let back = madforge::record::read_corpus(&path).unwrap();
    assert_eq!(back, logs);
}
