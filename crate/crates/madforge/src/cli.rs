//! Command-line entry point: dataset ingestion, experiment execution,
//! classification, and reporting.
//!
//! Subcommands: `run`, `classify`, `report`, `ingest-check`, `usage`.
//! Exit codes: 0 success, 1 partial failures, 2 configuration errors.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use clap::{Parser, Subcommand};
use serde::Deserialize;

use crate::analysis::{
    category_distribution, classify_debate, inter_rater_agreement, PatternCategory,
};
use crate::backends::{
    ledger_report, Backend, GenParams, LiveBackend, LiveConfig, Script, ScriptedBackend,
};
use crate::config::{DebateConfig, Strategy};
use crate::dataset::{ingest_dataset, Dataset};
use crate::metrics::{
    bleu, corpus_bleu, effect_size_band, meteor_lite, rouge_l, welch_t_test, TokenizedText,
};
use crate::orchestrator::Orchestrator;
use crate::record::{DebateLog, TaskKind};

/// madforge: multi-agent debate orchestration and experiment harness.
#[derive(Debug, Parser)]
#[command(name = "madforge", version, about)]
pub struct Cli {
    /// TOML file with debate configuration overrides.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Backend selection: `live` or `scripted:<script-file>`.
    #[arg(long, global = true)]
    pub backend: Option<String>,
    /// Debate strategy.
    #[arg(long, global = true)]
    pub strategy: Option<Strategy>,
    /// Rounds per stage.
    #[arg(long, global = true)]
    pub rounds: Option<usize>,
    /// Number of debater agents.
    #[arg(long, global = true)]
    pub agents: Option<usize>,
    /// Sampling temperature.
    #[arg(long, global = true)]
    pub temperature: Option<f64>,
    /// Attempt cap per stage under extended reflection.
    #[arg(long, global = true)]
    pub retry_limit: Option<usize>,
    /// Output directory for logs and the run manifest.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Concurrent debates.
    #[arg(long, global = true, default_value_t = 4)]
    pub parallel: usize,
    /// Restrict configuration values to the studied search space.
    #[arg(long, global = true)]
    pub strict_paper_config: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run debates over a line-delimited dataset, one log file per sample.
    Run {
        /// Dataset file (line-delimited JSON records).
        dataset: PathBuf,
        /// Task kind: `summarization` or `translation`.
        #[arg(long, default_value = "summarization")]
        task: String,
    },
    /// Classify debate-pattern categories over a directory of logs.
    Classify {
        /// Directory of per-sample log files.
        log_dir: PathBuf,
        /// Optional second label file; triggers inter-rater agreement.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Compare two runs metric-by-metric with Welch's t-test and Cohen's d.
    Report {
        run_a: PathBuf,
        run_b: PathBuf,
        /// Dataset file supplying reference outputs.
        #[arg(long)]
        dataset: PathBuf,
        /// Task kind: `summarization` or `translation`.
        #[arg(long, default_value = "summarization")]
        task: String,
        /// Comma-separated metric selection (bleu,rouge-l,meteor).
        #[arg(long, value_delimiter = ',')]
        metrics: Vec<String>,
    },
    /// Validate a dataset file and print its manifest.
    IngestCheck {
        dataset: PathBuf,
        /// Task kind: `summarization` or `translation`.
        #[arg(long, default_value = "summarization")]
        task: String,
    },
    /// Aggregate token usage per strategy over one or more log directories.
    Usage {
        log_dirs: Vec<PathBuf>,
    },
}

/// Error carrying its process exit code (1 = partial failure, 2 = config).
#[derive(Debug)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> CliError {
        CliError {
            exit_code: 2,
            message: message.into(),
        }
    }

    fn partial(message: impl Into<String>) -> CliError {
        CliError {
            exit_code: 1,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.message.fmt(f)
    }
}

impl std::error::Error for CliError {}

/// Optional overrides loaded from `--config <file>` (TOML).
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    strategy: Option<Strategy>,
    num_debaters: Option<usize>,
    num_rounds: Option<usize>,
    temperature: Option<f64>,
    judge_enabled: Option<bool>,
    retry_limit: Option<usize>,
    seed: Option<u64>,
}

/// Layer the debate configuration: defaults, then the config file, then
/// command-line flags; validate at the end.
pub fn resolve_config(cli: &Cli) -> Result<DebateConfig, CliError> {
    let mut config = DebateConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        let file: FileConfig = toml::from_str(&text)
            .map_err(|e| CliError::config(format!("bad config {}: {e}", path.display())))?;
        if let Some(v) = file.strategy {
            config.strategy = v;
        }
        if let Some(v) = file.num_debaters {
            config.num_debaters = v;
        }
        if let Some(v) = file.num_rounds {
            config.num_rounds = v;
        }
        if let Some(v) = file.temperature {
            config.temperature = v;
        }
        if let Some(v) = file.judge_enabled {
            config.judge_enabled = v;
        }
        if let Some(v) = file.retry_limit {
            config.retry_limit = v;
        }
        if file.seed.is_some() {
            config.seed = file.seed;
        }
    }
    if let Some(v) = cli.strategy {
        config.strategy = v;
    }
    if let Some(v) = cli.rounds {
        config.num_rounds = v;
    }
    if let Some(v) = cli.agents {
        config.num_debaters = v;
    }
    if let Some(v) = cli.temperature {
        config.temperature = v;
    }
    if let Some(v) = cli.retry_limit {
        config.retry_limit = v;
    }
    config
        .validate(cli.strict_paper_config)
        .map_err(|e| CliError::config(e.to_string()))?;
    Ok(config)
}

fn parse_task(s: &str) -> Result<TaskKind, CliError> {
    match s {
        "summarization" | "cs" | "code_summarization" => Ok(TaskKind::CodeSummarization),
        "translation" | "ct" | "code_translation" => Ok(TaskKind::CodeTranslation),
        other => Err(CliError::config(format!(
            "unknown task `{other}` (expected summarization|translation)"
        ))),
    }
}

fn build_backend(spec: Option<&str>) -> Result<Box<dyn Backend>, CliError> {
    match spec.unwrap_or("live") {
        "live" => {
            let backend = LiveBackend::new(LiveConfig::from_env())
                .map_err(|e| CliError::config(e.to_string()))?;
            Ok(Box::new(backend))
        }
        other => {
            if let Some(path) = other.strip_prefix("scripted:") {
                let script =
                    Script::from_file(path).map_err(|e| CliError::config(e.to_string()))?;
                Ok(Box::new(ScriptedBackend::new(script)))
            } else {
                Err(CliError::config(format!(
                    "unknown backend `{other}` (expected live or scripted:<file>)"
                )))
            }
        }
    }
}

/// Write-temp-then-rename so readers never observe a partial file.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

fn load_log(path: &Path) -> Option<DebateLog> {
    let text = std::fs::read_to_string(path).ok()?;
    DebateLog::from_document(&text).ok()
}

/// Read all valid `.json` logs in a directory, sorted by file name, plus
/// the file names that could not be loaded.
pub fn load_log_dir(dir: &Path) -> Result<(Vec<DebateLog>, Vec<String>), CliError> {
    let mut names: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .filter(|p| p.file_name().is_some_and(|n| n != "manifest.json"))
        .collect();
    names.sort();
    let mut logs = Vec::new();
    let mut skipped = Vec::new();
    for path in names {
        match load_log(&path) {
            Some(log) => logs.push(log),
            None => skipped.push(path.display().to_string()),
        }
    }
    Ok((logs, skipped))
}

/// Outcome summary of `cmd_run` for callers and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSummary {
    pub total: usize,
    pub completed: usize,
    pub resumed: usize,
    pub failed: usize,
}

/// Run debates over every sample, respecting the parallelism cap. Existing
/// valid logs are skipped (idempotent resume); aborted samples leave a
/// `.partial.json` file behind and count as failures.
pub fn cmd_run(
    dataset: &Dataset,
    config: &DebateConfig,
    backend: &dyn Backend,
    out_dir: &Path,
    parallel: usize,
) -> Result<RunSummary, CliError> {
    if parallel == 0 {
        return Err(CliError::config("--parallel must be >= 1"));
    }
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::config(format!("cannot create {}: {e}", out_dir.display())))?;

    let mut pending = Vec::new();
    let mut resumed = 0usize;
    for sample in &dataset.samples {
        let path = out_dir.join(format!("{}.json", sample.sample_id));
        if path.exists() && load_log(&path).is_some() {
            resumed += 1;
        } else {
            pending.push(sample.clone());
        }
    }

    let queue = Mutex::new(pending);
    let failures: Mutex<Vec<String>> = Mutex::new(Vec::new());
    let completed = Mutex::new(0usize);
    let params = GenParams {
        temperature: config.temperature,
        ..GenParams::default()
    };

    std::thread::scope(|scope| {
        for _ in 0..parallel.max(1) {
            scope.spawn(|| loop {
                let sample = match queue.lock().unwrap().pop() {
                    Some(s) => s,
                    None => break,
                };
                let orchestrator = Orchestrator::new(backend).with_params(params.clone());
                match orchestrator.run_debate(&sample, config) {
                    Ok(log) => {
                        let path = out_dir.join(format!("{}.json", sample.sample_id));
                        match write_atomic(&path, &log.to_document()) {
                            Ok(()) => {
                                *completed.lock().unwrap() += 1;
                                log::info!("{}: {:?}", sample.sample_id, log.outcome);
                            }
                            Err(e) => failures
                                .lock()
                                .unwrap()
                                .push(format!("{}: write failed: {e}", sample.sample_id)),
                        }
                    }
                    Err(aborted) => {
                        let path = out_dir.join(format!("{}.partial.json", sample.sample_id));
                        let _ = write_atomic(&path, &aborted.partial.to_document());
                        failures
                            .lock()
                            .unwrap()
                            .push(format!("{}: {}", sample.sample_id, aborted.source));
                    }
                }
            });
        }
    });

    let completed = *completed.lock().unwrap();
    let failures = failures.into_inner().unwrap();
    for failure in &failures {
        eprintln!("aborted: {failure}");
    }

    // The manifest aggregates everything present in the output directory,
    // including logs carried over from previous (resumed) invocations.
    let (logs, _) = load_log_dir(out_dir)?;
    let report = ledger_report(&logs);
    let manifest = serde_json::json!({
        "dataset": dataset.manifest.name,
        "task_kind": dataset.manifest.task_kind,
        "strategy": config.strategy.as_str(),
        "samples_total": dataset.manifest.count,
        "completed": logs.len(),
        "failed": failures.len(),
        "api_calls": report.total.api_calls,
        "input_tokens": report.total.input_tokens,
        "output_tokens": report.total.output_tokens,
        "total_tokens": report.total.total_tokens(),
    });
    write_atomic(
        &out_dir.join("manifest.json"),
        &serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
    )
    .map_err(|e| CliError::partial(format!("manifest write failed: {e}")))?;
    println!("{}", report.render_table());

    let summary = RunSummary {
        total: dataset.manifest.count,
        completed,
        resumed,
        failed: failures.len(),
    };
    if summary.failed > 0 {
        return Err(CliError::partial(format!(
            "{} of {} samples aborted (partial results preserved)",
            summary.failed, summary.total
        )));
    }
    Ok(summary)
}

/// Classification report: per-log label lines, the distribution table, and
/// optionally inter-rater agreement against a second label file.
pub fn cmd_classify(log_dir: &Path, labels_path: Option<&Path>) -> Result<String, CliError> {
    let (logs, skipped) = load_log_dir(log_dir)?;
    let mut out = String::new();
    let mut labels = Vec::new();
    for log in &logs {
        match classify_debate(log) {
            Ok(category) => {
                out.push_str(&format!("{}\t{}\n", log.sample_id, category.name()));
                labels.push(category);
            }
            Err(e) => out.push_str(&format!("{}\tskipped: {e}\n", log.sample_id)),
        }
    }
    if !skipped.is_empty() {
        out.push_str("unreadable logs:\n");
        for name in &skipped {
            out.push_str(&format!("  {name}\n"));
        }
    }
    out.push('\n');
    out.push_str(&category_distribution(&labels).render_table());

    if let Some(path) = labels_path {
        let other = read_label_file(path)?;
        let irr = inter_rater_agreement(&labels, &other)
            .map_err(|e| CliError::config(e.to_string()))?;
        out.push_str(&format!("\nInter-rater agreement: {:.2}%\n", irr * 100.0));
    }
    Ok(out)
}

/// Label file: one category per line, optionally prefixed `sample_id<TAB>`.
fn read_label_file(path: &Path) -> Result<Vec<PatternCategory>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let label = line.rsplit('\t').next().unwrap_or(line).trim();
            PatternCategory::parse(label)
                .ok_or_else(|| CliError::config(format!("unknown category `{label}`")))
        })
        .collect()
}

fn metric_score(metric: &str, candidate: &TokenizedText, reference: &TokenizedText) -> f64 {
    let result = match metric {
        "bleu" => bleu(candidate, std::slice::from_ref(reference), 4),
        "rouge-l" => rouge_l(candidate, reference).map(|r| r.f1),
        "meteor" => meteor_lite(candidate, reference),
        _ => unreachable!("metric names validated upstream"),
    };
    result.unwrap_or(0.0)
}

/// Compare two runs over the same sample ids: per-metric means, Welch's p,
/// and Cohen's d with its magnitude band. p-values below 0.05 are
/// bold-marked in the rendering.
pub fn cmd_report(
    run_a: &Path,
    run_b: &Path,
    dataset: &Dataset,
    metrics: &[String],
) -> Result<String, CliError> {
    let selection: Vec<&str> = if metrics.is_empty() {
        vec!["bleu", "rouge-l", "meteor"]
    } else {
        metrics.iter().map(|m| m.as_str()).collect()
    };
    for metric in &selection {
        if !["bleu", "rouge-l", "meteor"].contains(metric) {
            return Err(CliError::config(format!(
                "unknown metric `{metric}` (expected bleu|rouge-l|meteor)"
            )));
        }
    }

    let (logs_a, _) = load_log_dir(run_a)?;
    let (logs_b, _) = load_log_dir(run_b)?;
    let by_id = |logs: Vec<DebateLog>| -> BTreeMap<String, DebateLog> {
        logs.into_iter().map(|l| (l.sample_id.clone(), l)).collect()
    };
    let map_a = by_id(logs_a);
    let map_b = by_id(logs_b);
    let ids_a: BTreeSet<&String> = map_a.keys().collect();
    let ids_b: BTreeSet<&String> = map_b.keys().collect();
    if ids_a != ids_b {
        let diff: Vec<String> = ids_a
            .symmetric_difference(&ids_b)
            .map(|s| s.to_string())
            .collect();
        return Err(CliError::config(format!(
            "runs cover different sample ids: {}",
            diff.join(", ")
        )));
    }

    let references: BTreeMap<&str, &str> = dataset
        .samples
        .iter()
        .filter_map(|s| {
            s.reference
                .as_deref()
                .map(|r| (s.sample_id.as_str(), r))
        })
        .collect();
    let tokenize = |text: &str| -> TokenizedText {
        match dataset.manifest.task_kind {
            TaskKind::CodeSummarization => TokenizedText::natural(text),
            TaskKind::CodeTranslation => TokenizedText::code(text),
        }
    };

    let mut out = String::new();
    out.push_str(&format!(
        "{:<10} {:>10} {:>10} {:>22} {:>12}\n",
        "Metric", "Mean A", "Mean B", "Cohen's d", "p-value"
    ));
    for metric in &selection {
        let mut scores_a = Vec::new();
        let mut scores_b = Vec::new();
        for (id, log_a) in &map_a {
            let Some(reference) = references.get(id.as_str()) else {
                log::warn!("sample {id} has no reference; skipped in report");
                continue;
            };
            let reference = tokenize(reference);
            let answer_a = tokenize(log_a.final_answer.as_deref().unwrap_or(""));
            let answer_b = tokenize(map_b[id].final_answer.as_deref().unwrap_or(""));
            scores_a.push(metric_score(metric, &answer_a, &reference));
            scores_b.push(metric_score(metric, &answer_b, &reference));
        }
        if scores_a.len() < 2 {
            out.push_str(&format!(
                "{:<10} insufficient scored samples ({})\n",
                metric,
                scores_a.len()
            ));
            continue;
        }
        let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
        let report =
            welch_t_test(&scores_a, &scores_b).map_err(|e| CliError::partial(e.to_string()))?;
        let d_cell = format!(
            "{:.4} ({})",
            report.cohens_d,
            effect_size_band(report.cohens_d)
        );
        let p_cell = if report.p_value < 0.05 {
            format!("**{:.4}**", report.p_value)
        } else {
            format!("{:.4}", report.p_value)
        };
        out.push_str(&format!(
            "{:<10} {:>10.4} {:>10.4} {:>22} {:>12}\n",
            metric,
            mean(&scores_a),
            mean(&scores_b),
            d_cell,
            p_cell
        ));
    }
    // BLEU is reported at both aggregation levels, labeled: the table row
    // above is the mean of per-sample scores; this line pools n-gram
    // statistics corpus-wide before the geometric mean.
    if selection.contains(&"bleu") {
        let mut pairs_a = Vec::new();
        let mut pairs_b = Vec::new();
        for (id, log_a) in &map_a {
            let Some(reference) = references.get(id.as_str()) else {
                continue;
            };
            let reference = tokenize(reference);
            pairs_a.push((
                tokenize(log_a.final_answer.as_deref().unwrap_or("")),
                vec![reference.clone()],
            ));
            pairs_b.push((
                tokenize(map_b[id].final_answer.as_deref().unwrap_or("")),
                vec![reference],
            ));
        }
        if let (Ok(a), Ok(b)) = (corpus_bleu(&pairs_a, 4), corpus_bleu(&pairs_b, 4)) {
            out.push_str(&format!("corpus-level BLEU: A={a:.4} B={b:.4}\n"));
        }
    }
    out.push_str("\n(** marks p < 0.05)\n");
    Ok(out)
}

/// Parse command-line arguments and dispatch; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Run { dataset, task } => {
            let config = resolve_config(&cli)?;
            let task = parse_task(task)?;
            let data = ingest_dataset(dataset, task).map_err(|e| CliError::partial(e.to_string()))?;
            let backend = build_backend(cli.backend.as_deref())?;
            let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("madforge-out"));
            let summary = cmd_run(&data, &config, backend.as_ref(), &out_dir, cli.parallel)?;
            println!(
                "completed {} (resumed {}) of {} samples",
                summary.completed, summary.resumed, summary.total
            );
            Ok(())
        }
        Command::Classify { log_dir, labels } => {
            let report = cmd_classify(log_dir, labels.as_deref())?;
            println!("{report}");
            Ok(())
        }
        Command::Report {
            run_a,
            run_b,
            dataset,
            task,
            metrics,
        } => {
            let task = parse_task(task)?;
            let data = ingest_dataset(dataset, task).map_err(|e| CliError::partial(e.to_string()))?;
            let report = cmd_report(run_a, run_b, &data, metrics)?;
            println!("{report}");
            Ok(())
        }
        Command::IngestCheck { dataset, task } => {
            let task = parse_task(task)?;
            let data = ingest_dataset(dataset, task).map_err(|e| CliError::partial(e.to_string()))?;
            println!(
                "{}: {} {} samples",
                data.manifest.name,
                data.manifest.count,
                data.manifest.task_kind.as_str()
            );
            Ok(())
        }
        Command::Usage { log_dirs } => {
            let mut logs = Vec::new();
            for dir in log_dirs {
                let (mut found, skipped) = load_log_dir(dir)?;
                logs.append(&mut found);
                for name in skipped {
                    eprintln!("skipped unreadable log {name}");
                }
            }
            println!("{}", ledger_report(&logs).render_table());
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_declaration_is_consistent() {
        Cli::command().debug_assert();
    }

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(args).unwrap()
    }

    #[test]
    fn flags_layer_over_defaults() {
        let cli = parse(&[
            "madforge",
            "run",
            "data.jsonl",
            "--strategy",
            "early-term",
            "--rounds",
            "3",
            "--agents",
            "4",
            "--temperature",
            "0.2",
            "--retry-limit",
            "5",
        ]);
        let config = resolve_config(&cli).unwrap();
        assert_eq!(config.strategy, Strategy::EarlyTermination);
        assert_eq!(config.num_rounds, 3);
        assert_eq!(config.num_debaters, 4);
        assert_eq!(config.temperature, 0.2);
        assert_eq!(config.retry_limit, 5);
    }

    #[test]
    fn config_file_applies_before_flags() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        use std::io::Write;
        writeln!(
            file,
            "strategy = \"extended_reflection\"\nnum_rounds = 4\ntemperature = 0.7\nseed = 11"
        )
        .unwrap();
        let path = file.path().to_string_lossy().into_owned();
        let cli = parse(&[
            "madforge",
            "run",
            "data.jsonl",
            "--config",
            &path,
            "--rounds",
            "2",
        ]);
        let config = resolve_config(&cli).unwrap();
        assert_eq!(config.strategy, Strategy::ExtendedReflection);
        // Flag wins over file.
        assert_eq!(config.num_rounds, 2);
        assert_eq!(config.temperature, 0.7);
        assert_eq!(config.seed, Some(11));
    }

    #[test]
    fn invalid_config_is_exit_code_two() {
        let cli = parse(&["madforge", "run", "data.jsonl", "--agents", "9"]);
        let err = resolve_config(&cli).unwrap_err();
        assert_eq!(err.exit_code, 2);
    }

    #[test]
    fn strict_mode_rejects_off_grid_temperature() {
        let cli = parse(&[
            "madforge",
            "run",
            "data.jsonl",
            "--temperature",
            "0.5",
            "--strict-paper-config",
        ]);
        assert_eq!(resolve_config(&cli).unwrap_err().exit_code, 2);
        let cli = parse(&["madforge", "run", "data.jsonl", "--temperature", "0.5"]);
        assert!(resolve_config(&cli).is_ok());
    }

    #[test]
    fn unknown_backend_rejected() {
        match build_backend(Some("carrier-pigeon")) {
            Err(e) => assert_eq!(e.exit_code, 2),
            Ok(_) => panic!("expected a configuration error"),
        }
    }

    #[test]
    fn task_parsing() {
        assert_eq!(parse_task("summarization").unwrap(), TaskKind::CodeSummarization);
        assert_eq!(parse_task("translation").unwrap(), TaskKind::CodeTranslation);
        assert!(parse_task("poetry").is_err());
    }
}
