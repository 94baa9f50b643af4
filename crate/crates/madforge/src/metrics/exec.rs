//! Execution-based evaluation: compile and run generated programs against
//! per-test stdin/stdout pairs inside a throwaway sandbox directory.
//!
//! The runner trusts the operator's environment — it shells out to the
//! configured toolchain and provides process-level isolation only (own
//! working directory, per-test wall-clock timeout), not container-grade
//! sandboxing.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One stdin/stdout test for a translated program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCase {
    pub test_id: String,
    #[serde(default)]
    pub stdin: String,
    pub expected_stdout: String,
}

/// Commands for one language. `{file}` in any argument is replaced with the
/// absolute path of the source file written into the sandbox.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageCommands {
    /// File name the source is written under (fixes the extension).
    pub file_name: String,
    /// Optional compile / syntax-check step; a nonzero exit marks the
    /// sample as not compiled and skips the tests.
    #[serde(default)]
    pub compile: Option<Vec<String>>,
    /// Command run once per test with the test's stdin.
    pub run: Vec<String>,
}

/// Language → command templates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunnerConfig {
    pub languages: BTreeMap<String, LanguageCommands>,
    /// Per-test wall-clock timeout in seconds (default 10).
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
}

fn default_timeout_secs() -> u64 {
    10
}

impl RunnerConfig {
    /// A config covering Python 3, suitable for tests and examples.
    pub fn with_python3() -> Self {
        let mut languages = BTreeMap::new();
        languages.insert(
            "python".to_string(),
            LanguageCommands {
                file_name: "main.py".to_string(),
                compile: Some(vec![
                    "python3".into(),
                    "-m".into(),
                    "py_compile".into(),
                    "{file}".into(),
                ]),
                run: vec!["python3".into(), "{file}".into()],
            },
        );
        RunnerConfig {
            languages,
            timeout_secs: default_timeout_secs(),
        }
    }
}

/// Outcome of one test case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub test_id: String,
    pub passed: bool,
    /// Set when the test was killed at the wall-clock limit.
    pub timed_out: bool,
    pub actual_stdout: String,
}

/// Result of compiling and testing one program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecResult {
    pub compiled: bool,
    pub tests: Vec<TestOutcome>,
}

impl ExecResult {
    pub fn all_passed(&self) -> bool {
        self.compiled && self.tests.iter().all(|t| t.passed)
    }
}

#[derive(Debug, Error)]
pub enum ExecError {
    #[error("no runner command configured for language `{0}`")]
    RunnerMisconfigured(String),
    #[error("sandbox I/O failure: {0}")]
    SandboxError(#[from] std::io::Error),
}

/// Fraction of results that compiled. Empty input yields 0 with a warning.
pub fn execution_accuracy(results: &[ExecResult]) -> f64 {
    if results.is_empty() {
        log::warn!("execution_accuracy over an empty result set; reporting 0");
        return 0.0;
    }
    results.iter().filter(|r| r.compiled).count() as f64 / results.len() as f64
}

/// Fraction of results that compiled and passed every test. Empty input
/// yields 0 with a warning.
pub fn computational_accuracy(results: &[ExecResult]) -> f64 {
    if results.is_empty() {
        log::warn!("computational_accuracy over an empty result set; reporting 0");
        return 0.0;
    }
    results.iter().filter(|r| r.all_passed()).count() as f64 / results.len() as f64
}

fn substitute(template: &[String], file: &str) -> Vec<String> {
    template
        .iter()
        .map(|arg| arg.replace("{file}", file))
        .collect()
}

fn normalize_stdout(s: &str) -> String {
    let mut out: Vec<&str> = s.lines().map(|l| l.trim_end()).collect();
    while out.last().is_some_and(|l| l.is_empty()) {
        out.pop();
    }
    out.join("\n")
}

/// Run `argv` with the given stdin, killing it at `timeout`. Returns
/// `(exit_ok, stdout, timed_out)`.
fn run_with_timeout(
    argv: &[String],
    stdin: &str,
    cwd: &std::path::Path,
    timeout: Duration,
) -> std::io::Result<(bool, String, bool)> {
    let mut child = Command::new(&argv[0])
        .args(&argv[1..])
        .current_dir(cwd)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()?;
    if let Some(mut pipe) = child.stdin.take() {
        // The child may exit without reading; a broken pipe is fine.
        let _ = pipe.write_all(stdin.as_bytes());
    }
    let start = Instant::now();
    loop {
        if child.try_wait()?.is_some() {
            break;
        }
        if start.elapsed() >= timeout {
            child.kill()?;
            child.wait()?;
            return Ok((false, String::new(), true));
        }
        std::thread::sleep(Duration::from_millis(10));
    }
    let output = child.wait_with_output()?;
    Ok((
        output.status.success(),
        String::from_utf8_lossy(&output.stdout).into_owned(),
        false,
    ))
}

/// Write `code` into a fresh sandbox directory, run the optional compile
/// step, then each test with its stdin, comparing stdout to the expected
/// output after trailing-whitespace normalization. A test that exceeds the
/// wall-clock timeout is marked failed.
pub fn run_execution_suite(
    code: &str,
    language: &str,
    tests: &[TestCase],
    config: &RunnerConfig,
) -> Result<ExecResult, ExecError> {
    let commands = config
        .languages
        .get(language)
        .ok_or_else(|| ExecError::RunnerMisconfigured(language.to_string()))?;
    if commands.run.is_empty() {
        return Err(ExecError::RunnerMisconfigured(language.to_string()));
    }

    let sandbox = tempdir()?;
    let file = sandbox.join(&commands.file_name);
    std::fs::write(&file, code)?;
    let file_str = file.to_string_lossy().into_owned();
    let timeout = Duration::from_secs(config.timeout_secs);

    if let Some(compile) = &commands.compile {
        let argv = substitute(compile, &file_str);
        let (ok, _, timed_out) = run_with_timeout(&argv, "", &sandbox, timeout)?;
        if !ok || timed_out {
            let result = ExecResult {
                compiled: false,
                tests: Vec::new(),
            };
            cleanup(&sandbox);
            return Ok(result);
        }
    }

    let run_argv = substitute(&commands.run, &file_str);
    let mut outcomes = Vec::with_capacity(tests.len());
    for test in tests {
        let (ok, stdout, timed_out) = run_with_timeout(&run_argv, &test.stdin, &sandbox, timeout)?;
        let actual = normalize_stdout(&stdout);
        let passed = ok && !timed_out && actual == normalize_stdout(&test.expected_stdout);
        outcomes.push(TestOutcome {
            test_id: test.test_id.clone(),
            passed,
            timed_out,
            actual_stdout: actual,
        });
    }
    cleanup(&sandbox);
    Ok(ExecResult {
        compiled: true,
        tests: outcomes,
    })
}

/// Create a unique sandbox directory under the system temp dir.
fn tempdir() -> std::io::Result<std::path::PathBuf> {
    use std::sync::atomic::{AtomicU64, Ordering};
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let n = COUNTER.fetch_add(1, Ordering::Relaxed);
    let dir = std::env::temp_dir().join(format!(
        "madforge-exec-{}-{}-{n}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos())
            .unwrap_or(0)
    ));
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn cleanup(dir: &std::path::Path) {
    if let Err(e) = std::fs::remove_dir_all(dir) {
        log::warn!("failed to remove sandbox {}: {e}", dir.display());
    }
}
