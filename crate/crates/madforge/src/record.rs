//! Debate record types and durable log serialization.
//!
//! A [`DebateLog`] captures the full interaction history of one debated
//! sample: every debater turn, every judge verdict, and the token
//! accounting. Logs serialize to a versioned JSON document, one debate per
//! file, plus a line-delimited corpus format for bulk analytics.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::ops::{Add, AddAssign};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{DebateConfig, Strategy};

/// Current log schema version. Bump on any breaking field change.
pub const LOG_SCHEMA_VERSION: u32 = 1;

/// API call and token accounting, additive under aggregation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub api_calls: u64,
    pub input_tokens: u64,
    pub output_tokens: u64,
}

impl TokenUsage {
    pub fn total_tokens(&self) -> u64 {
        self.input_tokens + self.output_tokens
    }
}

impl Add for TokenUsage {
    type Output = TokenUsage;
    fn add(self, rhs: TokenUsage) -> TokenUsage {
        TokenUsage {
            api_calls: self.api_calls + rhs.api_calls,
            input_tokens: self.input_tokens + rhs.input_tokens,
            output_tokens: self.output_tokens + rhs.output_tokens,
        }
    }
}

impl AddAssign for TokenUsage {
    fn add_assign(&mut self, rhs: TokenUsage) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for TokenUsage {
    fn sum<I: Iterator<Item = TokenUsage>>(iter: I) -> TokenUsage {
        iter.fold(TokenUsage::default(), |a, b| a + b)
    }
}

/// Agree/Disagree stance toward an earlier turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stance {
    Agree,
    Disagree,
}

/// A stance held toward one specific earlier agent in the same attempt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Position {
    pub target_agent: String,
    pub stance: Stance,
    #[serde(default)]
    pub rationale_span: String,
}

/// Judge assessment factors (Table-style definitions live in the pipeline).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum AssessmentFactor {
    Expressiveness,
    ContentAdequacy,
    Conciseness,
    TranslationAccuracy,
    FunctionalCorrectness,
}

impl AssessmentFactor {
    pub fn name(&self) -> &'static str {
        match self {
            AssessmentFactor::Expressiveness => "Expressiveness",
            AssessmentFactor::ContentAdequacy => "Content Adequacy",
            AssessmentFactor::Conciseness => "Conciseness",
            AssessmentFactor::TranslationAccuracy => "Translation Accuracy",
            AssessmentFactor::FunctionalCorrectness => "Functional Correctness",
        }
    }

    pub fn definition(&self) -> &'static str {
        match self {
            AssessmentFactor::Expressiveness => "Clarity and readability of summary.",
            AssessmentFactor::ContentAdequacy => "Coverage of key class details.",
            AssessmentFactor::Conciseness => "Avoidance of unnecessary details.",
            AssessmentFactor::TranslationAccuracy => "Consistency in syntax and structure.",
            AssessmentFactor::FunctionalCorrectness => "Maintaining the code functionality.",
        }
    }
}

/// One debater turn inside an attempt.
///
/// `turn_index` is the global order within the attempt; `round_index` is
/// always `turn_index / num_debaters`. The first turn of an attempt carries
/// no positions; every later turn holds one position per agent with an
/// earlier turn in the same attempt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnRecord {
    pub agent_id: String,
    pub stage_index: usize,
    pub round_index: usize,
    pub turn_index: usize,
    pub task_output: String,
    pub positions: Vec<Position>,
    pub explanation: String,
    pub raw_reply: String,
    pub usage: TokenUsage,
    /// Set when the reply could not be parsed and the raw text was recorded
    /// as the task output after one re-ask.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub degraded: bool,
}

/// Judge output for one attempt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub winner: Option<String>,
    #[serde(default)]
    pub factor_notes: BTreeMap<AssessmentFactor, String>,
    pub feedback: Option<String>,
    pub accepted_answer: Option<String>,
    pub raw_reply: String,
    #[serde(default)]
    pub usage: TokenUsage,
}

/// One full debate pass over a stage: its turns and the verdicts issued.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attempt {
    pub turns: Vec<TurnRecord>,
    pub verdicts: Vec<Verdict>,
    /// Judge feedback carried into this attempt's debater prompts
    /// (extended reflection retries only).
    pub judge_feedback_injected: Option<String>,
}

impl Attempt {
    /// The verdict that accepted an answer, if any.
    pub fn winning_verdict(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.winner.is_some())
    }
}

/// All attempts for one stage of the task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage_spec_id: String,
    pub attempts: Vec<Attempt>,
}

impl StageRecord {
    pub fn winning_verdict(&self) -> Option<&Verdict> {
        self.attempts.iter().find_map(|a| a.winning_verdict())
    }

    /// A stage fails when no attempt produced a winning verdict.
    pub fn failed(&self) -> bool {
        self.winning_verdict().is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    CodeSummarization,
    CodeTranslation,
}

impl TaskKind {
    /// Both built-in tasks decompose into three sequential stages.
    pub fn stage_count(&self) -> usize {
        3
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            TaskKind::CodeSummarization => "code_summarization",
            TaskKind::CodeTranslation => "code_translation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Accepted,
    /// Some stage ended with no acceptable answer per the judge.
    Underperforming,
}

/// The full interaction history of one debated sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DebateLog {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub sample_id: String,
    pub task_kind: TaskKind,
    pub config: DebateConfig,
    pub stages: Vec<StageRecord>,
    pub final_answer: Option<String>,
    pub outcome: Outcome,
    pub totals: TokenUsage,
    /// Set when the debate stopped early on an unrecoverable backend error.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub aborted: bool,
}

fn default_schema_version() -> u32 {
    LOG_SCHEMA_VERSION
}

#[derive(Debug, Error)]
pub enum LogError {
    #[error("unsupported log schema version {0} (supported: {LOG_SCHEMA_VERSION})")]
    Schema(u32),
    #[error("malformed log document at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("invalid log: {0}")]
    Invalid(String),
    #[error("log i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl DebateLog {
    /// Checks every structural invariant. Called on deserialization so a
    /// persisted log can be trusted downstream.
    pub fn validate(&self) -> Result<(), LogError> {
        let err = |m: String| Err(LogError::Invalid(m));
        // An aborted log may have stopped before reaching every stage.
        let stage_count_ok = if self.aborted {
            self.stages.len() <= self.task_kind.stage_count()
        } else {
            self.stages.len() == self.task_kind.stage_count()
        };
        if !stage_count_ok {
            return err(format!(
                "expected {} stages for {:?}, found {}",
                self.task_kind.stage_count(),
                self.task_kind,
                self.stages.len()
            ));
        }
        let max_attempts = self.config.max_attempts();
        let mut summed = TokenUsage::default();
        for (si, stage) in self.stages.iter().enumerate() {
            if stage.attempts.is_empty() {
                return err(format!("stage {si} has no attempts"));
            }
            // An aborted log may stop mid-stage; attempt caps still apply.
            if stage.attempts.len() > max_attempts {
                return err(format!(
                    "stage {si} has {} attempts, limit {max_attempts}",
                    stage.attempts.len()
                ));
            }
            for (ai, attempt) in stage.attempts.iter().enumerate() {
                if attempt.turns.is_empty() {
                    return err(format!("stage {si} attempt {ai} has no turns"));
                }
                let mut seen: Vec<&str> = Vec::new();
                for (ti, turn) in attempt.turns.iter().enumerate() {
                    if turn.turn_index != ti {
                        return err(format!(
                            "stage {si} attempt {ai}: turn_index {} out of order (expected {ti})",
                            turn.turn_index
                        ));
                    }
                    let expected_round = ti / self.config.num_debaters;
                    if turn.round_index != expected_round {
                        return err(format!(
                            "stage {si} attempt {ai} turn {ti}: round_index {} != {expected_round}",
                            turn.round_index
                        ));
                    }
                    if ti == 0 {
                        if !turn.positions.is_empty() {
                            return err(format!(
                                "stage {si} attempt {ai}: initial turn carries positions"
                            ));
                        }
                    } else if turn.positions.is_empty() && !turn.degraded {
                        return err(format!(
                            "stage {si} attempt {ai} turn {ti}: non-initial turn has no positions"
                        ));
                    }
                    for pos in &turn.positions {
                        if !seen.contains(&pos.target_agent.as_str()) {
                            return err(format!(
                                "stage {si} attempt {ai} turn {ti}: position targets {} with no earlier turn",
                                pos.target_agent
                            ));
                        }
                    }
                    if !seen.contains(&turn.agent_id.as_str()) {
                        seen.push(&turn.agent_id);
                    }
                    summed += turn.usage;
                }
                for verdict in &attempt.verdicts {
                    if let Some(winner) = &verdict.winner {
                        let latest = attempt
                            .turns
                            .iter()
                            .rev()
                            .find(|t| &t.agent_id == winner);
                        let Some(latest) = latest else {
                            return err(format!(
                                "stage {si} attempt {ai}: winner {winner} has no turn"
                            ));
                        };
                        if verdict.accepted_answer.as_deref() != Some(&latest.task_output) {
                            return err(format!(
                                "stage {si} attempt {ai}: accepted_answer does not match {winner}'s latest task_output"
                            ));
                        }
                    } else if self.config.strategy == Strategy::ExtendedReflection
                        && verdict.feedback.is_none()
                    {
                        return err(format!(
                            "stage {si} attempt {ai}: no-winner verdict without feedback under extended reflection"
                        ));
                    }
                    summed += verdict.usage;
                }
            }
        }
        let some_failed = self.stages.iter().any(|s| s.failed());
        let underperforming = self.outcome == Outcome::Underperforming;
        if some_failed != underperforming && !self.aborted {
            return err(format!(
                "outcome {:?} inconsistent with stage verdicts (failed stage present: {some_failed})",
                self.outcome
            ));
        }
        // Aborted logs may have paid for calls whose records were dropped.
        if summed != self.totals && !self.aborted {
            return err(format!(
                "totals {:?} do not equal the sum of per-turn and per-verdict usage {:?}",
                self.totals, summed
            ));
        }
        Ok(())
    }

    /// Serializes to the versioned one-debate-per-file document.
    pub fn to_document(&self) -> String {
        serde_json::to_string_pretty(self).expect("log serialization cannot fail")
    }

    /// Compact single-line form used by the corpus format.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("log serialization cannot fail")
    }

    /// Parses and validates a log document.
    pub fn from_document(text: &str) -> Result<DebateLog, LogError> {
        let log: DebateLog = serde_json::from_str(text).map_err(|e| LogError::Parse {
            offset: byte_offset(text, e.line(), e.column()),
            message: e.to_string(),
        })?;
        if log.schema_version != LOG_SCHEMA_VERSION {
            return Err(LogError::Schema(log.schema_version));
        }
        log.validate()?;
        Ok(log)
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let line_start: usize = text
        .split_inclusive('\n')
        .take(line - 1)
        .map(|l| l.len())
        .sum();
    line_start + column.saturating_sub(1)
}

/// Writes a line-delimited corpus, one log per line.
pub fn write_corpus<P: AsRef<Path>>(path: P, logs: &[DebateLog]) -> Result<(), LogError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    for log in logs {
        writeln!(file, "{}", log.to_line())?;
    }
    file.flush()?;
    Ok(())
}

/// Reads a line-delimited corpus, validating each log.
pub fn read_corpus<P: AsRef<Path>>(path: P) -> Result<Vec<DebateLog>, LogError> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut logs = Vec::new();
    for (idx, line) in file.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let log = DebateLog::from_document(&line).map_err(|e| match e {
            LogError::Parse { offset, message } => LogError::Parse {
                offset,
                message: format!("line {}: {message}", idx + 1),
            },
            other => other,
        })?;
        logs.push(log);
    }
    Ok(logs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_is_additive() {
        let a = TokenUsage {
            api_calls: 3,
            input_tokens: 10,
            output_tokens: 5,
        };
        let b = TokenUsage {
            api_calls: 5,
            input_tokens: 1,
            output_tokens: 2,
        };
        let s = a + b;
        assert_eq!(s.api_calls, 8);
        assert_eq!(s.total_tokens(), 18);
        assert_eq!(a + b, b + a);
    }

    #[test]
    fn byte_offset_arithmetic() {
        let text = "ab\ncd\nef";
        assert_eq!(byte_offset(text, 1, 1), 0);
        assert_eq!(byte_offset(text, 2, 2), 4);
        assert_eq!(byte_offset(text, 3, 1), 6);
    }

    #[test]
    fn unknown_schema_version_rejected() {
        let log = crate::testutil::sample_log();
        let mut value: serde_json::Value = serde_json::from_str(&log.to_document()).unwrap();
        value["schema_version"] = serde_json::json!(99);
        let err = DebateLog::from_document(&value.to_string()).unwrap_err();
        assert!(matches!(err, LogError::Schema(99)));
    }

    #[test]
    fn empty_stages_log_fails_validation_on_load() {
        let mut log = crate::testutil::sample_log();
        log.stages.clear();
        let err = DebateLog::from_document(&log.to_document()).unwrap_err();
        assert!(matches!(err, LogError::Invalid(_)));
    }

    #[test]
    fn malformed_input_reports_byte_offset() {
        let err = DebateLog::from_document("{\"sample_id\": ???}").unwrap_err();
        match err {
            LogError::Parse { offset, .. } => assert!(offset > 0),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn three_stages_six_turns_preserved_in_order() {
        let log = crate::testutil::default_shape_log("fixture", 3, 2);
        let total_turns: usize = log
            .stages
            .iter()
            .flat_map(|s| &s.attempts)
            .map(|a| a.turns.len())
            .sum();
        assert_eq!(total_turns, 18);
        let back = DebateLog::from_document(&log.to_document()).unwrap();
        assert_eq!(back, log);
        for stage in &back.stages {
            let idx: Vec<usize> = stage.attempts[0].turns.iter().map(|t| t.turn_index).collect();
            assert_eq!(idx, (0..6).collect::<Vec<_>>());
        }
    }
}
