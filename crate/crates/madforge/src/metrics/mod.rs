//! Evaluation metrics: textual similarity, execution-based accuracy, and
//! the statistical comparison toolkit.

mod exec;
mod stats;
mod text;

pub use exec::{
    computational_accuracy, execution_accuracy, run_execution_suite, ExecError, ExecResult,
    LanguageCommands, RunnerConfig, TestCase, TestOutcome,
};
pub use stats::{
    cohens_d, effect_size_band, student_t_p_value, welch_t_test, StatError, StatReport,
};
pub use text::{
    bleu, corpus_bleu, meteor_lite, rouge_l, MetricError, RougeScore, TokenizedText,
};
