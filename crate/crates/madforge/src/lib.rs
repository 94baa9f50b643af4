//! madforge — an orchestration engine and experiment harness for
//! multi-agent debate over software-engineering tasks.
//!
//! A debate runs a small team of debater agents through a fixed sequence of
//! task stages. Each round, every debater produces a task output, takes a
//! position (agree/disagree) toward earlier speakers, and explains itself; a
//! judge then weighs the candidates against stage-specific assessment
//! factors. Three strategies control judge cadence:
//!
//! * **Default** — judge once, after the final round.
//! * **Early Termination** — judge after every round; stop at the first
//!   winner.
//! * **Extended Reflection** — when the judge declines to pick a winner,
//!   feed its critique back to the debaters and retry, up to a retry limit.
//!
//! The crate also ships the surrounding experiment tooling: a live
//! OpenAI-compatible backend and a deterministic scripted backend, a
//! versioned JSON log format with a JSONL corpus layer, debate-pattern
//! classification, text metrics (BLEU, ROUGE-L, a METEOR variant),
//! execution-based evaluation, and Welch/Cohen statistics for comparing
//! runs. See the `examples/` directory for one runnable example per major
//! capability; the `madforge` binary exposes the same flows as subcommands.

pub mod analysis;
pub mod backends;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod metrics;
pub mod orchestrator;
pub mod pipeline;
pub mod record;
pub mod testutil;
