//! Debate-pattern classification and corpus statistics.
//!
//! Underperforming debates fall into three trajectory patterns read off the
//! failed stage: Forceful Agreement (Disagree at the start, Agree at the
//! end), Ending Divergence (Agree then Disagree), and Prolonged Disagreement
//! (Disagree throughout). Everything else, including accepted debates, lands
//! in the residual Converged category.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::record::{DebateLog, Outcome, StageRecord, Stance, TurnRecord};

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum PatternCategory {
    ForcefulAgreement,
    EndingDivergence,
    ProlongedDisagreement,
    /// Residual: accepted debates, and rejected debates whose trajectory
    /// stayed Agree throughout.
    Converged,
}

impl PatternCategory {
    pub const ALL: [PatternCategory; 4] = [
        PatternCategory::ForcefulAgreement,
        PatternCategory::EndingDivergence,
        PatternCategory::ProlongedDisagreement,
        PatternCategory::Converged,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PatternCategory::ForcefulAgreement => "Forceful Agreement",
            PatternCategory::EndingDivergence => "Ending Divergence",
            PatternCategory::ProlongedDisagreement => "Prolonged Disagreement",
            PatternCategory::Converged => "Converged",
        }
    }

    pub fn parse(text: &str) -> Option<PatternCategory> {
        let trimmed = text.trim();
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(trimmed) || {
                let snake: String = c
                    .name()
                    .to_ascii_lowercase()
                    .replace(' ', "_");
                snake == trimmed.to_ascii_lowercase()
            })
    }

    pub fn definition(&self) -> &'static str {
        match self {
            PatternCategory::ForcefulAgreement => {
                "Most agents disagree at the beginning of the debate but agree at the end; low-quality responses force the debate toward an incorrect consensus."
            }
            PatternCategory::EndingDivergence => {
                "Most agents agree at the start of the debate but disagree by the end; an initially acceptable response is gradually abandoned."
            }
            PatternCategory::ProlongedDisagreement => {
                "Most agents disagree at the beginning and still disagree at the end; agents resist each other's reasoning and the response quality stagnates."
            }
            PatternCategory::Converged => {
                "The debate converged: either the judge accepted an answer, or agents agreed throughout despite the rejection."
            }
        }
    }
}

/// Majority stance at the start and end of a stage's debate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start_stance: Stance,
    pub end_stance: Stance,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("no position-bearing turn available to compute a stance")]
    InsufficientTurns,
    #[error("label lists differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// A turn's scalar stance: the majority of its position stances, with
/// Disagree winning ties. Turns without positions have no stance.
pub fn turn_stance(turn: &TurnRecord) -> Option<Stance> {
    if turn.positions.is_empty() {
        return None;
    }
    let agree = turn
        .positions
        .iter()
        .filter(|p| p.stance == Stance::Agree)
        .count();
    let disagree = turn.positions.len() - agree;
    Some(if agree > disagree {
        Stance::Agree
    } else {
        Stance::Disagree
    })
}

/// Majority over the scalar stances of position-bearing turns in one round.
fn round_stance(turns: &[TurnRecord], round: usize) -> Option<Stance> {
    let stances: Vec<Stance> = turns
        .iter()
        .filter(|t| t.round_index == round)
        .filter_map(turn_stance)
        .collect();
    if stances.is_empty() {
        return None;
    }
    let agree = stances.iter().filter(|s| **s == Stance::Agree).count();
    let disagree = stances.len() - agree;
    Some(if agree > disagree {
        Stance::Agree
    } else {
        Stance::Disagree
    })
}

/// Computes a stage's position trajectory: the majority stance over the
/// first round of the first attempt vs the last round of the last attempt.
pub fn position_trajectory(stage: &StageRecord) -> Result<Trajectory, AnalysisError> {
    let first = stage.attempts.first().ok_or(AnalysisError::InsufficientTurns)?;
    let last = stage.attempts.last().ok_or(AnalysisError::InsufficientTurns)?;
    let last_round = last
        .turns
        .iter()
        .map(|t| t.round_index)
        .max()
        .ok_or(AnalysisError::InsufficientTurns)?;
    let start_stance =
        round_stance(&first.turns, 0).ok_or(AnalysisError::InsufficientTurns)?;
    let end_stance =
        round_stance(&last.turns, last_round).ok_or(AnalysisError::InsufficientTurns)?;
    Ok(Trajectory {
        start_stance,
        end_stance,
    })
}

/// Classifies a debate. Accepted debates are Converged; underperforming
/// debates are classified on their first failed stage.
pub fn classify_debate(log: &DebateLog) -> Result<PatternCategory, AnalysisError> {
    if log.outcome == Outcome::Accepted {
        return Ok(PatternCategory::Converged);
    }
    let failed = match log.stages.iter().find(|s| s.failed()) {
        Some(stage) => stage,
        None => return Ok(PatternCategory::Converged),
    };
    let trajectory = position_trajectory(failed)?;
    Ok(match (trajectory.start_stance, trajectory.end_stance) {
        (Stance::Disagree, Stance::Agree) => PatternCategory::ForcefulAgreement,
        (Stance::Agree, Stance::Disagree) => PatternCategory::EndingDivergence,
        (Stance::Disagree, Stance::Disagree) => PatternCategory::ProlongedDisagreement,
        // Agree throughout yet rejected: kept out of the three failure
        // patterns and reported under the residual label.
        (Stance::Agree, Stance::Agree) => PatternCategory::Converged,
    })
}

/// Simple percent agreement between two label lists.
pub fn inter_rater_agreement(
    labels_a: &[PatternCategory],
    labels_b: &[PatternCategory],
) -> Result<f64, AnalysisError> {
    if labels_a.len() != labels_b.len() || labels_a.is_empty() {
        return Err(AnalysisError::LengthMismatch(labels_a.len(), labels_b.len()));
    }
    let matches = labels_a
        .iter()
        .zip(labels_b)
        .filter(|(a, b)| a == b)
        .count();
    Ok(matches as f64 / labels_a.len() as f64)
}

/// Category counts and ratios over a labeled corpus.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub counts: BTreeMap<PatternCategory, usize>,
    pub ratios: BTreeMap<PatternCategory, f64>,
    pub total: usize,
}

pub fn category_distribution(labels: &[PatternCategory]) -> Distribution {
    let mut counts: BTreeMap<PatternCategory, usize> = BTreeMap::new();
    for cat in PatternCategory::ALL {
        counts.insert(cat, 0);
    }
    for label in labels {
        *counts.get_mut(label).expect("all categories pre-seeded") += 1;
    }
    let total = labels.len();
    let ratios = counts
        .iter()
        .map(|(cat, n)| {
            let ratio = if total == 0 {
                0.0
            } else {
                *n as f64 / total as f64
            };
            (*cat, ratio)
        })
        .collect();
    Distribution {
        counts,
        ratios,
        total,
    }
}

impl Distribution {
    /// Pointwise count merge.
    pub fn merge(&self, other: &Distribution) -> Distribution {
        let mut labels = Vec::new();
        for (cat, n) in self.counts.iter().chain(other.counts.iter()) {
            labels.extend(std::iter::repeat(*cat).take(*n));
        }
        category_distribution(&labels)
    }

    /// Aligned text table in the categorization-table layout.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<26} {:>18} {:>9}\n",
            "Debate Category", "# of Debate Logs", "Ratio"
        ));
        for cat in PatternCategory::ALL {
            out.push_str(&format!(
                "{:<26} {:>18} {:>8.2}%\n",
                cat.name(),
                self.counts[&cat],
                self.ratios[&cat] * 100.0
            ));
        }
        let total_ratio = if self.total == 0 { 0.0 } else { 100.0 };
        out.push_str(&format!(
            "{:<26} {:>18} {:>8.2}%\n",
            "Total Debate Logs", self.total, total_ratio
        ));
        out
    }
}

fn render_log_for_annotation(log: &DebateLog) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "Sample: {} | Task: {} | Outcome: {:?}\n",
        log.sample_id,
        log.task_kind.as_str(),
        log.outcome
    ));
    for (si, stage) in log.stages.iter().enumerate() {
        out.push_str(&format!("Stage {si} ({}):\n", stage.stage_spec_id));
        for (ai, attempt) in stage.attempts.iter().enumerate() {
            if stage.attempts.len() > 1 {
                out.push_str(&format!("  Attempt {ai}:\n"));
            }
            for turn in &attempt.turns {
                let stances: Vec<String> = turn
                    .positions
                    .iter()
                    .map(|p| {
                        format!(
                            "{:?} with {}",
                            p.stance, p.target_agent
                        )
                    })
                    .collect();
                out.push_str(&format!(
                    "  [round {}] {}: {} {}\n",
                    turn.round_index,
                    turn.agent_id,
                    turn.task_output,
                    if stances.is_empty() {
                        String::new()
                    } else {
                        format!("({})", stances.join("; "))
                    }
                ));
            }
            for verdict in &attempt.verdicts {
                out.push_str(&format!(
                    "  Judge: winner={}\n",
                    verdict.winner.as_deref().unwrap_or("none")
                ));
            }
        }
    }
    out
}

/// Builds the annotation prompt used to label a debate log with its pattern
/// category. In strict mode exactly three few-shot examples are required.
pub fn build_annotation_prompt(
    log: &DebateLog,
    few_shots: &[(DebateLog, PatternCategory)],
    strict: bool,
) -> String {
    if strict {
        assert_eq!(few_shots.len(), 3, "strict mode requires three few-shot examples");
    }
    let mut out = String::new();
    out.push_str("## Task description\n");
    out.push_str(
        "You are annotating the debate log of a multi-agent debate on a software-engineering task (code summarization or code translation). Several debate agents produced task outputs, took Agree/Disagree positions toward each other, and a judge decided whether any answer was acceptable.\n\n",
    );
    out.push_str("## Debate log format\n");
    out.push_str(
        "Each log lists its stages in order. Every line shows the round, the agent, its task output, and its positions toward earlier agents. A judge line closes each attempt with the winner or `none`.\n\n",
    );
    out.push_str("## Category definitions\n");
    for cat in [
        PatternCategory::ForcefulAgreement,
        PatternCategory::EndingDivergence,
        PatternCategory::ProlongedDisagreement,
    ] {
        out.push_str(&format!("- {}: {}\n", cat.name(), cat.definition()));
    }
    out.push('\n');
    out.push_str("## Expected output format\n");
    out.push_str(&format!(
        "Reply with exactly one category name: \"{}\", \"{}\", or \"{}\".\n\n",
        PatternCategory::ForcefulAgreement.name(),
        PatternCategory::EndingDivergence.name(),
        PatternCategory::ProlongedDisagreement.name()
    ));
    if !few_shots.is_empty() {
        out.push_str("## Examples\n");
        for (example, label) in few_shots {
            out.push_str(&render_log_for_annotation(example));
            out.push_str(&format!("Category: {}\n\n", label.name()));
        }
    }
    out.push_str("## Debate log to annotate\n");
    out.push_str(&render_log_for_annotation(log));
    out
}
