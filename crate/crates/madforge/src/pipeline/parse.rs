//! Structured reply parsing for debater and judge outputs.
//!
//! The primary path parses a fenced JSON block; the fallback path scans for
//! `TASK OUTPUT:` / `POSITION:` / `EXPLANATION:` headings so prose-leaning
//! models still get through.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::record::{AssessmentFactor, Position, Stance, Verdict};

/// The three-part content of one debater turn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnContent {
    pub task_output: String,
    #[serde(default)]
    pub positions: Vec<Position>,
    #[serde(default)]
    pub explanation: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplyParseError {
    #[error("no task output could be located in the reply")]
    MalformedReply,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JudgeParseError {
    #[error("no decision could be located in the judge reply")]
    MalformedVerdict,
    #[error("judge declared no winner but the no-winner option was not offered")]
    IllegalNoWinner,
}

/// Renders a turn as the canonical fenced block debaters are asked for.
pub fn render_turn_content(content: &TurnContent) -> String {
    let json = serde_json::to_string_pretty(content).expect("turn content serializes");
    format!("```json\n{json}\n```")
}

fn fenced_blocks(raw: &str) -> Vec<&str> {
    let mut blocks = Vec::new();
    let mut rest = raw;
    while let Some(start) = rest.find("```") {
        let after = &rest[start + 3..];
        let body_start = match after.find('\n') {
            Some(nl) => nl + 1,
            None => break,
        };
        let body = &after[body_start..];
        match body.find("```") {
            Some(end) => {
                blocks.push(body[..end].trim());
                rest = &body[end + 3..];
            }
            None => break,
        }
    }
    blocks
}

fn json_candidates(raw: &str) -> Vec<&str> {
    let mut candidates = fenced_blocks(raw);
    let trimmed = raw.trim();
    if trimmed.starts_with('{') {
        candidates.push(trimmed);
    }
    candidates
}

fn position_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)\b(agree|disagree)\s+with\s+agent[ _]?(\d+)").expect("static regex")
    })
}

/// Normalizes an agent reference ("agent_2", "Agent 2", "2") onto a known
/// agent identifier. Unknown references yield `None`.
fn resolve_agent(reference: &str, known_agents: &[String]) -> Option<String> {
    let trimmed = reference.trim();
    if let Some(exact) = known_agents.iter().find(|a| a.eq_ignore_ascii_case(trimmed)) {
        return Some(exact.clone());
    }
    let digits: String = trimmed.chars().filter(|c| c.is_ascii_digit()).collect();
    if !digits.is_empty() {
        let candidate = format!("agent_{digits}");
        if let Some(exact) = known_agents.iter().find(|a| **a == candidate) {
            return Some(exact.clone());
        }
    }
    None
}

fn parse_stance(text: &str) -> Option<Stance> {
    match text.trim().to_ascii_lowercase().as_str() {
        "agree" => Some(Stance::Agree),
        "disagree" => Some(Stance::Disagree),
        _ => None,
    }
}

#[derive(Deserialize)]
struct WirePosition {
    #[serde(alias = "target", alias = "agent")]
    target_agent: String,
    stance: String,
    #[serde(default)]
    rationale_span: String,
}

#[derive(Deserialize)]
struct WireTurn {
    task_output: serde_json::Value,
    #[serde(default)]
    positions: Vec<WirePosition>,
    #[serde(default)]
    explanation: String,
}

fn value_to_text(value: &serde_json::Value) -> String {
    match value {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn sanitize_positions(
    wire: Vec<WirePosition>,
    is_initial_turn: bool,
    known_agents: &[String],
) -> Vec<Position> {
    if is_initial_turn {
        if !wire.is_empty() {
            log::warn!("dropping {} positions on an initial turn", wire.len());
        }
        return Vec::new();
    }
    wire.into_iter()
        .filter_map(|p| {
            let target = match resolve_agent(&p.target_agent, known_agents) {
                Some(t) => t,
                None => {
                    log::warn!("dropping position toward unknown agent {:?}", p.target_agent);
                    return None;
                }
            };
            let stance = match parse_stance(&p.stance) {
                Some(s) => s,
                None => {
                    log::warn!("dropping position with unknown stance {:?}", p.stance);
                    return None;
                }
            };
            Some(Position {
                target_agent: target,
                stance,
                rationale_span: p.rationale_span,
            })
        })
        .collect()
}

/// Parses a debater reply into its three-part content.
pub fn parse_agent_reply(
    raw: &str,
    is_initial_turn: bool,
    known_agents: &[String],
) -> Result<TurnContent, ReplyParseError> {
    for candidate in json_candidates(raw) {
        if let Ok(wire) = serde_json::from_str::<WireTurn>(candidate) {
            return Ok(TurnContent {
                task_output: value_to_text(&wire.task_output),
                positions: sanitize_positions(wire.positions, is_initial_turn, known_agents),
                explanation: wire.explanation,
            });
        }
    }
    parse_headings(raw, is_initial_turn, known_agents)
}

fn heading_at(line: &str, name: &str) -> Option<usize> {
    let upper = line.trim_start().to_ascii_uppercase();
    if upper.starts_with(name) {
        let offset = line.len() - line.trim_start().len();
        Some(offset + name.len())
    } else {
        None
    }
}

fn parse_headings(
    raw: &str,
    is_initial_turn: bool,
    known_agents: &[String],
) -> Result<TurnContent, ReplyParseError> {
    const HEADINGS: [&str; 3] = ["TASK OUTPUT:", "POSITION:", "EXPLANATION:"];
    let mut sections: BTreeMap<&str, String> = BTreeMap::new();
    let mut current: Option<&str> = None;
    for line in raw.lines() {
        let mut matched = false;
        for heading in HEADINGS {
            if let Some(after) = heading_at(line, heading) {
                current = Some(heading);
                let rest = line[after..].trim();
                let entry = sections.entry(heading).or_default();
                if !rest.is_empty() {
                    entry.push_str(rest);
                    entry.push('\n');
                }
                matched = true;
                break;
            }
        }
        if !matched {
            if let Some(section) = current {
                let entry = sections.entry(section).or_default();
                entry.push_str(line);
                entry.push('\n');
            }
        }
    }
    let task_output = sections
        .get("TASK OUTPUT:")
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .ok_or(ReplyParseError::MalformedReply)?;
    let explanation = sections
        .get("EXPLANATION:")
        .map(|s| s.trim().to_string())
        .unwrap_or_default();
    let mut positions = Vec::new();
    if !is_initial_turn {
        if let Some(section) = sections.get("POSITION:") {
            for cap in position_regex().captures_iter(section) {
                let stance = parse_stance(&cap[1]).expect("regex admits only agree|disagree");
                if let Some(target) = resolve_agent(&cap[2], known_agents) {
                    positions.push(Position {
                        target_agent: target,
                        stance,
                        rationale_span: String::new(),
                    });
                } else {
                    log::warn!("dropping position toward unknown agent {}", &cap[2]);
                }
            }
        }
    }
    Ok(TurnContent {
        task_output,
        positions,
        explanation,
    })
}

#[derive(Deserialize)]
struct WireVerdict {
    winner: serde_json::Value,
    #[serde(default)]
    factor_notes: BTreeMap<String, String>,
    #[serde(default)]
    feedback: Option<String>,
}

fn parse_factor_key(key: &str) -> Option<AssessmentFactor> {
    let normalized: String = key
        .chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase();
    match normalized.as_str() {
        "expressiveness" => Some(AssessmentFactor::Expressiveness),
        "contentadequacy" => Some(AssessmentFactor::ContentAdequacy),
        "conciseness" => Some(AssessmentFactor::Conciseness),
        "translationaccuracy" => Some(AssessmentFactor::TranslationAccuracy),
        "functionalcorrectness" => Some(AssessmentFactor::FunctionalCorrectness),
        _ => None,
    }
}

/// Parses a judge reply into a verdict. `accepted_answer` and usage are
/// filled by the orchestrator, which knows the winning turn.
pub fn parse_judge_reply(
    raw: &str,
    known_agents: &[String],
    allow_no_winner: bool,
) -> Result<Verdict, JudgeParseError> {
    for candidate in json_candidates(raw) {
        if let Ok(wire) = serde_json::from_str::<WireVerdict>(candidate) {
            return finish_verdict(raw, wire, known_agents, allow_no_winner);
        }
    }
    // Heading fallback: a `WINNER:` line plus an optional `FEEDBACK:` section.
    let mut winner_text: Option<String> = None;
    let mut feedback = String::new();
    let mut in_feedback = false;
    for line in raw.lines() {
        if let Some(after) = heading_at(line, "WINNER:") {
            winner_text = Some(line[after..].trim().to_string());
            in_feedback = false;
        } else if let Some(after) = heading_at(line, "FEEDBACK:") {
            in_feedback = true;
            let rest = line[after..].trim();
            if !rest.is_empty() {
                feedback.push_str(rest);
                feedback.push('\n');
            }
        } else if in_feedback {
            feedback.push_str(line);
            feedback.push('\n');
        }
    }
    let winner_text = winner_text.ok_or(JudgeParseError::MalformedVerdict)?;
    let wire = WireVerdict {
        winner: serde_json::Value::String(winner_text),
        factor_notes: BTreeMap::new(),
        feedback: {
            let f = feedback.trim().to_string();
            (!f.is_empty()).then_some(f)
        },
    };
    finish_verdict(raw, wire, known_agents, allow_no_winner)
}

fn finish_verdict(
    raw: &str,
    wire: WireVerdict,
    known_agents: &[String],
    allow_no_winner: bool,
) -> Result<Verdict, JudgeParseError> {
    let winner = match &wire.winner {
        serde_json::Value::Null => None,
        serde_json::Value::String(s) if s.trim().eq_ignore_ascii_case("none") => None,
        serde_json::Value::String(s) => Some(
            resolve_agent(s, known_agents).ok_or(JudgeParseError::MalformedVerdict)?,
        ),
        _ => return Err(JudgeParseError::MalformedVerdict),
    };
    if winner.is_none() && !allow_no_winner {
        return Err(JudgeParseError::IllegalNoWinner);
    }
    let factor_notes = wire
        .factor_notes
        .into_iter()
        .filter_map(|(k, v)| match parse_factor_key(&k) {
            Some(factor) => Some((factor, v)),
            None => {
                log::warn!("dropping note for unknown assessment factor {k:?}");
                None
            }
        })
        .collect();
    Ok(Verdict {
        winner,
        factor_notes,
        feedback: wire.feedback,
        accepted_answer: None,
        raw_reply: raw.to_string(),
        usage: Default::default(),
    })
}
