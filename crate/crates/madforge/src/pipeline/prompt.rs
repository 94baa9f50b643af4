//! Prompt construction for debater and judge agents.
//!
//! Templates are plain text assets with `{name}` placeholders. The built-in
//! templates live under `templates/`; operators can override them from a
//! directory. Placeholders, by template:
//!
//! debater.txt: `{agent_id}`, `{agent_number}`, `{num_debaters}`,
//!   `{overall_task}`, `{input_code}`, `{source_language}`,
//!   `{expected_output}`, `{stage_name}`, `{stage_goal}`,
//!   `{intent_vocabulary_section}`, `{carried_answer_section}`,
//!   `{round_number}`, `{history_section}`, `{feedback_section}`,
//!   `{format_contract}`
//!
//! judge.txt: `{no_winner_clause}`, `{stage_name}`, `{stage_goal}`,
//!   `{factors_section}`, `{candidates_section}`, `{format_contract}`

use std::path::Path;

use super::task::{StageSpec, TaskSpec};
use crate::orchestrator::Sample;
use crate::record::{Stance, TurnRecord};

const DEBATER_TEMPLATE: &str = include_str!("../../templates/debater.txt");
const JUDGE_TEMPLATE: &str = include_str!("../../templates/judge.txt");

/// The editable prompt templates used by one run.
#[derive(Debug, Clone)]
pub struct PromptTemplates {
    pub debater: String,
    pub judge: String,
}

impl Default for PromptTemplates {
    fn default() -> Self {
        PromptTemplates {
            debater: DEBATER_TEMPLATE.to_string(),
            judge: JUDGE_TEMPLATE.to_string(),
        }
    }
}

impl PromptTemplates {
    /// Loads `debater.txt` and `judge.txt` from a directory, keeping the
    /// built-in text for any file that is absent.
    pub fn from_dir<P: AsRef<Path>>(dir: P) -> std::io::Result<PromptTemplates> {
        let dir = dir.as_ref();
        let mut templates = PromptTemplates::default();
        let debater = dir.join("debater.txt");
        if debater.exists() {
            templates.debater = std::fs::read_to_string(debater)?;
        }
        let judge = dir.join("judge.txt");
        if judge.exists() {
            templates.judge = std::fs::read_to_string(judge)?;
        }
        Ok(templates)
    }
}

fn render(template: &str, vars: &[(&str, &str)]) -> String {
    let mut out = template.to_string();
    for (name, value) in vars {
        out = out.replace(&format!("{{{name}}}"), value);
    }
    out
}

fn render_history(history: &[TurnRecord]) -> String {
    if history.is_empty() {
        return "(no turns yet; you speak first)".to_string();
    }
    let mut out = String::new();
    for turn in history {
        out.push_str(&format!(
            "### {} (round {}, turn {})\n",
            turn.agent_id, turn.round_index, turn.turn_index
        ));
        out.push_str(&format!("Task Output: {}\n", turn.task_output));
        for pos in &turn.positions {
            let stance = match pos.stance {
                Stance::Agree => "Agree",
                Stance::Disagree => "Disagree",
            };
            if pos.rationale_span.is_empty() {
                out.push_str(&format!("Position: {stance} with {}\n", pos.target_agent));
            } else {
                out.push_str(&format!(
                    "Position: {stance} with {} ({})\n",
                    pos.target_agent, pos.rationale_span
                ));
            }
        }
        out.push_str(&format!("Explanation: {}\n\n", turn.explanation));
    }
    out.trim_end().to_string()
}

fn debater_contract(history: &[TurnRecord]) -> String {
    let mut out = String::from(
        "Respond with exactly one fenced JSON block:\n```json\n{\"task_output\": \"<your response to the sub-task>\", \"positions\": [...], \"explanation\": \"<the rationale for your stance and response>\"}\n```\n",
    );
    if history.is_empty() {
        out.push_str("You speak first, so `positions` must be an empty list.");
    } else {
        let mut targets: Vec<&str> = Vec::new();
        for turn in history {
            if !targets.contains(&turn.agent_id.as_str()) {
                targets.push(&turn.agent_id);
            }
        }
        out.push_str(
            "`positions` must contain one entry per preceding agent, each of the form {\"target_agent\": \"<id>\", \"stance\": \"agree\"|\"disagree\", \"rationale_span\": \"<short quote or reason>\"}. Required targets: ",
        );
        out.push_str(&targets.join(", "));
        out.push('.');
    }
    out
}

/// Builds the prompt for one debater turn. Pure: identical inputs yield
/// byte-identical prompts.
#[allow(clippy::too_many_arguments)]
pub fn build_debater_prompt(
    templates: &PromptTemplates,
    task: &TaskSpec,
    stage: &StageSpec,
    history: &[TurnRecord],
    agent_index: usize,
    num_debaters: usize,
    round_index: usize,
    sample: &Sample,
    carried_answer: Option<&str>,
    judge_feedback: Option<&str>,
) -> String {
    assert!(agent_index < num_debaters);
    let intent_section = match (&task.intent_vocabulary, stage.id.as_str()) {
        (Some(vocab), "intent_identification") => {
            let mut s = String::from("\nIntent categories (choose exactly one as your task output):\n");
            for cat in vocab {
                s.push_str(&format!("- {}: {}\n", cat.render(), cat.description()));
            }
            s
        }
        _ => String::new(),
    };
    let carried_section = match carried_answer {
        Some(answer) => format!(
            "\n## Accepted answer from the previous sub-task\n{answer}\n"
        ),
        None => String::new(),
    };
    let feedback_section = match judge_feedback {
        Some(feedback) => format!("## Judge feedback\n{feedback}\n\n"),
        None => String::new(),
    };
    let expected_output = match sample.target_language.as_deref() {
        Some(target) => format!(
            "{} Target language: {target}.",
            stage.output_description
        ),
        None => stage.output_description.clone(),
    };
    render(
        &templates.debater,
        &[
            ("agent_id", &format!("agent_{}", agent_index + 1)),
            ("agent_number", &(agent_index + 1).to_string()),
            ("num_debaters", &num_debaters.to_string()),
            ("overall_task", task.overall_description()),
            ("input_code", &sample.source_code),
            ("source_language", &sample.source_language),
            ("expected_output", &expected_output),
            ("stage_name", &stage.name),
            ("stage_goal", &stage.goal),
            ("intent_vocabulary_section", &intent_section),
            ("carried_answer_section", &carried_section),
            ("round_number", &round_index.to_string()),
            ("history_section", &render_history(history)),
            ("feedback_section", &feedback_section),
            ("format_contract", &debater_contract(history)),
        ],
    )
}

fn judge_contract(candidates: &[&str], allow_no_winner: bool) -> String {
    let names = candidates.join("\" | \"");
    if allow_no_winner {
        format!(
            "Respond with exactly one fenced JSON block:\n```json\n{{\"winner\": \"{names}\" | \"none\", \"factor_notes\": {{\"<factor>\": \"<note>\"}}, \"feedback\": \"<text>\"}}\n```\nIf no response is acceptable, set \"winner\": \"none\" and you must provide constructive \"feedback\" grounded in the assessment factors."
        )
    } else {
        format!(
            "Respond with exactly one fenced JSON block:\n```json\n{{\"winner\": \"{names}\", \"factor_notes\": {{\"<factor>\": \"<note>\"}}}}\n```"
        )
    }
}

/// Builds the judge prompt over one attempt's turns.
pub fn build_judge_prompt(
    templates: &PromptTemplates,
    stage: &StageSpec,
    attempt_turns: &[TurnRecord],
    allow_no_winner: bool,
) -> String {
    assert!(!attempt_turns.is_empty(), "judge needs at least one turn");
    let factors_section = stage
        .assessment_factors
        .iter()
        .map(|f| format!("- {}: {}", f.name(), f.definition()))
        .collect::<Vec<_>>()
        .join("\n");
    let candidates_section = render_history(attempt_turns);
    let mut candidate_ids: Vec<&str> = Vec::new();
    for turn in attempt_turns {
        if !candidate_ids.contains(&turn.agent_id.as_str()) {
            candidate_ids.push(&turn.agent_id);
        }
    }
    let no_winner_clause = if allow_no_winner {
        ", or declare that none is acceptable"
    } else {
        ""
    };
    render(
        &templates.judge,
        &[
            ("no_winner_clause", no_winner_clause),
            ("stage_name", &stage.name),
            ("stage_goal", &stage.goal),
            ("factors_section", &factors_section),
            ("candidates_section", &candidates_section),
            ("format_contract", &judge_contract(&candidate_ids, allow_no_winner)),
        ],
    )
}
