//! The debate state machine.
//!
//! A debate runs the task's stages in order, carrying each stage's accepted
//! answer into the next stage's prompts. Three strategies govern the judge
//! cadence: Default consults the judge once per stage after the final round;
//! EarlyTermination consults it after every round and stops at the first
//! winner; ExtendedReflection restarts a rejected stage with the judge's
//! feedback, up to the configured retry limit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backends::{Backend, BackendError, GenParams};
use crate::config::{DebateConfig, Strategy};
use crate::metrics::TestCase;
use crate::pipeline::{
    build_debater_prompt, build_judge_prompt, parse_agent_reply, parse_judge_reply, snap_intent,
    stages_for_task, JudgeParseError, PromptTemplates, StageSpec, TaskSpec,
};
use crate::record::{
    Attempt, DebateLog, Outcome, StageRecord, TaskKind, TokenUsage, TurnRecord, Verdict,
    LOG_SCHEMA_VERSION,
};

/// One input sample for a debate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub sample_id: String,
    pub task_kind: TaskKind,
    pub source_code: String,
    pub source_language: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_language: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tests: Vec<TestCase>,
}

impl Sample {
    pub fn validate(&self) -> Result<(), String> {
        match (self.task_kind, &self.target_language) {
            (TaskKind::CodeTranslation, None) => {
                Err("translation sample missing target_language".to_string())
            }
            (TaskKind::CodeSummarization, Some(_)) => {
                Err("summarization sample must not carry target_language".to_string())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Error)]
pub enum OrchestratorError {
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("judge reply unusable after one re-ask: {0}")]
    Judge(JudgeParseError),
}

/// An aborted debate still carries the partial log for preservation.
#[derive(Debug, Error)]
#[error("debate for sample {} aborted: {source}", .partial.sample_id)]
pub struct DebateAborted {
    pub partial: Box<DebateLog>,
    #[source]
    pub source: OrchestratorError,
}

/// Runs debates against a backend with a per-sample call budget.
pub struct Orchestrator<'a> {
    backend: &'a dyn Backend,
    templates: PromptTemplates,
    params: GenParams,
    /// Per-sample API call ceiling guarding against runaway debates.
    pub budget: u64,
}

pub const DEFAULT_CALL_BUDGET: u64 = 200;

struct DebateCtx<'s> {
    sample: &'s Sample,
    config: &'s DebateConfig,
    task: TaskSpec,
    agents: Vec<String>,
    totals: TokenUsage,
}

impl<'a> Orchestrator<'a> {
    pub fn new(backend: &'a dyn Backend) -> Orchestrator<'a> {
        Orchestrator {
            backend,
            templates: PromptTemplates::default(),
            params: GenParams::default(),
            budget: DEFAULT_CALL_BUDGET,
        }
    }

    pub fn with_templates(mut self, templates: PromptTemplates) -> Self {
        self.templates = templates;
        self
    }

    pub fn with_params(mut self, params: GenParams) -> Self {
        self.params = params;
        self
    }

    fn call(&self, ctx: &mut DebateCtx, prompt: &str) -> Result<(String, TokenUsage), OrchestratorError> {
        if ctx.totals.api_calls >= self.budget {
            return Err(BackendError::BudgetExceeded { limit: self.budget }.into());
        }
        let mut params = self.params.clone();
        params.temperature = ctx.config.temperature;
        let completion = self.backend.complete(prompt, &params)?;
        ctx.totals += completion.usage;
        Ok((completion.text, completion.usage))
    }

    fn debater_turn(
        &self,
        ctx: &mut DebateCtx,
        stage: &StageSpec,
        stage_index: usize,
        turns: &[TurnRecord],
        agent_index: usize,
        round_index: usize,
        carried: Option<&str>,
        feedback: Option<&str>,
    ) -> Result<TurnRecord, OrchestratorError> {
        let prompt = build_debater_prompt(
            &self.templates,
            &ctx.task,
            stage,
            turns,
            agent_index,
            ctx.config.num_debaters,
            round_index,
            ctx.sample,
            carried,
            feedback,
        );
        let turn_index = turns.len();
        let is_initial = turn_index == 0;
        let (raw, mut usage) = self.call(ctx, &prompt)?;
        let parsed = match parse_agent_reply(&raw, is_initial, &ctx.agents) {
            Ok(content) => Some((content, raw.clone(), false)),
            Err(_) => {
                // One automatic re-ask, then degrade to the raw text.
                let (raw2, usage2) = self.call(ctx, &prompt)?;
                usage += usage2;
                match parse_agent_reply(&raw2, is_initial, &ctx.agents) {
                    Ok(content) => Some((content, raw2, false)),
                    Err(_) => Some((
                        crate::pipeline::TurnContent {
                            task_output: raw2.clone(),
                            positions: Vec::new(),
                            explanation: String::new(),
                        },
                        raw2,
                        true,
                    )),
                }
            }
        };
        let (mut content, raw_reply, degraded) = parsed.expect("always set");
        if stage.id == "intent_identification" {
            content.task_output = snap_intent(&content.task_output).render().to_string();
        }
        Ok(TurnRecord {
            agent_id: ctx.agents[agent_index].clone(),
            stage_index,
            round_index,
            turn_index,
            task_output: content.task_output,
            positions: content.positions,
            explanation: content.explanation,
            raw_reply,
            usage,
            degraded,
        })
    }

    /// Calls the judge over the attempt's turns. For strategies without the
    /// no-winner option, a judge that still declines is treated as a
    /// no-winner verdict (the stage fails).
    fn judge(
        &self,
        ctx: &mut DebateCtx,
        stage: &StageSpec,
        turns: &[TurnRecord],
        allow_no_winner: bool,
    ) -> Result<Verdict, OrchestratorError> {
        let prompt = build_judge_prompt(&self.templates, stage, turns, allow_no_winner);
        let (raw, usage) = self.call(ctx, &prompt)?;
        let parsed = match parse_judge_reply(&raw, &ctx.agents, allow_no_winner) {
            Ok(v) => Ok(v),
            Err(JudgeParseError::IllegalNoWinner) => Ok(Verdict {
                winner: None,
                factor_notes: Default::default(),
                feedback: None,
                accepted_answer: None,
                raw_reply: raw.clone(),
                usage: Default::default(),
            }),
            Err(JudgeParseError::MalformedVerdict) => {
                // One re-ask before giving up on the sample.
                let (raw2, usage2) = self.call(ctx, &prompt)?;
                match parse_judge_reply(&raw2, &ctx.agents, allow_no_winner) {
                    Ok(mut v) => {
                        v.usage += usage2;
                        Ok(v)
                    }
                    Err(JudgeParseError::IllegalNoWinner) => Ok(Verdict {
                        winner: None,
                        factor_notes: Default::default(),
                        feedback: None,
                        accepted_answer: None,
                        raw_reply: raw2,
                        usage: usage2,
                    }),
                    Err(e) => Err(OrchestratorError::Judge(e)),
                }
            }
        };
        let mut verdict = parsed?;
        verdict.usage += usage;
        if let Some(winner) = verdict.winner.clone() {
            let latest = turns
                .iter()
                .rev()
                .find(|t| t.agent_id == winner)
                .expect("parse guarantees the winner is a known agent with a turn");
            verdict.accepted_answer = Some(latest.task_output.clone());
        }
        Ok(verdict)
    }

    /// Ensures a no-winner verdict under extended reflection carries
    /// feedback, re-asking the judge once if it is missing.
    fn ensure_feedback(
        &self,
        ctx: &mut DebateCtx,
        stage: &StageSpec,
        turns: &[TurnRecord],
        verdict: &mut Verdict,
    ) -> Result<(), OrchestratorError> {
        if verdict.winner.is_some() || verdict.feedback.is_some() {
            return Ok(());
        }
        let retry = self.judge(ctx, stage, turns, true)?;
        verdict.usage += retry.usage;
        verdict.feedback = match retry.feedback {
            Some(f) => Some(f),
            // Degraded: fall back to the judge's raw text so the retry
            // attempt still has something to reflect on.
            None => Some(retry.raw_reply),
        };
        Ok(())
    }

    fn run_attempt(
        &self,
        ctx: &mut DebateCtx,
        stage: &StageSpec,
        stage_index: usize,
        carried: Option<&str>,
        feedback: Option<&str>,
    ) -> Result<Attempt, OrchestratorError> {
        let strategy = ctx.config.strategy;
        let mut attempt = Attempt {
            turns: Vec::new(),
            verdicts: Vec::new(),
            judge_feedback_injected: feedback.map(str::to_string),
        };
        for round in 0..ctx.config.num_rounds {
            for agent in 0..ctx.config.num_debaters {
                let turn = self.debater_turn(
                    ctx,
                    stage,
                    stage_index,
                    &attempt.turns,
                    agent,
                    round,
                    carried,
                    feedback,
                )?;
                attempt.turns.push(turn);
            }
            match strategy {
                Strategy::EarlyTermination => {
                    let verdict = self.judge(ctx, stage, &attempt.turns, false)?;
                    let won = verdict.winner.is_some();
                    attempt.verdicts.push(verdict);
                    if won {
                        return Ok(attempt);
                    }
                }
                Strategy::Default if round + 1 == ctx.config.num_rounds => {
                    let verdict = self.judge(ctx, stage, &attempt.turns, false)?;
                    attempt.verdicts.push(verdict);
                }
                Strategy::ExtendedReflection if round + 1 == ctx.config.num_rounds => {
                    let mut verdict = self.judge(ctx, stage, &attempt.turns, true)?;
                    self.ensure_feedback(ctx, stage, &attempt.turns, &mut verdict)?;
                    attempt.verdicts.push(verdict);
                }
                _ => {}
            }
        }
        Ok(attempt)
    }

    fn run_stage(
        &self,
        ctx: &mut DebateCtx,
        stage: &StageSpec,
        stage_index: usize,
        carried: Option<&str>,
    ) -> Result<StageRecord, OrchestratorError> {
        let mut record = StageRecord {
            stage_spec_id: stage.id.clone(),
            attempts: Vec::new(),
        };
        let mut feedback: Option<String> = None;
        for _ in 0..ctx.config.max_attempts() {
            let attempt =
                self.run_attempt(ctx, stage, stage_index, carried, feedback.as_deref())?;
            let won = attempt.winning_verdict().is_some();
            feedback = attempt
                .verdicts
                .last()
                .and_then(|v| v.feedback.clone());
            record.attempts.push(attempt);
            if won {
                break;
            }
        }
        Ok(record)
    }

    /// Runs all stages in order and assembles the full log.
    pub fn run_debate(
        &self,
        sample: &Sample,
        config: &DebateConfig,
    ) -> Result<DebateLog, DebateAborted> {
        let task = stages_for_task(sample.task_kind);
        let agents: Vec<String> = (1..=config.num_debaters)
            .map(|i| format!("agent_{i}"))
            .collect();
        let mut ctx = DebateCtx {
            sample,
            config,
            task: task.clone(),
            agents,
            totals: TokenUsage::default(),
        };
        let mut stages: Vec<StageRecord> = Vec::new();
        let mut carried: Option<String> = None;
        let mut underperforming = false;
        for (stage_index, stage) in task.stages.iter().enumerate() {
            match self.run_stage(&mut ctx, stage, stage_index, carried.as_deref()) {
                Ok(record) => {
                    match record.winning_verdict() {
                        Some(verdict) => {
                            carried = verdict.accepted_answer.clone();
                        }
                        None => {
                            underperforming = true;
                            // Best-effort carry: the failed stage's last
                            // debater output, so later stages still run.
                            carried = record
                                .attempts
                                .last()
                                .and_then(|a| a.turns.last())
                                .map(|t| t.task_output.clone());
                        }
                    }
                    stages.push(record);
                }
                Err(source) => {
                    let partial = DebateLog {
                        schema_version: LOG_SCHEMA_VERSION,
                        sample_id: sample.sample_id.clone(),
                        task_kind: sample.task_kind,
                        config: config.clone(),
                        stages,
                        final_answer: None,
                        outcome: Outcome::Underperforming,
                        totals: ctx.totals,
                        aborted: true,
                    };
                    return Err(DebateAborted {
                        partial: Box::new(partial),
                        source,
                    });
                }
            }
        }
        Ok(DebateLog {
            schema_version: LOG_SCHEMA_VERSION,
            sample_id: sample.sample_id.clone(),
            task_kind: sample.task_kind,
            config: config.clone(),
            stages,
            final_answer: carried,
            outcome: if underperforming {
                Outcome::Underperforming
            } else {
                Outcome::Accepted
            },
            totals: ctx.totals,
            aborted: false,
        })
    }
}
