//! Builders for synthetic debate logs, shared by unit, property, and
//! acceptance tests. Not part of the stable API.

use rand::Rng;

use crate::config::{DebateConfig, Strategy};
use crate::record::{
    Attempt, DebateLog, Outcome, Position, StageRecord, Stance, TaskKind, TokenUsage,
    TurnRecord, Verdict,
};

pub fn agent_name(idx: usize) -> String {
    format!("agent_{}", idx + 1)
}

fn usage(input: u64, output: u64) -> TokenUsage {
    TokenUsage {
        api_calls: 1,
        input_tokens: input,
        output_tokens: output,
    }
}

/// Builds one turn with positions toward every distinct earlier agent
/// (excluding the speaker), taking stances from `stances` in target order.
pub fn build_turn(
    stage_index: usize,
    turn_index: usize,
    num_debaters: usize,
    stances: &[Stance],
    task_output: &str,
) -> TurnRecord {
    let agent_idx = turn_index % num_debaters;
    let agent_id = agent_name(agent_idx);
    let targets = earlier_agents(turn_index, num_debaters, agent_idx);
    assert_eq!(
        targets.len(),
        stances.len(),
        "turn {turn_index} needs {} stances",
        targets.len()
    );
    let positions = targets
        .iter()
        .zip(stances)
        .map(|(t, s)| Position {
            target_agent: agent_name(*t),
            stance: *s,
            rationale_span: String::new(),
        })
        .collect();
    TurnRecord {
        agent_id,
        stage_index,
        round_index: turn_index / num_debaters,
        turn_index,
        task_output: task_output.to_string(),
        positions,
        explanation: format!("rationale for {task_output}"),
        raw_reply: String::new(),
        usage: usage(20, 10),
        degraded: false,
    }
}

/// Distinct agents with earlier turns in the attempt, excluding the speaker.
pub fn earlier_agents(turn_index: usize, num_debaters: usize, speaker: usize) -> Vec<usize> {
    let seen = if turn_index >= num_debaters {
        num_debaters
    } else {
        turn_index
    };
    (0..seen).filter(|&a| a != speaker).collect()
}

/// Number of stances a turn needs, given its index.
pub fn stance_arity(turn_index: usize, num_debaters: usize) -> usize {
    earlier_agents(turn_index, num_debaters, turn_index % num_debaters).len()
}

/// One attempt over `rounds` full rounds. `stances[t]` supplies the stance
/// list for turn `t` (empty for turn 0). `winner` names the winning agent
/// index, or None for a failed attempt.
pub fn build_attempt(
    stage_index: usize,
    num_debaters: usize,
    rounds: usize,
    stances: &[Vec<Stance>],
    winner: Option<usize>,
    feedback: Option<&str>,
) -> Attempt {
    let total = num_debaters * rounds;
    assert_eq!(stances.len(), total);
    let turns: Vec<TurnRecord> = (0..total)
        .map(|t| {
            build_turn(
                stage_index,
                t,
                num_debaters,
                &stances[t],
                &format!("out-s{stage_index}-t{t}"),
            )
        })
        .collect();
    let (winner_id, accepted) = match winner {
        Some(w) => {
            let id = agent_name(w);
            let answer = turns
                .iter()
                .rev()
                .find(|t| t.agent_id == id)
                .map(|t| t.task_output.clone());
            (Some(id), answer)
        }
        None => (None, None),
    };
    let verdict = Verdict {
        winner: winner_id,
        factor_notes: Default::default(),
        feedback: feedback.map(str::to_string),
        accepted_answer: accepted,
        raw_reply: String::new(),
        usage: usage(30, 5),
    };
    Attempt {
        turns,
        verdicts: vec![verdict],
        judge_feedback_injected: None,
    }
}

fn all_agree_stances(num_debaters: usize, rounds: usize) -> Vec<Vec<Stance>> {
    (0..num_debaters * rounds)
        .map(|t| vec![Stance::Agree; stance_arity(t, num_debaters)])
        .collect()
}

fn finish_log(mut log: DebateLog) -> DebateLog {
    let mut totals = TokenUsage::default();
    for stage in &log.stages {
        for attempt in &stage.attempts {
            for turn in &attempt.turns {
                totals += turn.usage;
            }
            for verdict in &attempt.verdicts {
                totals += verdict.usage;
            }
        }
    }
    log.totals = totals;
    log.validate().expect("builder must produce valid logs");
    log
}

/// A fully accepted 3-stage log with the given shape.
pub fn default_shape_log(sample_id: &str, num_debaters: usize, num_rounds: usize) -> DebateLog {
    let config = DebateConfig {
        num_debaters,
        num_rounds,
        ..DebateConfig::default()
    };
    let stages = (0..3)
        .map(|s| StageRecord {
            stage_spec_id: format!("stage_{s}"),
            attempts: vec![build_attempt(
                s,
                num_debaters,
                num_rounds,
                &all_agree_stances(num_debaters, num_rounds),
                Some(num_debaters - 1),
                None,
            )],
        })
        .collect();
    let final_answer = Some(format!("out-s2-t{}", num_debaters * num_rounds - 1));
    finish_log(DebateLog {
        schema_version: crate::record::LOG_SCHEMA_VERSION,
        sample_id: sample_id.to_string(),
        task_kind: TaskKind::CodeSummarization,
        config,
        stages,
        final_answer,
        outcome: Outcome::Accepted,
        totals: TokenUsage::default(),
        aborted: false,
    })
}

/// A minimal valid accepted log (3 debaters x 2 rounds).
pub fn sample_log() -> DebateLog {
    default_shape_log("sample", 3, 2)
}

/// An underperforming log whose first stage fails with the given per-turn
/// stance lists; later stages are accepted.
pub fn underperforming_log_from_stances(
    sample_id: &str,
    num_debaters: usize,
    num_rounds: usize,
    stances: &[Vec<Stance>],
) -> DebateLog {
    let config = DebateConfig {
        num_debaters,
        num_rounds,
        ..DebateConfig::default()
    };
    let mut stages = vec![StageRecord {
        stage_spec_id: "stage_0".to_string(),
        attempts: vec![build_attempt(0, num_debaters, num_rounds, stances, None, None)],
    }];
    for s in 1..3 {
        stages.push(StageRecord {
            stage_spec_id: format!("stage_{s}"),
            attempts: vec![build_attempt(
                s,
                num_debaters,
                num_rounds,
                &all_agree_stances(num_debaters, num_rounds),
                Some(0),
                None,
            )],
        });
    }
    finish_log(DebateLog {
        schema_version: crate::record::LOG_SCHEMA_VERSION,
        sample_id: sample_id.to_string(),
        task_kind: TaskKind::CodeSummarization,
        config,
        stages,
        final_answer: None,
        outcome: Outcome::Underperforming,
        totals: TokenUsage::default(),
        aborted: false,
    })
}

/// Random stance lists for every turn of one attempt.
pub fn random_stances<R: Rng>(
    rng: &mut R,
    num_debaters: usize,
    num_rounds: usize,
) -> Vec<Vec<Stance>> {
    (0..num_debaters * num_rounds)
        .map(|t| {
            (0..stance_arity(t, num_debaters))
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Stance::Agree
                    } else {
                        Stance::Disagree
                    }
                })
                .collect()
        })
        .collect()
}

/// A random valid log: random shape, stances, and outcome.
pub fn random_log<R: Rng>(rng: &mut R, sample_id: &str) -> DebateLog {
    let num_debaters = rng.gen_range(2..=4);
    let num_rounds = rng.gen_range(2..=5);
    let fail = rng.gen_bool(0.5);
    if fail {
        let stances = random_stances(rng, num_debaters, num_rounds);
        underperforming_log_from_stances(sample_id, num_debaters, num_rounds, &stances)
    } else {
        let config = DebateConfig {
            num_debaters,
            num_rounds,
            ..DebateConfig::default()
        };
        let stages = (0..3)
            .map(|s| {
                let stances = random_stances(rng, num_debaters, num_rounds);
                StageRecord {
                    stage_spec_id: format!("stage_{s}"),
                    attempts: vec![build_attempt(
                        s,
                        num_debaters,
                        num_rounds,
                        &stances,
                        Some(rng.gen_range(0..num_debaters)),
                        None,
                    )],
                }
            })
            .collect::<Vec<_>>();
        let final_answer = stages[2]
            .winning_verdict()
            .and_then(|v| v.accepted_answer.clone());
        finish_log(DebateLog {
            schema_version: crate::record::LOG_SCHEMA_VERSION,
            sample_id: sample_id.to_string(),
            task_kind: if rng.gen_bool(0.5) {
                TaskKind::CodeSummarization
            } else {
                TaskKind::CodeTranslation
            },
            config,
            stages,
            final_answer,
            outcome: Outcome::Accepted,
            totals: TokenUsage::default(),
            aborted: false,
        })
    }
}

/// Fenced-JSON debater reply for the turn at `turn_index` of an attempt,
/// positioning toward every distinct earlier agent with the given stance.
pub fn scripted_turn_reply(
    turn_index: usize,
    num_debaters: usize,
    stance: Stance,
    output: &str,
) -> String {
    let speaker = turn_index % num_debaters;
    let positions = earlier_agents(turn_index, num_debaters, speaker)
        .iter()
        .map(|t| Position {
            target_agent: agent_name(*t),
            stance,
            rationale_span: String::new(),
        })
        .collect();
    crate::pipeline::render_turn_content(&crate::pipeline::TurnContent {
        task_output: output.to_string(),
        positions,
        explanation: format!("rationale for {output}"),
    })
}

/// JSON judge reply naming a winner by agent index, or declining with
/// feedback.
pub fn scripted_judge_reply(winner: Option<usize>, feedback: Option<&str>) -> String {
    match winner {
        Some(w) => format!(r#"{{"winner": "{}", "factor_notes": {{}}}}"#, agent_name(w)),
        None => format!(
            r#"{{"winner": "none", "feedback": "{}"}}"#,
            feedback.unwrap_or("none of the candidates is acceptable yet")
        ),
    }
}

/// Pushes one attempt's debater replies (all-Agree stances, outputs
/// `{tag}-t{t}`) onto a script.
pub fn push_attempt_replies(
    script: &mut crate::backends::Script,
    num_debaters: usize,
    num_rounds: usize,
    tag: &str,
) {
    for t in 0..num_debaters * num_rounds {
        script.push(
            None,
            &scripted_turn_reply(t, num_debaters, Stance::Agree, &format!("{tag}-t{t}")),
        );
    }
}

/// A complete script for one accepted debate under any strategy: every
/// judge consultation immediately crowns the last debater.
pub fn script_accepting_debate(config: &DebateConfig, sample_tag: &str) -> crate::backends::Script {
    let mut script = crate::backends::Script::default();
    let winner = config.num_debaters - 1;
    for stage in 0..3 {
        match config.strategy {
            Strategy::EarlyTermination => {
                // Judge accepts after round 1, so later rounds never run.
                for t in 0..config.num_debaters {
                    script.push(
                        None,
                        &scripted_turn_reply(
                            t,
                            config.num_debaters,
                            Stance::Agree,
                            &format!("{sample_tag}-s{stage}-t{t}"),
                        ),
                    );
                }
                script.push(None, &scripted_judge_reply(Some(winner), None));
            }
            _ => {
                push_attempt_replies(
                    &mut script,
                    config.num_debaters,
                    config.num_rounds,
                    &format!("{sample_tag}-s{stage}"),
                );
                script.push(None, &scripted_judge_reply(Some(winner), None));
            }
        }
    }
    script
}

/// A log under a given strategy, for ledger grouping tests.
pub fn log_with_strategy(sample_id: &str, strategy: Strategy) -> DebateLog {
    let mut log = sample_log();
    log.sample_id = sample_id.to_string();
    log.config.strategy = strategy;
    log
}
