//! Task and stage definitions, prompt construction, and structured reply
//! parsing for the two built-in software-engineering tasks.

mod parse;
mod prompt;
mod task;

pub use parse::{
    parse_agent_reply, parse_judge_reply, render_turn_content, JudgeParseError, ReplyParseError,
    TurnContent,
};
pub use prompt::{build_debater_prompt, build_judge_prompt, PromptTemplates};
pub use task::{snap_intent, stages_for_task, IntentCategory, StageSpec, TaskSpec};
