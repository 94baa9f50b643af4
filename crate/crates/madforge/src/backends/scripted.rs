//! Deterministic scripted backend.
//!
//! Replies are consumed in order; an entry with a matcher is only eligible
//! when the matcher substring occurs in the prompt. Token counts are
//! whitespace-token counts so arithmetic stays consistent offline.

use std::path::Path;
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{whitespace_tokens, Backend, BackendError, Completion, GenParams, UsageLedger};
use crate::record::TokenUsage;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptEntry {
    /// Substring the prompt must contain for this entry to be eligible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matcher: Option<String>,
    pub reply: String,
}

/// An ordered list of canned replies with a consumption cursor.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Script {
    pub entries: Vec<ScriptEntry>,
}

impl Script {
    pub fn from_replies<S: Into<String>>(replies: impl IntoIterator<Item = S>) -> Script {
        Script {
            entries: replies
                .into_iter()
                .map(|r| ScriptEntry {
                    matcher: None,
                    reply: r.into(),
                })
                .collect(),
        }
    }

    pub fn push(&mut self, matcher: Option<&str>, reply: &str) {
        self.entries.push(ScriptEntry {
            matcher: matcher.map(str::to_string),
            reply: reply.to_string(),
        });
    }

    pub fn from_file<P: AsRef<Path>>(path: P) -> Result<Script, BackendError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BackendError::Transport(format!("script file: {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| BackendError::MalformedResponse(format!("script file: {e}")))
    }
}

struct State {
    consumed: Vec<bool>,
}

pub struct ScriptedBackend {
    script: Script,
    state: Mutex<State>,
    ledger: Option<std::sync::Arc<UsageLedger>>,
}

impl ScriptedBackend {
    pub fn new(script: Script) -> ScriptedBackend {
        let consumed = vec![false; script.entries.len()];
        ScriptedBackend {
            script,
            state: Mutex::new(State { consumed }),
            ledger: None,
        }
    }

    pub fn with_ledger(mut self, ledger: std::sync::Arc<UsageLedger>) -> ScriptedBackend {
        self.ledger = Some(ledger);
        self
    }

    pub fn remaining(&self) -> usize {
        let state = self.state.lock().unwrap();
        state.consumed.iter().filter(|c| !**c).count()
    }
}

impl Backend for ScriptedBackend {
    fn complete(&self, prompt: &str, _params: &GenParams) -> Result<Completion, BackendError> {
        let mut state = self.state.lock().unwrap();
        let slot = self
            .script
            .entries
            .iter()
            .enumerate()
            .find(|(i, entry)| {
                !state.consumed[*i]
                    && entry
                        .matcher
                        .as_deref()
                        .map_or(true, |m| prompt.contains(m))
            })
            .map(|(i, entry)| (i, entry.reply.clone()));
        let (idx, reply) = slot.ok_or(BackendError::ScriptExhausted)?;
        state.consumed[idx] = true;
        drop(state);
        let usage = TokenUsage {
            api_calls: 1,
            input_tokens: whitespace_tokens(prompt),
            output_tokens: whitespace_tokens(&reply),
        };
        if let Some(ledger) = &self.ledger {
            ledger.record(usage);
        }
        Ok(Completion {
            text: reply,
            usage,
            latency: Duration::ZERO,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replies_consumed_in_order() {
        let backend = ScriptedBackend::new(Script::from_replies(["A", "B"]));
        let params = GenParams::default();
        let first = backend.complete("one two", &params).unwrap();
        let second = backend.complete("three", &params).unwrap();
        assert_eq!(first.text, "A");
        assert_eq!(second.text, "B");
        assert_eq!(first.usage.api_calls + second.usage.api_calls, 2);
        assert_eq!(first.usage.input_tokens, 2);
    }

    #[test]
    fn exhaustion_after_script_end() {
        let backend = ScriptedBackend::new(Script::from_replies(["A", "B"]));
        let params = GenParams::default();
        backend.complete("x", &params).unwrap();
        backend.complete("x", &params).unwrap();
        let err = backend.complete("x", &params).unwrap_err();
        assert!(matches!(err, BackendError::ScriptExhausted));
    }

    #[test]
    fn matcher_gates_eligibility() {
        let mut script = Script::default();
        script.push(Some("JUDGE"), "verdict");
        script.push(None, "turn");
        let backend = ScriptedBackend::new(script);
        let params = GenParams::default();
        // First call lacks the JUDGE marker, so the unmatched entry is used.
        assert_eq!(backend.complete("debate", &params).unwrap().text, "turn");
        assert_eq!(
            backend.complete("JUDGE this", &params).unwrap().text,
            "verdict"
        );
    }

    #[test]
    fn deterministic_across_runs() {
        let script = Script::from_replies(["A", "B", "C"]);
        let collect = || {
            let backend = ScriptedBackend::new(script.clone());
            let params = GenParams::default();
            (0..3)
                .map(|_| backend.complete("p q r", &params).unwrap())
                .map(|c| (c.text, c.usage))
                .collect::<Vec<_>>()
        };
        assert_eq!(collect(), collect());
    }

    #[test]
    fn script_file_round_trip() {
        let script = Script::from_replies(["hello", "world"]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("script.json");
        std::fs::write(&path, serde_json::to_string(&script).unwrap()).unwrap();
        assert_eq!(Script::from_file(&path).unwrap(), script);
    }
}
