//! OpenAI-compatible chat-completions client.
//!
//! POSTs to `<base>/chat/completions` and reads the first choice plus the
//! provider's usage block. Transient transport failures are retried with
//! exponential backoff.

use std::time::{Duration, Instant};

use serde::Deserialize;
use serde_json::json;

use super::{Backend, BackendError, Completion, GenParams, UsageLedger};
use crate::record::TokenUsage;

pub const ENV_API_BASE: &str = "MADFORGE_API_BASE";
pub const ENV_API_KEY: &str = "MADFORGE_API_KEY";
pub const ENV_MODEL: &str = "MADFORGE_MODEL";

#[derive(Debug, Clone)]
pub struct LiveConfig {
    pub api_base: String,
    pub api_key: Option<String>,
    pub model: String,
    pub timeout: Duration,
    pub max_retries: u32,
}

impl Default for LiveConfig {
    fn default() -> Self {
        LiveConfig {
            api_base: "http://localhost:8000/v1".to_string(),
            api_key: None,
            model: "default".to_string(),
            timeout: Duration::from_secs(120),
            max_retries: 3,
        }
    }
}

impl LiveConfig {
    /// Reads endpoint, key, and model from the environment, falling back to
    /// defaults for anything unset.
    pub fn from_env() -> LiveConfig {
        let mut cfg = LiveConfig::default();
        if let Ok(base) = std::env::var(ENV_API_BASE) {
            cfg.api_base = base;
        }
        if let Ok(key) = std::env::var(ENV_API_KEY) {
            cfg.api_key = Some(key);
        }
        if let Ok(model) = std::env::var(ENV_MODEL) {
            cfg.model = model;
        }
        cfg
    }
}

pub struct LiveBackend {
    config: LiveConfig,
    client: reqwest::blocking::Client,
    ledger: Option<std::sync::Arc<UsageLedger>>,
}

#[derive(Deserialize)]
struct WireResponse {
    choices: Vec<WireChoice>,
    #[serde(default)]
    usage: Option<WireUsage>,
}

#[derive(Deserialize)]
struct WireChoice {
    message: WireMessage,
}

#[derive(Deserialize)]
struct WireMessage {
    content: String,
}

#[derive(Deserialize, Default)]
struct WireUsage {
    #[serde(default)]
    prompt_tokens: u64,
    #[serde(default)]
    completion_tokens: u64,
}

impl LiveBackend {
    pub fn new(config: LiveConfig) -> Result<LiveBackend, BackendError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        Ok(LiveBackend {
            config,
            client,
            ledger: None,
        })
    }

    pub fn with_ledger(mut self, ledger: std::sync::Arc<UsageLedger>) -> LiveBackend {
        self.ledger = Some(ledger);
        self
    }

    pub fn model(&self) -> &str {
        &self.config.model
    }

    fn endpoint(&self) -> String {
        format!("{}/chat/completions", self.config.api_base.trim_end_matches('/'))
    }

    fn send_once(&self, prompt: &str, params: &GenParams) -> Result<Completion, BackendError> {
        let model = if params.model_name == "default" {
            self.config.model.clone()
        } else {
            params.model_name.clone()
        };
        let mut body = json!({
            "model": model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": params.temperature,
            "max_tokens": params.max_output_tokens,
        });
        if !params.stop_sequences.is_empty() {
            body["stop"] = json!(params.stop_sequences);
        }
        let mut request = self.client.post(self.endpoint()).json(&body);
        if let Some(key) = &self.config.api_key {
            request = request.bearer_auth(key);
        }
        let start = Instant::now();
        let response = request
            .send()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        let status = response.status();
        let text = response
            .text()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        if !status.is_success() {
            return Err(BackendError::Provider {
                status: status.as_u16(),
                message: text,
            });
        }
        let wire: WireResponse = serde_json::from_str(&text)
            .map_err(|e| BackendError::MalformedResponse(e.to_string()))?;
        let choice = wire
            .choices
            .into_iter()
            .next()
            .ok_or_else(|| BackendError::MalformedResponse("no choices".to_string()))?;
        let usage = wire.usage.unwrap_or_default();
        Ok(Completion {
            text: choice.message.content,
            usage: TokenUsage {
                api_calls: 1,
                input_tokens: usage.prompt_tokens,
                output_tokens: usage.completion_tokens,
            },
            latency: start.elapsed(),
        })
    }
}

fn retryable(err: &BackendError) -> bool {
    match err {
        BackendError::Transport(_) => true,
        BackendError::Provider { status, .. } => *status == 429 || *status >= 500,
        _ => false,
    }
}

impl Backend for LiveBackend {
    fn complete(&self, prompt: &str, params: &GenParams) -> Result<Completion, BackendError> {
        assert!(!prompt.is_empty(), "prompt must be non-empty");
        let mut backoff = Duration::from_millis(250);
        let mut attempt = 0;
        loop {
            match self.send_once(prompt, params) {
                Ok(completion) => {
                    if let Some(ledger) = &self.ledger {
                        ledger.record(completion.usage);
                    }
                    return Ok(completion);
                }
                Err(err) if retryable(&err) && attempt < self.config.max_retries => {
                    attempt += 1;
                    std::thread::sleep(backoff);
                    backoff *= 2;
                }
                Err(err) => return Err(err),
            }
        }
    }
}
