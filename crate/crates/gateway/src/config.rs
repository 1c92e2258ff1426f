use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReasoningEffort {
    Minimal,
    Low,
    Medium,
    High,
}

impl ReasoningEffort {
    pub fn as_str(self) -> &'static str {
        match self {
            ReasoningEffort::Minimal => "minimal",
            ReasoningEffort::Low => "low",
            ReasoningEffort::Medium => "medium",
            ReasoningEffort::High => "high",
        }
    }
}

/// Endpoint and request parameters. The API key itself is never stored;
/// only the name of the environment variable that holds it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub provider_base_url: String,
    pub model_name: String,
    #[serde(default = "default_key_var")]
    pub api_key_env_var_name: String,
    #[serde(default)]
    pub reasoning_effort: Option<ReasoningEffort>,
    #[serde(default)]
    pub temperature: Option<f64>,
    #[serde(default = "default_max_tokens")]
    pub max_output_tokens: u32,
    #[serde(default = "default_timeout")]
    pub timeout_s: f64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    /// First retry delay; doubles on each further attempt.
    #[serde(default = "default_backoff")]
    pub retry_base_ms: u64,
    #[serde(default = "default_in_flight")]
    pub max_in_flight: usize,
}

fn default_key_var() -> String {
    "OPENAI_API_KEY".into()
}
fn default_max_tokens() -> u32 {
    4096
}
fn default_timeout() -> f64 {
    120.0
}
fn default_retries() -> u32 {
    4
}
fn default_backoff() -> u64 {
    500
}
fn default_in_flight() -> usize {
    4
}

impl ModelConfig {
    pub fn new(base_url: impl Into<String>, model_name: impl Into<String>) -> Self {
        ModelConfig {
            provider_base_url: base_url.into(),
            model_name: model_name.into(),
            api_key_env_var_name: default_key_var(),
            reasoning_effort: None,
            temperature: None,
            max_output_tokens: default_max_tokens(),
            timeout_s: default_timeout(),
            max_retries: default_retries(),
            retry_base_ms: default_backoff(),
            max_in_flight: default_in_flight(),
        }
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_s.max(0.001))
    }

    /// Reads the key now; `None` if the variable is unset or empty.
    pub fn api_key(&self) -> Option<String> {
        std::env::var(&self.api_key_env_var_name).ok().filter(|k| !k.is_empty())
    }

    /// Parameters recorded on every TranslationRecord.
    pub fn request_params(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("base_url".into(), self.provider_base_url.clone());
        m.insert("model".into(), self.model_name.clone());
        m.insert("max_output_tokens".into(), self.max_output_tokens.to_string());
        if let Some(t) = self.temperature {
            m.insert("temperature".into(), t.to_string());
        }
        if let Some(r) = self.reasoning_effort {
            m.insert("reasoning_effort".into(), r.as_str().into());
        }
        m
    }
}
