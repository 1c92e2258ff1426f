//! Wire layer. [`Transport`] is the seam mocks plug into; [`HttpTransport`]
//! speaks the chat-completions / embeddings JSON shape.

use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

impl ChatMessage {
    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage { role: "user".into(), content: content.into() }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage { role: "assistant".into(), content: content.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChatReply {
    pub content: String,
    pub request_id: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportError {
    pub retryable: bool,
    pub message: String,
}

impl TransportError {
    pub fn retryable(message: impl Into<String>) -> Self {
        TransportError { retryable: true, message: message.into() }
    }

    pub fn fatal(message: impl Into<String>) -> Self {
        TransportError { retryable: false, message: message.into() }
    }
}

pub trait Transport: Send + Sync {
    fn chat(&self, cfg: &ModelConfig, messages: &[ChatMessage]) -> Result<ChatReply, TransportError>;
    fn embed(&self, cfg: &ModelConfig, text: &str) -> Result<Vec<f64>, TransportError>;
}

pub fn chat_body(cfg: &ModelConfig, messages: &[ChatMessage]) -> serde_json::Value {
    let mut body = serde_json::json!({
        "model": cfg.model_name,
        "messages": messages,
        "max_completion_tokens": cfg.max_output_tokens,
    });
    if let Some(t) = cfg.temperature {
        body["temperature"] = t.into();
    }
    if let Some(r) = cfg.reasoning_effort {
        body["reasoning_effort"] = r.as_str().into();
    }
    body
}

pub fn parse_chat_response(v: &serde_json::Value) -> Result<ChatReply, TransportError> {
    let content = v
        .pointer("/choices/0/message/content")
        .and_then(|c| c.as_str())
        .ok_or_else(|| TransportError::fatal(format!("no choices[0].message.content in response: {v}")))?;
    let request_id = v.get("id").and_then(|i| i.as_str()).unwrap_or_default().to_string();
    Ok(ChatReply { content: content.to_string(), request_id })
}

pub fn parse_embedding_response(v: &serde_json::Value) -> Result<Vec<f64>, TransportError> {
    v.pointer("/data/0/embedding")
        .and_then(|e| e.as_array())
        .and_then(|a| a.iter().map(|x| x.as_f64()).collect::<Option<Vec<f64>>>())
        .ok_or_else(|| TransportError::fatal("no data[0].embedding in response"))
}

#[cfg(feature = "http")]
pub use http::HttpTransport;

#[cfg(feature = "http")]
mod http {
    use super::*;

    #[derive(Debug, Default)]
    pub struct HttpTransport;

    impl HttpTransport {
        pub fn new() -> Self {
            HttpTransport
        }

        fn post(&self, cfg: &ModelConfig, path: &str, body: &serde_json::Value) -> Result<serde_json::Value, TransportError> {
            let key = cfg.api_key().ok_or_else(|| {
                TransportError::fatal(format!("environment variable {} is not set", cfg.api_key_env_var_name))
            })?;
            let client = reqwest::blocking::Client::builder()
                .timeout(cfg.timeout())
                .build()
                .map_err(|e| TransportError::fatal(e.to_string()))?;
            let url = format!("{}/{}", cfg.provider_base_url.trim_end_matches('/'), path);
            let resp = client
                .post(&url)
                .bearer_auth(key)
                .json(body)
                .send()
                .map_err(|e| TransportError::retryable(format!("{url}: {e}")))?;
            let status = resp.status();
            let text = resp.text().map_err(|e| TransportError::retryable(e.to_string()))?;
            if !status.is_success() {
                let retryable = status.as_u16() == 429 || status.is_server_error();
                return Err(TransportError { retryable, message: format!("{url}: HTTP {status}: {text}") });
            }
            serde_json::from_str(&text).map_err(|e| TransportError::fatal(format!("{url}: bad JSON: {e}")))
        }
    }

    impl Transport for HttpTransport {
        fn chat(&self, cfg: &ModelConfig, messages: &[ChatMessage]) -> Result<ChatReply, TransportError> {
            parse_chat_response(&self.post(cfg, "chat/completions", &chat_body(cfg, messages))?)
        }

        fn embed(&self, cfg: &ModelConfig, text: &str) -> Result<Vec<f64>, TransportError> {
            let body = serde_json::json!({ "model": cfg.model_name, "input": text });
            parse_embedding_response(&self.post(cfg, "embeddings", &body)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ReasoningEffort;

    #[test]
    fn request_shape() {
        let mut cfg = ModelConfig::new("https://example.invalid/v1", "m");
        let b = chat_body(&cfg, &[ChatMessage::user("hi")]);
        assert_eq!(b["messages"][0]["role"], "user");
        assert!(b.get("temperature").is_none());
        cfg.temperature = Some(0.0);
        cfg.reasoning_effort = Some(ReasoningEffort::Medium);
        let b = chat_body(&cfg, &[]);
        assert_eq!(b["temperature"], 0.0);
        assert_eq!(b["reasoning_effort"], "medium");
    }

    #[test]
    fn response_parsing() {
        let v = serde_json::json!({"id": "r1", "choices": [{"message": {"role": "assistant", "content": "ok"}}]});
        assert_eq!(parse_chat_response(&v).unwrap(), ChatReply { content: "ok".into(), request_id: "r1".into() });
        assert!(parse_chat_response(&serde_json::json!({})).is_err());
        let e = serde_json::json!({"data": [{"embedding": [0.5, -1.0]}]});
        assert_eq!(parse_embedding_response(&e).unwrap(), vec![0.5, -1.0]);
    }
}
