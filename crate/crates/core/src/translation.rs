//! Translation records and the provider traits the scorer consumes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::degrade::{ConditionName, DegradedPassage};

/// nonce → single-word English gloss.
pub type GlossTable = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationRecord {
    pub passage_id: String,
    pub condition: ConditionName,
    pub model_name: String,
    pub prompt_text: String,
    pub translation_text: String,
    pub gloss: GlossTable,
    /// Gloss reply lines that could not be read as `nonce -> word`.
    #[serde(default)]
    pub gloss_unparsed: Vec<String>,
    /// Set when the gloss reply was missing, unparseable, or named
    /// nonces that are not in the passage.
    #[serde(default)]
    pub gloss_warning: bool,
    pub request_id: String,
    pub latency_ms: u64,
    pub cached: bool,
    /// Request parameters as sent, for provenance.
    #[serde(default)]
    pub request_params: BTreeMap<String, String>,
}

impl TranslationRecord {
    /// Checks that gloss keys are nonces of `degraded`.
    pub fn gloss_keys_valid(&self, degraded: &DegradedPassage) -> bool {
        let nonces = degraded.nonces();
        self.gloss.keys().all(|k| nonces.contains(k))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProviderError {
    #[error("transport failed after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("provider returned an empty completion")]
    EmptyResponse,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("cache: {0}")]
    Cache(String),
}

pub trait Translator: Send + Sync {
    /// Identifier recorded as `model_name`.
    fn model_name(&self) -> &str;
    fn translate(&self, degraded: &DegradedPassage) -> Result<TranslationRecord, ProviderError>;
}
