//! Offline providers with known behaviour.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use jabberwock_core::degrade::{invert, ConditionName, DegradedPassage};
use jabberwock_core::nonce::passage_seed;
use jabberwock_core::scoring::{Embedder, Embedding};
use jabberwock_core::translation::{GlossTable, ProviderError, TranslationRecord, Translator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ModelConfig;
use crate::prompt::build_translation_prompt;
use crate::transport::{ChatMessage, ChatReply, Transport, TransportError};

pub const PLACEHOLDER: &str = "something";

fn record(degraded: &DegradedPassage, model: &str, text: String, gloss: GlossTable) -> TranslationRecord {
    TranslationRecord {
        passage_id: degraded.passage_id.clone(),
        condition: degraded.condition,
        model_name: model.to_string(),
        prompt_text: build_translation_prompt(&degraded.text),
        translation_text: text,
        gloss,
        gloss_unparsed: Vec::new(),
        gloss_warning: false,
        request_id: format!("{model}:{}:{}", degraded.passage_id, degraded.condition),
        latency_ms: 0,
        cached: false,
        request_params: Default::default(),
    }
}

/// Glosses every nonce in the text with the lemma it replaced.
fn exact_gloss(degraded: &DegradedPassage) -> GlossTable {
    let inverse = degraded.map.inverse();
    degraded.nonces().into_iter().filter_map(|n| inverse.get(&n).map(|l| (n, l.clone()))).collect()
}

/// Returns the inverted text and the exact inverse map.
#[derive(Debug, Default, Clone)]
pub struct OracleTranslator;

pub const ORACLE_MODEL: &str = "mock-oracle";

impl Translator for OracleTranslator {
    fn model_name(&self) -> &str {
        ORACLE_MODEL
    }

    fn translate(&self, degraded: &DegradedPassage) -> Result<TranslationRecord, ProviderError> {
        if degraded.condition == ConditionName::Blanks {
            return Err(ProviderError::Unsupported("oracle cannot invert the blanks condition".into()));
        }
        let text = invert(degraded).map_err(|e| ProviderError::Unsupported(e.to_string()))?;
        Ok(record(degraded, ORACLE_MODEL, text, exact_gloss(degraded)))
    }
}

/// Like the oracle, but each substituted position independently becomes
/// `"something"` with probability `drop_rate`.
///
/// Draws are fixed by `(seed, passage_id)` and compared against the rate,
/// so for one seed the dropped set at a lower rate is a subset of the
/// dropped set at any higher rate. Works from the transform log, so blanks
/// passages are handled too.
#[derive(Debug, Clone)]
pub struct LossyTranslator {
    drop_rate: f64,
    seed: u64,
    name: String,
}

impl LossyTranslator {
    pub fn new(drop_rate: f64, seed: u64) -> Self {
        assert!((0.0..=1.0).contains(&drop_rate), "drop_rate must be in [0, 1]");
        LossyTranslator { drop_rate, seed, name: format!("mock-lossy-{drop_rate}") }
    }

    pub fn drop_rate(&self) -> f64 {
        self.drop_rate
    }

    fn drops(&self, rng: &mut ChaCha8Rng) -> bool {
        let u: f64 = rng.random();
        u < self.drop_rate
    }
}

impl Translator for LossyTranslator {
    fn model_name(&self) -> &str {
        &self.name
    }

    fn translate(&self, degraded: &DegradedPassage) -> Result<TranslationRecord, ProviderError> {
        let base = passage_seed(self.seed, &degraded.passage_id);
        let mut rng = ChaCha8Rng::seed_from_u64(base);
        let mut chars: Vec<char> = degraded.text.chars().collect();
        let replacements: Vec<&str> = degraded
            .transform_log
            .iter()
            .map(|e| if self.drops(&mut rng) { PLACEHOLDER } else { e.original.as_str() })
            .collect();
        for (e, r) in degraded.transform_log.iter().zip(replacements).rev() {
            chars.splice(e.span.start..e.span.end, r.chars());
        }
        let mut gloss_rng = ChaCha8Rng::seed_from_u64(base ^ 0x9e37_79b9_7f4a_7c15);
        let gloss = exact_gloss(degraded)
            .into_iter()
            .map(|(n, l)| if self.drops(&mut gloss_rng) { (n, PLACEHOLDER.to_string()) } else { (n, l) })
            .collect();
        Ok(record(degraded, &self.name, chars.into_iter().collect(), gloss))
    }
}

pub const HASHED_BOW_ID: &str = "hashed-bow-v1";

/// Hashed bag of words: lowercase alphanumeric runs, counted, hashed into
/// 2^32 buckets with FNV-1a. Order-free by construction.
#[derive(Debug, Default, Clone)]
pub struct HashedBowEmbedder;

pub fn bow_tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).map(str::to_lowercase)
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

impl Embedder for HashedBowEmbedder {
    fn id(&self) -> &str {
        HASHED_BOW_ID
    }

    fn embed(&self, text: &str) -> Result<Embedding, ProviderError> {
        let entries = bow_tokens(text).map(|t| ((fnv1a(&t) ^ (fnv1a(&t) >> 32)) as u32, 1.0)).collect();
        Ok(Embedding::sparse(1 << 32, entries))
    }
}

type ChatFn = dyn Fn(&[ChatMessage]) -> Result<String, TransportError> + Send + Sync;
type EmbedFn = dyn Fn(&str) -> Result<Vec<f64>, TransportError> + Send + Sync;

/// Scripted transport that counts calls and records peak concurrency.
pub struct MockTransport {
    chat: Box<ChatFn>,
    embed: Box<EmbedFn>,
    delay: std::time::Duration,
    calls: AtomicUsize,
    in_flight: AtomicUsize,
    peak: AtomicUsize,
    log: Mutex<Vec<Vec<ChatMessage>>>,
}

impl MockTransport {
    pub fn new(
        chat: impl Fn(&[ChatMessage]) -> Result<String, TransportError> + Send + Sync + 'static,
        embed: impl Fn(&str) -> Result<Vec<f64>, TransportError> + Send + Sync + 'static,
    ) -> Self {
        MockTransport {
            chat: Box::new(chat),
            embed: Box::new(embed),
            delay: std::time::Duration::ZERO,
            calls: AtomicUsize::new(0),
            in_flight: AtomicUsize::new(0),
            peak: AtomicUsize::new(0),
            log: Mutex::new(Vec::new()),
        }
    }

    /// Replies with fixed strings keyed by turn: first user turn gets
    /// `translation`, later turns get `gloss`.
    pub fn scripted(translation: &str, gloss: &str) -> Self {
        let (t, g) = (translation.to_string(), gloss.to_string());
        Self::new(move |m| Ok(if m.len() == 1 { t.clone() } else { g.clone() }), |_| Ok(vec![1.0, 0.0, 0.0]))
    }

    pub fn with_delay(mut self, delay: std::time::Duration) -> Self {
        self.delay = delay;
        self
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    pub fn peak_in_flight(&self) -> usize {
        self.peak.load(Ordering::SeqCst)
    }

    pub fn requests(&self) -> Vec<Vec<ChatMessage>> {
        self.log.lock().unwrap().clone()
    }

    fn enter(&self) {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let now = self.in_flight.fetch_add(1, Ordering::SeqCst) + 1;
        self.peak.fetch_max(now, Ordering::SeqCst);
        if !self.delay.is_zero() {
            std::thread::sleep(self.delay);
        }
    }

    fn leave(&self) {
        self.in_flight.fetch_sub(1, Ordering::SeqCst);
    }
}

impl Transport for MockTransport {
    fn chat(&self, _cfg: &ModelConfig, messages: &[ChatMessage]) -> Result<ChatReply, TransportError> {
        self.enter();
        self.log.lock().unwrap().push(messages.to_vec());
        let out = (self.chat)(messages);
        self.leave();
        out.map(|content| ChatReply { content, request_id: format!("mock-{}", self.calls()) })
    }

    fn embed(&self, _cfg: &ModelConfig, text: &str) -> Result<Vec<f64>, TransportError> {
        self.enter();
        let out = (self.embed)(text);
        self.leave();
        out
    }
}
