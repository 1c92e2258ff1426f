use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use jabberwock_core::degrade::DegradedPassage;
use jabberwock_core::scoring::{Embedder, Embedding};
use jabberwock_core::translation::{ProviderError, TranslationRecord, Translator};
use log::warn;

use crate::cache::{cache_key, DiskCache};
use crate::config::ModelConfig;
use crate::limiter::InFlightLimiter;
use crate::prompt::{build_gloss_prompt, build_translation_prompt, parse_gloss, PROTOCOL_VERSION};
use crate::transport::{ChatMessage, Transport, TransportError};

const MAX_BACKOFF: Duration = Duration::from_secs(30);

/// Runs `call` up to `max_retries + 1` times, sleeping
/// `retry_base_ms · 2^k` between attempts. Non-retryable errors stop at once.
pub fn with_retries<T>(
    cfg: &ModelConfig,
    limiter: &InFlightLimiter,
    mut call: impl FnMut() -> Result<T, TransportError>,
) -> Result<T, ProviderError> {
    let attempts = cfg.max_retries + 1;
    let mut last = String::new();
    for attempt in 0..attempts {
        if attempt > 0 {
            let delay = Duration::from_millis(cfg.retry_base_ms.saturating_mul(1 << (attempt - 1).min(20)));
            std::thread::sleep(delay.min(MAX_BACKOFF));
        }
        let result = {
            let _permit = limiter.acquire();
            call()
        };
        match result {
            Ok(v) => return Ok(v),
            Err(e) if e.retryable => {
                warn!("attempt {}/{attempts} failed: {}", attempt + 1, e.message);
                last = e.message;
            }
            Err(e) => return Err(ProviderError::Transport { attempts: attempt + 1, message: e.message }),
        }
    }
    Err(ProviderError::Transport { attempts, message: last })
}

/// Chat-model translator: one translation turn, then a gloss turn in the
/// same conversation.
pub struct LlmTranslator {
    cfg: ModelConfig,
    transport: Arc<dyn Transport>,
    cache: Option<DiskCache>,
    limiter: Arc<InFlightLimiter>,
    gloss_turn: bool,
}

impl LlmTranslator {
    pub fn new(cfg: ModelConfig, transport: Arc<dyn Transport>, cache: Option<DiskCache>) -> Self {
        let limiter = Arc::new(InFlightLimiter::new(cfg.max_in_flight));
        LlmTranslator { cfg, transport, cache, limiter, gloss_turn: true }
    }

    /// Shares one in-flight budget across several clients.
    pub fn with_limiter(mut self, limiter: Arc<InFlightLimiter>) -> Self {
        self.limiter = limiter;
        self
    }

    /// Skips the gloss turn (used for prefix translations).
    pub fn without_gloss(mut self) -> Self {
        self.gloss_turn = false;
        self
    }

    pub fn cache_key_for(&self, prompt: &str) -> String {
        let gloss = if self.gloss_turn { "gloss" } else { "no-gloss" };
        cache_key(&[&self.cfg.model_name, prompt, PROTOCOL_VERSION, gloss])
    }
}

impl Translator for LlmTranslator {
    fn model_name(&self) -> &str {
        &self.cfg.model_name
    }

    fn translate(&self, degraded: &DegradedPassage) -> Result<TranslationRecord, ProviderError> {
        let prompt = build_translation_prompt(&degraded.text);
        let key = self.cache_key_for(&prompt);
        if let Some(cache) = &self.cache {
            if let Some(mut rec) = cache.get::<TranslationRecord>(&key)? {
                rec.cached = true;
                rec.passage_id = degraded.passage_id.clone();
                rec.condition = degraded.condition;
                return Ok(rec);
            }
        }
        let start = Instant::now();
        let first = ChatMessage::user(prompt.clone());
        let reply = with_retries(&self.cfg, &self.limiter, || self.transport.chat(&self.cfg, std::slice::from_ref(&first)))?;
        if reply.content.trim().is_empty() {
            return Err(ProviderError::EmptyResponse);
        }
        let nonces = degraded.nonces();
        let (mut gloss, mut gloss_unparsed, mut gloss_warning) = (Default::default(), Vec::new(), false);
        if self.gloss_turn && !nonces.is_empty() {
            let messages =
                [first.clone(), ChatMessage::assistant(reply.content.clone()), ChatMessage::user(build_gloss_prompt(&nonces))];
            let g = with_retries(&self.cfg, &self.limiter, || self.transport.chat(&self.cfg, &messages))?;
            let (table, unparsed) = parse_gloss(&g.content, &nonces);
            gloss_warning = table.is_empty() || !unparsed.is_empty();
            if gloss_warning {
                warn!("{}: gloss reply had {} unparsed line(s), {} gloss(es)", degraded.passage_id, unparsed.len(), table.len());
            }
            gloss = table;
            gloss_unparsed = unparsed;
        }
        let rec = TranslationRecord {
            passage_id: degraded.passage_id.clone(),
            condition: degraded.condition,
            model_name: self.cfg.model_name.clone(),
            prompt_text: prompt,
            translation_text: reply.content,
            gloss,
            gloss_unparsed,
            gloss_warning,
            request_id: reply.request_id,
            latency_ms: start.elapsed().as_millis() as u64,
            cached: false,
            request_params: self.cfg.request_params(),
        };
        if let Some(cache) = &self.cache {
            cache.put(&key, &rec)?;
        }
        Ok(rec)
    }
}

/// Embedding endpoint client with caching and a per-model dimension check.
pub struct GatewayEmbedder {
    cfg: ModelConfig,
    transport: Arc<dyn Transport>,
    cache: Option<DiskCache>,
    limiter: Arc<InFlightLimiter>,
    dim: Mutex<Option<usize>>,
}

impl GatewayEmbedder {
    pub fn new(cfg: ModelConfig, transport: Arc<dyn Transport>, cache: Option<DiskCache>) -> Self {
        let limiter = Arc::new(InFlightLimiter::new(cfg.max_in_flight));
        GatewayEmbedder { cfg, transport, cache, limiter, dim: Mutex::new(None) }
    }

    fn check_dim(&self, len: usize) -> Result<(), ProviderError> {
        let mut dim = self.dim.lock().unwrap_or_else(|e| e.into_inner());
        let dim_key = cache_key(&["embedding-dimension", &self.cfg.model_name]);
        if dim.is_none() {
            if let Some(cache) = &self.cache {
                *dim = cache.get::<usize>(&dim_key)?;
            }
        }
        match *dim {
            Some(d) if d != len => Err(ProviderError::Config(format!(
                "{} returned {len}-dimensional vectors; earlier entries have {d}",
                self.cfg.model_name
            ))),
            Some(_) => Ok(()),
            None => {
                *dim = Some(len);
                if let Some(cache) = &self.cache {
                    cache.put(&dim_key, &len)?;
                }
                Ok(())
            }
        }
    }
}

impl Embedder for GatewayEmbedder {
    fn id(&self) -> &str {
        &self.cfg.model_name
    }

    fn embed(&self, text: &str) -> Result<Embedding, ProviderError> {
        if text.trim().is_empty() {
            return Err(ProviderError::Config("cannot embed empty text".into()));
        }
        let key = cache_key(&["embedding", &self.cfg.model_name, text]);
        if let Some(cache) = &self.cache {
            if let Some(v) = cache.get::<Vec<f64>>(&key)? {
                self.check_dim(v.len())?;
                return Ok(Embedding::Dense(v));
            }
        }
        let v = with_retries(&self.cfg, &self.limiter, || self.transport.embed(&self.cfg, text))?;
        self.check_dim(v.len())?;
        if let Some(cache) = &self.cache {
            cache.put(&key, &v)?;
        }
        Ok(Embedding::Dense(v))
    }
}
