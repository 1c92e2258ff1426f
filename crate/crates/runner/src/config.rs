//! Run configuration (TOML) and provider construction.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use jabberwock_core::nonce::{build_pool, Dictionary, PoolConstraint};
use jabberwock_core::scoring::{Embedder, WordVectors};
use jabberwock_core::{ConditionName, Execution, NoncePool, Translator};
use jabberwock_gateway::{
    DiskCache, GatewayEmbedder, HashedBowEmbedder, InFlightLimiter, LlmTranslator, LossyTranslator, ModelConfig,
    OracleTranslator, Transport,
};
use serde::{Deserialize, Serialize};

fn all_conditions() -> Vec<ConditionName> {
    ConditionName::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub corpus_path: PathBuf,
    #[serde(default = "all_conditions")]
    pub conditions: Vec<ConditionName>,
    pub model: ProviderSpec,
    pub embedder: ProviderSpec,
    pub seed: u64,
    pub baseline_seed: u64,
    /// Also run the sentence-by-sentence experiment after the sweep.
    #[serde(default)]
    pub incremental: bool,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub resume: bool,
    /// Response cache for remote providers.
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    /// Nonce candidate list; the shipped pool when absent.
    #[serde(default)]
    pub pool_path: Option<PathBuf>,
    /// Dictionary for filtering `pool_path`; the shipped one when absent.
    #[serde(default)]
    pub dictionary_path: Option<PathBuf>,
    /// Word vectors for gloss scoring; glosses are not scored without it.
    #[serde(default)]
    pub vectors_path: Option<PathBuf>,
    /// Passages for the incremental experiment; all when empty.
    #[serde(default)]
    pub incremental_passages: Vec<String>,
}

/// Either a built-in offline provider or a remote endpoint.
///
/// Mock names: `oracle`, `lossy:<rate>` (translators) and `hashed-bow`
/// (embedder).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProviderSpec {
    Mock { mock: String },
    Remote(ModelConfig),
}

impl ProviderSpec {
    pub fn mock(name: &str) -> Self {
        ProviderSpec::Mock { mock: name.to_string() }
    }

    /// What goes into the manifest and the run fingerprint.
    pub fn describe(&self) -> BTreeMap<String, String> {
        match self {
            ProviderSpec::Mock { mock } => BTreeMap::from([("mock".to_string(), mock.clone())]),
            ProviderSpec::Remote(cfg) => cfg.request_params(),
        }
    }
}

impl RunConfig {
    /// Reads a config file; relative paths resolve against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.corpus_path);
        fix(&mut self.output_dir);
        for p in [&mut self.cache_dir, &mut self.pool_path, &mut self.dictionary_path, &mut self.vectors_path]
            .into_iter()
            .flatten()
        {
            fix(p);
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load_pool(&self) -> Result<Arc<NoncePool>> {
        load_pool(self.pool_path.as_deref(), self.dictionary_path.as_deref())
    }

    pub fn load_vectors(&self) -> Result<Option<WordVectors>> {
        self.vectors_path
            .as_deref()
            .map(|p| WordVectors::load(p).with_context(|| format!("loading vectors {}", p.display())))
            .transpose()
    }
}

pub fn load_pool(candidates: Option<&Path>, dictionary: Option<&Path>) -> Result<Arc<NoncePool>> {
    let Some(path) = candidates else {
        return Ok(NoncePool::shipped());
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let words: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let dict = match dictionary {
        Some(d) => {
            let list = std::fs::read_to_string(d).with_context(|| format!("reading {}", d.display()))?;
            Arc::new(Dictionary::from_list(d.display().to_string(), &list))
        }
        None => Dictionary::embedded(),
    };
    Ok(Arc::new(build_pool(&words, &dict, PoolConstraint::default(), Execution::default())?))
}

/// Translators and embedder for one run.
pub struct Providers {
    pub translator: Box<dyn Translator>,
    /// Same model without the gloss turn, for prefix translations.
    pub prefix_translator: Box<dyn Translator>,
    pub embedder: Box<dyn Embedder>,
}

#[cfg(feature = "http")]
fn default_transport() -> Result<Arc<dyn Transport>> {
    Ok(Arc::new(jabberwock_gateway::HttpTransport::new()))
}

#[cfg(not(feature = "http"))]
fn default_transport() -> Result<Arc<dyn Transport>> {
    bail!("remote providers need the `http` feature")
}

fn open_cache(dir: Option<&Path>, sub: &str) -> Result<Option<DiskCache>> {
    dir.map(|d| DiskCache::open(d.join(sub)).map_err(anyhow::Error::from)).transpose()
}

pub fn parse_lossy(name: &str) -> Option<f64> {
    name.strip_prefix("lossy:").and_then(|r| r.parse().ok()).filter(|r| (0.0..=1.0).contains(r))
}

pub fn mock_translator(name: &str, seed: u64) -> Result<Box<dyn Translator>> {
    if name == "oracle" {
        return Ok(Box::new(OracleTranslator));
    }
    match parse_lossy(name) {
        Some(rate) => Ok(Box::new(LossyTranslator::new(rate, seed))),
        None => bail!("unknown mock translator {name:?} (expected oracle or lossy:<rate in [0,1]>)"),
    }
}

pub fn mock_embedder(name: &str) -> Result<Box<dyn Embedder>> {
    match name {
        "hashed-bow" => Ok(Box::new(HashedBowEmbedder)),
        other => bail!("unknown mock embedder {other:?} (expected hashed-bow)"),
    }
}

impl Providers {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        let needs_http = matches!(cfg.model, ProviderSpec::Remote(_)) || matches!(cfg.embedder, ProviderSpec::Remote(_));
        let transport = if needs_http { Some(default_transport()?) } else { None };
        Self::build(cfg, transport)
    }

    /// Like [`Providers::from_config`] with remote calls going to `transport`.
    pub fn with_transport(cfg: &RunConfig, transport: Arc<dyn Transport>) -> Result<Self> {
        Self::build(cfg, Some(transport))
    }

    fn build(cfg: &RunConfig, transport: Option<Arc<dyn Transport>>) -> Result<Self> {
        let cache = cfg.cache_dir.as_deref();
        let (translator, prefix_translator): (Box<dyn Translator>, Box<dyn Translator>) = match &cfg.model {
            ProviderSpec::Mock { mock } => (mock_translator(mock, cfg.seed)?, mock_translator(mock, cfg.seed)?),
            ProviderSpec::Remote(m) => {
                let t = transport.clone().context("no transport for remote model")?;
                let limiter = Arc::new(InFlightLimiter::new(m.max_in_flight));
                let full = LlmTranslator::new(m.clone(), t.clone(), open_cache(cache, "chat")?).with_limiter(limiter.clone());
                let prefix = LlmTranslator::new(m.clone(), t, open_cache(cache, "chat")?).with_limiter(limiter).without_gloss();
                (Box::new(full), Box::new(prefix))
            }
        };
        let embedder: Box<dyn Embedder> = match &cfg.embedder {
            ProviderSpec::Mock { mock } => mock_embedder(mock)?,
            ProviderSpec::Remote(m) => {
                let t = transport.context("no transport for remote embedder")?;
                Box::new(GatewayEmbedder::new(m.clone(), t, open_cache(cache, "embed")?))
            }
        };
        Ok(Providers { translator, prefix_translator, embedder })
    }
}
