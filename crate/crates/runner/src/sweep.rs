//! Condition sweep: every passage × condition is degraded with one shared
//! substitution map, translated, and scored against a same-genre baseline.
//!
//! Each finished passage is written to `passages/<id>.json` tagged with
//! the run fingerprint, so an interrupted run picks up where it stopped.
//! Tables are assembled from those records and sorted, so the output does
//! not depend on completion order.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use jabberwock_core::corpus::{load_corpus, sample_baseline, Corpus};
use jabberwock_core::degrade::{build_map, degrade, make_condition};
use jabberwock_core::nonce::passage_seed;
use jabberwock_core::scoring::{score_glosses, FreqTable, GlossScoreRecord, PassageContext, WordVectors};
use jabberwock_core::{
    ConditionName, Embedder, Execution, NoncePool, Parser, Passage, ScoreRecord, SubstitutionMap, TranslationRecord, Translator,
};
use jabberwock_gateway::cache_key;
use jabberwock_gateway::prompt::PROTOCOL_VERSION;
use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::config::{Providers, RunConfig};
use crate::tables::{
    write_csv, FailureRow, GlossRow, ScoreRow, FAILURE_HEADER, GLOSS_HEADER, SCORE_HEADER,
};

pub const SCORES_CSV: &str = "scores.csv";
pub const FAILURES_CSV: &str = "failures.csv";
pub const GLOSS_CSV: &str = "gloss_scores.csv";
pub const MANIFEST_JSON: &str = "manifest.json";
pub const PASSAGE_DIR: &str = "passages";

#[derive(Debug, Clone, Copy, Default)]
pub struct SweepOptions {
    pub execution: Execution,
    /// Stop after this many passages without writing tables, as if the
    /// process had been killed.
    pub stop_after: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Outcome {
    Scored {
        score: ScoreRecord,
        translation: TranslationRecord,
        #[serde(default)]
        glosses: Vec<GlossScoreRecord>,
    },
    Failed {
        stage: String,
        error: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub condition: ConditionName,
    /// Hash of the map the degraded passage was built from.
    pub map_hash: String,
    pub degraded_text: Option<String>,
    pub substitutions: usize,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassageResult {
    pub passage_id: String,
    pub fingerprint: String,
    pub map_hash: String,
    pub map: Option<SubstitutionMap>,
    pub conditions: Vec<ConditionResult>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RequestCounts {
    pub translations: usize,
    pub cached: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub fingerprint: String,
    pub seed: u64,
    pub baseline_seed: u64,
    pub conditions: Vec<ConditionName>,
    pub corpus_path: String,
    pub corpus_sha256: String,
    pub passages: usize,
    pub pool_dictionary_id: String,
    pub pool_size: usize,
    pub pool_mean_neighbors: f64,
    pub pool_sha256: String,
    pub model: BTreeMap<String, String>,
    pub embedder: BTreeMap<String, String>,
    pub embedder_id: String,
    pub vectors: Option<String>,
    pub protocol_version: String,
    pub map_hashes: BTreeMap<String, String>,
    pub requests: RequestCounts,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub complete: bool,
    pub passages_run: usize,
    pub passages_resumed: usize,
    pub scores: Vec<ScoreRow>,
    pub failures: Vec<FailureRow>,
    pub glosses: Vec<GlossRow>,
}

pub fn map_hash(map: &SubstitutionMap) -> String {
    let entries = serde_json::to_string(&map.entries).expect("map serializes");
    cache_key(&[&map.passage_id, &entries])
}

fn file_sha(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(cache_key(&[&String::from_utf8_lossy(&bytes)]))
}

/// Hash of everything that determines the per-passage results.
pub fn fingerprint(cfg: &RunConfig, corpus_sha: &str, pool: &NoncePool, vectors: Option<&WordVectors>) -> String {
    let conditions: Vec<&str> = cfg.conditions.iter().map(|c| c.as_str()).collect();
    let pool_words = pool.words.join("\n");
    cache_key(&[
        env!("CARGO_PKG_VERSION"),
        PROTOCOL_VERSION,
        &cfg.seed.to_string(),
        &cfg.baseline_seed.to_string(),
        &conditions.join(","),
        corpus_sha,
        &pool_words,
        &serde_json::to_string(&cfg.model.describe()).expect("serializes"),
        &serde_json::to_string(&cfg.embedder.describe()).expect("serializes"),
        vectors.map(WordVectors::id).unwrap_or(""),
    ])
}

fn safe_file_name(id: &str) -> String {
    let clean: String = id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect();
    if clean == id {
        clean
    } else {
        // Keep distinct ids distinct after cleaning.
        format!("{clean}-{}", &cache_key(&[id])[..8])
    }
}

pub fn passage_path(output_dir: &Path, id: &str) -> PathBuf {
    output_dir.join(PASSAGE_DIR).join(format!("{}.json", safe_file_name(id)))
}

struct Shared<'a> {
    cfg: &'a RunConfig,
    corpus: &'a Corpus,
    parser: Parser,
    pool: &'a NoncePool,
    translator: &'a dyn Translator,
    embedder: &'a dyn Embedder,
    vectors: Option<&'a WordVectors>,
    freq: &'a FreqTable,
    fingerprint: &'a str,
}

fn failed(condition: ConditionName, map_hash: &str, stage: &str, error: impl std::fmt::Display) -> ConditionResult {
    ConditionResult {
        condition,
        map_hash: map_hash.to_string(),
        degraded_text: None,
        substitutions: 0,
        outcome: Outcome::Failed { stage: stage.into(), error: error.to_string() },
    }
}

fn run_passage(ctx: &Shared, passage: &Passage) -> Result<PassageResult> {
    let cfg = ctx.cfg;
    let parsed = ctx.parser.parse(&passage.text);
    let map = match build_map(&passage.id, &parsed, ctx.pool, passage_seed(cfg.seed, &passage.id)) {
        Ok(m) => m,
        Err(e) => {
            warn!("{}: no substitution map: {e}", passage.id);
            return Ok(PassageResult {
                passage_id: passage.id.clone(),
                fingerprint: ctx.fingerprint.to_string(),
                map_hash: String::new(),
                map: None,
                conditions: cfg.conditions.iter().map(|&c| failed(c, "", "map", &e)).collect(),
            });
        }
    };
    let hash = map_hash(&map);
    let baseline_seed = passage_seed(cfg.baseline_seed, &passage.id);
    let baseline = sample_baseline(ctx.corpus, passage.genre, &passage.id, baseline_seed);
    let context = PassageContext::new(&parsed);
    let mut conditions = Vec::with_capacity(cfg.conditions.len());
    for &cond in &cfg.conditions {
        let d = match degrade(passage, &parsed, &make_condition(cond), &map) {
            Ok(d) => d,
            Err(e) => {
                conditions.push(failed(cond, &hash, "degrade", e));
                continue;
            }
        };
        let used = map_hash(&d.map);
        if used != hash {
            bail!("{} {cond}: degraded with a different substitution map ({used} vs {hash})", passage.id);
        }
        let mut result = ConditionResult {
            condition: cond,
            map_hash: used,
            degraded_text: Some(d.text.clone()),
            substitutions: d.substitution_count(),
            outcome: Outcome::Failed { stage: String::new(), error: String::new() },
        };
        result.outcome = match ctx.translator.translate(&d) {
            Err(e) => Outcome::Failed { stage: "translate".into(), error: e.to_string() },
            Ok(translation) => match &baseline {
                Err(e) => Outcome::Failed { stage: "baseline".into(), error: e.to_string() },
                Ok(base) => match jabberwock_core::scoring::score_passage(passage, &translation, base, ctx.embedder) {
                    Err(e) => Outcome::Failed { stage: "score".into(), error: e.to_string() },
                    Ok(mut score) => {
                        score.baseline_seed = Some(baseline_seed);
                        let glosses = ctx
                            .vectors
                            .map(|v| score_glosses(&map, &translation.gloss, v, &context, ctx.freq))
                            .unwrap_or_default();
                        Outcome::Scored { score, translation, glosses }
                    }
                },
            },
        };
        if let Outcome::Failed { stage, error } = &result.outcome {
            warn!("{} {cond}: {stage} failed: {error}", passage.id);
        }
        conditions.push(result);
    }
    Ok(PassageResult {
        passage_id: passage.id.clone(),
        fingerprint: ctx.fingerprint.to_string(),
        map_hash: hash,
        map: Some(map),
        conditions,
    })
}

fn load_saved(path: &Path, fingerprint: &str) -> Option<PassageResult> {
    let text = fs::read_to_string(path).ok()?;
    let saved: PassageResult = serde_json::from_str(&text).ok()?;
    (saved.fingerprint == fingerprint).then_some(saved)
}

fn save(path: &Path, result: &PassageResult) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string_pretty(result)?).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

fn flag_name<T: Serialize>(f: &T) -> String {
    serde_json::to_value(f).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn rows(corpus: &Corpus, results: &[PassageResult]) -> (Vec<ScoreRow>, Vec<FailureRow>, Vec<GlossRow>) {
    let (mut scores, mut failures, mut glosses) = (Vec::new(), Vec::new(), Vec::new());
    for r in results {
        let p = corpus.get(&r.passage_id).expect("result for a corpus passage");
        for c in &r.conditions {
            match &c.outcome {
                Outcome::Scored { score, translation, glosses: g } => {
                    scores.push(ScoreRow {
                        passage_id: r.passage_id.clone(),
                        genre: p.genre.as_str().into(),
                        provenance: flag_name(&p.provenance),
                        condition: c.condition.as_str().into(),
                        model_name: score.model_name.clone(),
                        embedder_id: score.embedder_id.clone(),
                        sim_translation: score.sim_translation,
                        sim_baseline: score.sim_baseline,
                        specificity: score.specificity,
                        baseline_passage_id: score.baseline_passage_id.clone(),
                        baseline_seed: score.baseline_seed,
                        substitutions: c.substitutions,
                        gloss_warning: translation.gloss_warning,
                    });
                    glosses.extend(g.iter().map(|g| GlossRow {
                        passage_id: g.passage_id.clone(),
                        condition: c.condition.as_str().into(),
                        nonce: g.nonce.clone(),
                        original_word: g.original_word.clone(),
                        gloss_word: g.gloss_word.clone(),
                        cosine: g.cosine,
                        pos: g.pos.map(|p| p.as_str().to_string()).unwrap_or_default(),
                        occurrences_in_passage: g.occurrences_in_passage,
                        original_zipf: g.original_zipf,
                        vector_source_id: g.vector_source_id.clone(),
                        flags: g.flags.iter().map(flag_name).collect::<Vec<_>>().join(";"),
                    }));
                }
                Outcome::Failed { stage, error } => failures.push(FailureRow {
                    passage_id: r.passage_id.clone(),
                    condition: c.condition.as_str().into(),
                    stage: stage.clone(),
                    error: error.clone(),
                }),
            }
        }
    }
    scores.sort_by(|a, b| (&a.passage_id, &a.condition).cmp(&(&b.passage_id, &b.condition)));
    failures.sort_by(|a, b| (&a.passage_id, &a.condition).cmp(&(&b.passage_id, &b.condition)));
    glosses.sort_by(|a, b| (&a.passage_id, &a.condition, &a.nonce).cmp(&(&b.passage_id, &b.condition, &b.nonce)));
    (scores, failures, glosses)
}

pub fn run_condition_sweep(cfg: &RunConfig, opts: SweepOptions) -> Result<SweepOutcome> {
    let providers = Providers::from_config(cfg)?;
    run_condition_sweep_with(cfg, &providers, opts)
}

pub fn run_condition_sweep_with(cfg: &RunConfig, providers: &Providers, opts: SweepOptions) -> Result<SweepOutcome> {
    let corpus = load_corpus(&cfg.corpus_path).with_context(|| format!("loading {}", cfg.corpus_path.display()))?;
    let corpus_sha = file_sha(&cfg.corpus_path)?;
    let pool = cfg.load_pool()?;
    let vectors = cfg.load_vectors()?;
    let freq = FreqTable::embedded();
    let fp = fingerprint(cfg, &corpus_sha, &pool, vectors.as_ref());
    fs::create_dir_all(cfg.output_dir.join(PASSAGE_DIR))
        .with_context(|| format!("creating {}", cfg.output_dir.display()))?;

    let todo: &[Passage] = match opts.stop_after {
        Some(n) => &corpus.passages[..n.min(corpus.len())],
        None => &corpus.passages,
    };
    let ctx = Shared {
        cfg,
        corpus: &corpus,
        parser: Parser::default(),
        pool: &pool,
        translator: providers.translator.as_ref(),
        embedder: providers.embedder.as_ref(),
        vectors: vectors.as_ref(),
        freq: &freq,
        fingerprint: &fp,
    };
    let results: Vec<Result<(PassageResult, bool)>> = opts.execution.map(todo, |p| {
        let path = passage_path(&cfg.output_dir, &p.id);
        if cfg.resume {
            if let Some(saved) = load_saved(&path, &fp) {
                return Ok((saved, true));
            }
        }
        let r = run_passage(&ctx, p)?;
        save(&path, &r)?;
        Ok((r, false))
    });
    let mut done = Vec::with_capacity(results.len());
    let mut resumed = 0;
    for r in results {
        let (r, was_saved) = r?;
        resumed += usize::from(was_saved);
        done.push(r);
    }
    let (scores, failures, glosses) = rows(&corpus, &done);
    let outcome = SweepOutcome {
        complete: opts.stop_after.is_none_or(|n| n >= corpus.len()),
        passages_run: done.len() - resumed,
        passages_resumed: resumed,
        scores,
        failures,
        glosses,
    };
    if !outcome.complete {
        info!("stopped after {} passage(s); rerun with resume = true to finish", done.len());
        return Ok(outcome);
    }

    let out = &cfg.output_dir;
    write_csv(&out.join(SCORES_CSV), &SCORE_HEADER, &outcome.scores)?;
    write_csv(&out.join(FAILURES_CSV), &FAILURE_HEADER, &outcome.failures)?;
    write_csv(&out.join(GLOSS_CSV), &GLOSS_HEADER, &outcome.glosses)?;

    let mut requests = RequestCounts::default();
    for c in done.iter().flat_map(|r| &r.conditions) {
        match &c.outcome {
            Outcome::Scored { translation, .. } => {
                requests.translations += 1;
                requests.cached += usize::from(translation.cached);
            }
            Outcome::Failed { .. } => requests.failures += 1,
        }
    }
    let manifest = Manifest {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        fingerprint: fp.clone(),
        seed: cfg.seed,
        baseline_seed: cfg.baseline_seed,
        conditions: cfg.conditions.clone(),
        corpus_path: cfg.corpus_path.display().to_string(),
        corpus_sha256: corpus_sha,
        passages: corpus.len(),
        pool_dictionary_id: pool.dictionary_id.clone(),
        pool_size: pool.len(),
        pool_mean_neighbors: pool.mean_neighbors(),
        pool_sha256: cache_key(&[&pool.words.join("\n")]),
        model: cfg.model.describe(),
        embedder: cfg.embedder.describe(),
        embedder_id: providers.embedder.id().to_string(),
        vectors: vectors.as_ref().map(|v| v.id().to_string()),
        protocol_version: PROTOCOL_VERSION.into(),
        map_hashes: done.iter().map(|r| (r.passage_id.clone(), r.map_hash.clone())).collect(),
        requests,
    };
    fs::write(out.join(MANIFEST_JSON), serde_json::to_string_pretty(&manifest)? + "\n")?;
    info!(
        "sweep: {} scored, {} failed, {} passage(s) resumed",
        outcome.scores.len(),
        outcome.failures.len(),
        outcome.passages_resumed
    );
    Ok(outcome)
}
