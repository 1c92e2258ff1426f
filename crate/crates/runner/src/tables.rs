//! CSV tables written by a run. Every table gets its header even when it
//! has no rows.

use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub passage_id: String,
    pub genre: String,
    pub provenance: String,
    pub condition: String,
    pub model_name: String,
    pub embedder_id: String,
    pub sim_translation: f64,
    pub sim_baseline: f64,
    pub specificity: f64,
    pub baseline_passage_id: String,
    pub baseline_seed: Option<u64>,
    pub substitutions: usize,
    pub gloss_warning: bool,
}

pub const SCORE_HEADER: [&str; 13] = [
    "passage_id",
    "genre",
    "provenance",
    "condition",
    "model_name",
    "embedder_id",
    "sim_translation",
    "sim_baseline",
    "specificity",
    "baseline_passage_id",
    "baseline_seed",
    "substitutions",
    "gloss_warning",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRow {
    pub passage_id: String,
    pub condition: String,
    pub stage: String,
    pub error: String,
}

pub const FAILURE_HEADER: [&str; 4] = ["passage_id", "condition", "stage", "error"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlossRow {
    pub passage_id: String,
    pub condition: String,
    pub nonce: String,
    pub original_word: String,
    pub gloss_word: String,
    pub cosine: Option<f64>,
    pub pos: String,
    pub occurrences_in_passage: usize,
    pub original_zipf: f64,
    pub vector_source_id: String,
    /// `;`-separated.
    pub flags: String,
}

pub const GLOSS_HEADER: [&str; 11] = [
    "passage_id",
    "condition",
    "nonce",
    "original_word",
    "gloss_word",
    "cosine",
    "pos",
    "occurrences_in_passage",
    "original_zipf",
    "vector_source_id",
    "flags",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementalPoint {
    pub passage_id: String,
    pub prefix_len_sentences: usize,
    pub prefix_content_words: usize,
    pub sim_prefix: f64,
    pub sim_first_sentence: f64,
}

pub const INCREMENTAL_HEADER: [&str; 5] =
    ["passage_id", "prefix_len_sentences", "prefix_content_words", "sim_prefix", "sim_first_sentence"];

pub fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    r.deserialize().collect::<Result<Vec<T>, _>>().with_context(|| format!("reading {}", path.display()))
}
