//! Passage- and word-level similarity scores.

mod freq;
mod gloss;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use freq::FreqTable;
pub use gloss::{normalize_gloss, score_glosses, GlossFlag, GlossScoreRecord, PassageContext, WordVectors};

use crate::corpus::Passage;
use crate::degrade::ConditionName;
use crate::translation::{ProviderError, TranslationRecord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScoreError {
    #[error("cosine undefined for a zero vector")]
    ZeroVector,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u64, u64),
    #[error("baseline {baseline:?} is not a valid control for {original:?}: {reason}")]
    BadBaseline { original: String, baseline: String, reason: String },
    #[error("{path}: {message}")]
    Resource { path: String, message: String },
    #[error(transparent)]
    Provider(#[from] ProviderError),
}

/// Dense vectors come from real embedding models; sparse ones from the
/// hashed bag-of-words mock, whose nominal dimension is 2^32.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Embedding {
    Dense(Vec<f64>),
    Sparse { dim: u64, entries: Vec<(u32, f64)> },
}

impl Embedding {
    /// Builds a sparse vector, summing duplicate indices and dropping zeros.
    pub fn sparse(dim: u64, mut entries: Vec<(u32, f64)>) -> Self {
        entries.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(u32, f64)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += v,
                _ => merged.push((i, v)),
            }
        }
        merged.retain(|e| e.1 != 0.0);
        Embedding::Sparse { dim, entries: merged }
    }

    pub fn dim(&self) -> u64 {
        match self {
            Embedding::Dense(v) => v.len() as u64,
            Embedding::Sparse { dim, .. } => *dim,
        }
    }

    fn norm_sq(&self) -> f64 {
        match self {
            Embedding::Dense(v) => v.iter().map(|x| x * x).sum(),
            Embedding::Sparse { entries, .. } => entries.iter().map(|e| e.1 * e.1).sum(),
        }
    }

    fn dot(&self, other: &Embedding) -> f64 {
        match (self, other) {
            (Embedding::Dense(a), Embedding::Dense(b)) => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            (Embedding::Sparse { entries: a, .. }, Embedding::Sparse { entries: b, .. }) => {
                let (mut i, mut j, mut s) = (0, 0, 0.0);
                while i < a.len() && j < b.len() {
                    match a[i].0.cmp(&b[j].0) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            s += a[i].1 * b[j].1;
                            i += 1;
                            j += 1;
                        }
                    }
                }
                s
            }
            (Embedding::Dense(d), Embedding::Sparse { entries, .. })
            | (Embedding::Sparse { entries, .. }, Embedding::Dense(d)) => {
                entries.iter().map(|&(i, v)| v * d[i as usize]).sum()
            }
        }
    }

    pub fn cosine(&self, other: &Embedding) -> Result<f64, ScoreError> {
        if self.dim() != other.dim() {
            return Err(ScoreError::DimensionMismatch(self.dim(), other.dim()));
        }
        let (nu, nv) = (self.norm_sq(), other.norm_sq());
        if nu == 0.0 || nv == 0.0 {
            return Err(ScoreError::ZeroVector);
        }
        Ok((self.dot(other) / (nu * nv).sqrt()).clamp(-1.0, 1.0))
    }
}

/// `u·v / (|u||v|)`, computed as `dot / sqrt(|u|²|v|²)` so that identical
/// inputs give exactly 1.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, ScoreError> {
    if u.len() != v.len() {
        return Err(ScoreError::DimensionMismatch(u.len() as u64, v.len() as u64));
    }
    let nu: f64 = u.iter().map(|x| x * x).sum();
    let nv: f64 = v.iter().map(|x| x * x).sum();
    if nu == 0.0 || nv == 0.0 {
        return Err(ScoreError::ZeroVector);
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    Ok((dot / (nu * nv).sqrt()).clamp(-1.0, 1.0))
}

pub trait Embedder: Send + Sync {
    /// Identifier of the vector source, recorded as `embedder_id`.
    fn id(&self) -> &str;
    fn embed(&self, text: &str) -> Result<Embedding, ProviderError>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub passage_id: String,
    pub condition: ConditionName,
    pub model_name: String,
    pub sim_translation: f64,
    pub sim_baseline: f64,
    pub specificity: f64,
    pub baseline_passage_id: String,
    pub baseline_seed: Option<u64>,
    pub embedder_id: String,
}

impl ScoreRecord {
    /// Stored specificity against its definition.
    pub fn specificity_discrepancy(&self) -> f64 {
        (self.specificity - (self.sim_translation - self.sim_baseline)).abs()
    }
}

pub fn score_passage(
    original: &Passage,
    translation: &TranslationRecord,
    baseline: &Passage,
    embedder: &dyn Embedder,
) -> Result<ScoreRecord, ScoreError> {
    let bad = |reason: &str| ScoreError::BadBaseline {
        original: original.id.clone(),
        baseline: baseline.id.clone(),
        reason: reason.to_string(),
    };
    if baseline.genre != original.genre {
        return Err(bad("genre differs"));
    }
    if baseline.id == original.id {
        return Err(bad("same passage"));
    }
    let e_orig = embedder.embed(&original.text)?;
    let e_trans = embedder.embed(&translation.translation_text)?;
    let e_base = embedder.embed(&baseline.text)?;
    let sim_translation = e_orig.cosine(&e_trans)?;
    let sim_baseline = e_trans.cosine(&e_base)?;
    Ok(ScoreRecord {
        passage_id: original.id.clone(),
        condition: translation.condition,
        model_name: translation.model_name.clone(),
        sim_translation,
        sim_baseline,
        specificity: sim_translation - sim_baseline,
        baseline_passage_id: baseline.id.clone(),
        baseline_seed: None,
        embedder_id: embedder.id().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_examples() {
        let v = [0.3, -1.7, 2.2, 9.1];
        assert_eq!(cosine(&v, &v).unwrap(), 1.0);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        let c = cosine(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert!((c - 0.974_631_846).abs() < 1e-9);
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 0.0]), Err(ScoreError::ZeroVector));
        assert_eq!(cosine(&[1.0], &[1.0, 0.0]), Err(ScoreError::DimensionMismatch(1, 2)));
    }

    #[test]
    fn sparse_and_dense_agree() {
        let d1 = Embedding::Dense(vec![0.0, 2.0, 0.0, 1.0]);
        let d2 = Embedding::Dense(vec![1.0, 1.0, 0.0, 0.0]);
        let s1 = Embedding::sparse(4, vec![(3, 1.0), (1, 2.0)]);
        let s2 = Embedding::sparse(4, vec![(0, 0.5), (1, 1.0), (0, 0.5)]);
        let want = d1.cosine(&d2).unwrap();
        assert!((s1.cosine(&s2).unwrap() - want).abs() < 1e-15);
        assert!((s1.cosine(&d2).unwrap() - want).abs() < 1e-15);
        assert_eq!(s1.cosine(&s1).unwrap(), 1.0);
        assert!(matches!(s1.cosine(&Embedding::Dense(vec![1.0])), Err(ScoreError::DimensionMismatch(4, 1))));
    }
}
