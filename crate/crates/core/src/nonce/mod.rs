//! Nonce-word pool construction and per-passage substitution maps.

mod dictionary;
pub mod generator;

use std::collections::{BTreeMap, HashSet};
use std::sync::{Arc, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dictionary::{neighborhood_size, Dictionary};

use crate::exec::Execution;
use crate::resources;

#[derive(Debug, Error, PartialEq)]
pub enum NonceError {
    #[error("no candidate satisfies the pool constraints ({considered} considered)")]
    EmptyPool { considered: usize },
    #[error("pool has {available} nonces but {needed} lemmas need one (short by {})", needed - available)]
    Capacity { needed: usize, available: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolConstraint {
    pub max_neighbors: usize,
    pub min_len: usize,
    pub max_len: usize,
}

impl Default for PoolConstraint {
    fn default() -> Self {
        PoolConstraint { max_neighbors: 2, min_len: 3, max_len: 9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoncePool {
    pub words: Vec<String>,
    pub neighbor_counts: Vec<usize>,
    pub dictionary_id: String,
    pub constraint: PoolConstraint,
}

impl NoncePool {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Pool built from the shipped candidate list and dictionary.
    pub fn shipped() -> Arc<NoncePool> {
        static POOL: OnceLock<Arc<NoncePool>> = OnceLock::new();
        POOL.get_or_init(|| {
            let candidates: Vec<&str> =
                resources::NONCE_CANDIDATES.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
            let pool = build_pool(&candidates, &Dictionary::embedded(), PoolConstraint::default(), Execution::default())
                .expect("shipped candidates yield a pool");
            Arc::new(pool)
        })
        .clone()
    }

    pub fn mean_length(&self) -> f64 {
        self.words.iter().map(|w| w.chars().count() as f64).sum::<f64>() / self.len().max(1) as f64
    }

    pub fn mean_neighbors(&self) -> f64 {
        self.neighbor_counts.iter().sum::<usize>() as f64 / self.len().max(1) as f64
    }

    pub fn median_neighbors(&self) -> f64 {
        let mut v = self.neighbor_counts.clone();
        v.sort_unstable();
        match v.len() {
            0 => 0.0,
            n if n % 2 == 1 => v[n / 2] as f64,
            n => (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0,
        }
    }

    pub fn max_neighbors(&self) -> usize {
        self.neighbor_counts.iter().copied().max().unwrap_or(0)
    }
}

/// Keeps candidates of allowed length, absent from the dictionary, with at
/// most `max_neighbors` neighbors. First occurrence wins on duplicates;
/// candidate order is preserved.
pub fn build_pool<S: AsRef<str> + Sync>(
    candidates: &[S],
    dictionary: &Dictionary,
    constraint: PoolConstraint,
    exec: Execution,
) -> Result<NoncePool, NonceError> {
    let mut seen = HashSet::new();
    let unique: Vec<String> = candidates
        .iter()
        .map(|c| c.as_ref().trim().to_lowercase())
        .filter(|c| seen.insert(c.clone()))
        .collect();
    let counts = exec.map(&unique, |w| {
        let len = w.chars().count();
        let ok = (constraint.min_len..=constraint.max_len).contains(&len)
            && w.chars().all(char::is_alphabetic)
            && !dictionary.contains(w);
        ok.then(|| dictionary.neighborhood_size(w)).filter(|&n| n <= constraint.max_neighbors)
    });
    let (words, neighbor_counts): (Vec<String>, Vec<usize>) =
        unique.into_iter().zip(counts).filter_map(|(w, n)| n.map(|n| (w, n))).unzip();
    if words.is_empty() {
        return Err(NonceError::EmptyPool { considered: candidates.len() });
    }
    Ok(NoncePool { words, neighbor_counts, dictionary_id: dictionary.id().to_string(), constraint })
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SubstitutionMap {
    pub passage_id: String,
    pub entries: BTreeMap<String, String>,
    pub seed: u64,
}

impl SubstitutionMap {
    pub fn for_passage(mut self, passage_id: impl Into<String>) -> Self {
        self.passage_id = passage_id.into();
        self
    }

    pub fn get(&self, lemma: &str) -> Option<&str> {
        self.entries.get(lemma).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_injective(&self) -> bool {
        let values: HashSet<&String> = self.entries.values().collect();
        values.len() == self.entries.len()
    }

    /// nonce → lemma.
    pub fn inverse(&self) -> BTreeMap<String, String> {
        self.entries.iter().map(|(k, v)| (v.clone(), k.clone())).collect()
    }
}

/// Draws one distinct nonce per unique lemma, uniformly without
/// replacement. The k-th unique lemma receives the k-th draw.
pub fn assign_nonces<S: AsRef<str>>(
    content_lemmas: &[S],
    pool: &NoncePool,
    seed: u64,
) -> Result<SubstitutionMap, NonceError> {
    let mut seen = HashSet::new();
    let unique: Vec<&str> = content_lemmas.iter().map(AsRef::as_ref).filter(|l| seen.insert(*l)).collect();
    if unique.len() > pool.len() {
        return Err(NonceError::Capacity { needed: unique.len(), available: pool.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = rand::seq::index::sample(&mut rng, pool.len(), unique.len());
    let entries = unique.iter().zip(picks.iter()).map(|(l, i)| (l.to_string(), pool.words[i].clone())).collect();
    Ok(SubstitutionMap { passage_id: String::new(), entries, seed })
}

/// Stable per-passage seed derived from a run seed (FNV-1a over the id,
/// then a splitmix finalizer).
pub fn passage_seed(run_seed: u64, passage_id: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ run_seed;
    for b in passage_id.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_pool() -> NoncePool {
        let dict = Dictionary::embedded();
        build_pool(&["grolk", "croile", "fliff", "scrill", "throse", "clirse", "ghoathe", "glarn"], &dict, PoolConstraint::default(), Execution::Sequential)
            .unwrap()
    }

    #[test]
    fn filters_by_constraint() {
        let dict = Dictionary::embedded();
        let pool =
            build_pool(&["grolk", "the", "fliff", "extraordinarily"], &dict, PoolConstraint::default(), Execution::Sequential)
                .unwrap();
        assert_eq!(pool.words, ["grolk", "fliff"]);
        assert_eq!(pool.neighbor_counts, [0, 2]);
        assert_eq!(pool.dictionary_id, resources::DICTIONARY_EN_ID);
    }

    #[test]
    fn all_dictionary_words_is_an_error() {
        let dict = Dictionary::embedded();
        let err = build_pool(&["the", "cat", "house"], &dict, PoolConstraint::default(), Execution::Sequential).unwrap_err();
        assert_eq!(err, NonceError::EmptyPool { considered: 3 });
    }

    #[test]
    fn empty_lemmas_give_empty_map() {
        let map = assign_nonces::<&str>(&[], &small_pool(), 3).unwrap();
        assert!(map.is_empty());
    }

    #[test]
    fn capacity_error_reports_shortfall() {
        let lemmas: Vec<String> = (0..10).map(|i| format!("w{i}")).collect();
        let err = assign_nonces(&lemmas, &small_pool(), 1).unwrap_err();
        assert_eq!(err, NonceError::Capacity { needed: 10, available: 8 });
        assert!(err.to_string().contains("short by 2"));
    }

    #[test]
    fn repeated_lemmas_share_a_nonce() {
        let map = assign_nonces(&["law", "state", "law"], &small_pool(), 5).unwrap();
        assert_eq!(map.len(), 2);
        assert!(map.is_injective());
    }

    #[test]
    fn passage_seeds_differ_by_id() {
        assert_ne!(passage_seed(1, "a"), passage_seed(1, "b"));
        assert_ne!(passage_seed(1, "a"), passage_seed(2, "a"));
        assert_eq!(passage_seed(1, "a"), passage_seed(1, "a"));
    }
}
