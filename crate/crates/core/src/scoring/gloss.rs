use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{cosine, FreqTable, ScoreError};
use crate::morph::{ParsedToken, Pos, StopList, StopListVariant};
use crate::nonce::SubstitutionMap;
use crate::translation::GlossTable;

/// Text-format word vectors: `word f1 f2 ...` per line. A leading
/// `count dim` line, as written by fastText, is skipped.
#[derive(Debug, Clone)]
pub struct WordVectors {
    id: String,
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl WordVectors {
    pub fn parse(text: &str, id: impl Into<String>) -> Result<Self, ScoreError> {
        let id = id.into();
        let mut dim = 0;
        let mut vectors = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let mut parts = line.split_whitespace();
            let Some(word) = parts.next() else { continue };
            let values: Result<Vec<f64>, _> = parts.map(str::parse::<f64>).collect();
            let values = values.map_err(|e| ScoreError::Resource {
                path: id.clone(),
                message: format!("line {}: {e}", i + 1),
            })?;
            if i == 0 && values.len() == 1 && word.parse::<usize>().is_ok() {
                continue;
            }
            if dim == 0 {
                dim = values.len();
            }
            if values.len() != dim || dim == 0 {
                return Err(ScoreError::Resource {
                    path: id.clone(),
                    message: format!("line {}: expected {dim} values, found {}", i + 1, values.len()),
                });
            }
            vectors.entry(word.to_string()).or_insert(values);
        }
        Ok(WordVectors { id, dim, vectors })
    }

    pub fn load(path: &Path) -> Result<Self, ScoreError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ScoreError::Resource { path: path.display().to_string(), message: e.to_string() })?;
        let id = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        Self::parse(&text, id)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Exact match first, then lowercase.
    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).or_else(|| self.vectors.get(&word.to_lowercase())).map(Vec::as_slice)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlossFlag {
    Multiword,
    OriginalOutOfVocabulary,
    GlossOutOfVocabulary,
    ZeroVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlossScoreRecord {
    pub passage_id: String,
    pub nonce: String,
    pub original_word: String,
    pub gloss_word: String,
    /// Absent when either word has no vector.
    pub cosine: Option<f64>,
    pub pos: Option<Pos>,
    pub occurrences_in_passage: usize,
    pub original_zipf: f64,
    pub vector_source_id: String,
    pub flags: Vec<GlossFlag>,
}

/// Per-lemma facts about the original passage.
#[derive(Debug, Clone, Default)]
pub struct PassageContext {
    occurrences: HashMap<String, usize>,
    pos: HashMap<String, Pos>,
}

impl PassageContext {
    /// Counts every substitutable occurrence of each lemma and takes the
    /// most frequent tag (earliest on ties).
    pub fn new(parsed: &[ParsedToken]) -> Self {
        let stop = StopList::new(StopListVariant::NoModalsNoPreps);
        let mut occurrences = HashMap::new();
        let mut tags: HashMap<String, Vec<Pos>> = HashMap::new();
        for t in parsed.iter().filter(|t| crate::morph::is_content(t, &stop)) {
            *occurrences.entry(t.lemma.clone()).or_insert(0) += 1;
            tags.entry(t.lemma.clone()).or_default().push(t.pos);
        }
        let pos = tags
            .into_iter()
            .map(|(lemma, ps)| {
                let best = ps
                    .iter()
                    .copied()
                    .max_by_key(|p| (ps.iter().filter(|q| *q == p).count(), std::cmp::Reverse(ps.iter().position(|q| q == p))))
                    .expect("non-empty");
                (lemma, best)
            })
            .collect();
        PassageContext { occurrences, pos }
    }

    pub fn occurrences(&self, lemma: &str) -> usize {
        self.occurrences.get(lemma).copied().unwrap_or(0)
    }

    pub fn pos(&self, lemma: &str) -> Option<Pos> {
        self.pos.get(lemma).copied()
    }
}

/// Lowercases, trims surrounding punctuation and keeps the first word.
/// Returns the word and whether anything after it was discarded.
pub fn normalize_gloss(raw: &str) -> (String, bool) {
    let cleaned: Vec<String> = raw
        .split_whitespace()
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric() && c != '\'' && c != '-').to_lowercase())
        .filter(|w| !w.is_empty())
        .collect();
    match cleaned.split_first() {
        Some((first, rest)) => (first.clone(), !rest.is_empty()),
        None => (String::new(), false),
    }
}

/// One record per glossed nonce that belongs to `map`.
pub fn score_glosses(
    map: &SubstitutionMap,
    gloss: &GlossTable,
    vectors: &WordVectors,
    context: &PassageContext,
    freq: &FreqTable,
) -> Vec<GlossScoreRecord> {
    let inverse = map.inverse();
    let mut out = Vec::new();
    for (nonce, raw) in gloss {
        let Some(original) = inverse.get(nonce) else { continue };
        let (gloss_word, multi) = normalize_gloss(raw);
        let mut flags = Vec::new();
        if multi {
            flags.push(GlossFlag::Multiword);
        }
        let ov = vectors.get(original);
        let gv = vectors.get(&gloss_word);
        if ov.is_none() {
            flags.push(GlossFlag::OriginalOutOfVocabulary);
        }
        if gv.is_none() {
            flags.push(GlossFlag::GlossOutOfVocabulary);
        }
        let cosine = match (ov, gv) {
            (Some(a), Some(b)) if gloss_word == *original => {
                // Same word: skip arithmetic so the ceiling is exact.
                cosine(a, b).ok().map(|_| 1.0)
            }
            (Some(a), Some(b)) => match cosine(a, b) {
                Ok(c) => Some(c),
                Err(_) => {
                    flags.push(GlossFlag::ZeroVector);
                    None
                }
            },
            _ => None,
        };
        out.push(GlossScoreRecord {
            passage_id: map.passage_id.clone(),
            nonce: nonce.clone(),
            original_word: original.clone(),
            gloss_word,
            cosine,
            pos: context.pos(original),
            occurrences_in_passage: context.occurrences(original).max(1),
            original_zipf: freq.zipf(original),
            vector_source_id: vectors.id().to_string(),
            flags,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morph::Parser;

    const VECS: &str = "3 3\nwalk 1 0 0\nstroll 0.9 0.1 0\nboy 0 1 0\nzero 0 0 0\n";

    fn setup() -> (SubstitutionMap, WordVectors, PassageContext, FreqTable) {
        let mut map = SubstitutionMap::default().for_passage("p");
        for (l, n) in [("walk", "clirse"), ("boy", "throse"), ("gum", "scrill"), ("store", "ghoathe")] {
            map.entries.insert(l.into(), n.into());
        }
        let parsed = Parser::default().parse("A boy walked. The boy walks to the store.");
        (map, WordVectors::parse(VECS, "fixture").unwrap(), PassageContext::new(&parsed), FreqTable::embedded().as_ref().clone())
    }

    #[test]
    fn hand_built_vectors() {
        let (map, vecs, ctx, freq) = setup();
        let gloss: GlossTable =
            [("clirse", "stroll"), ("throse", "boy"), ("scrill", "candy"), ("nope", "x")].map(|(a, b)| (a.into(), b.into())).into();
        let recs = score_glosses(&map, &gloss, &vecs, &ctx, &freq);
        assert_eq!(recs.len(), 3);
        let walk = recs.iter().find(|r| r.original_word == "walk").unwrap();
        assert!((walk.cosine.unwrap() - 0.993_883_734).abs() < 1e-9);
        assert_eq!(walk.occurrences_in_passage, 2);
        assert_eq!(walk.pos, Some(Pos::Verb));
        let boy = recs.iter().find(|r| r.original_word == "boy").unwrap();
        assert_eq!(boy.cosine, Some(1.0));
        let gum = recs.iter().find(|r| r.original_word == "gum").unwrap();
        assert_eq!(gum.cosine, None);
        assert!(gum.flags.contains(&GlossFlag::OriginalOutOfVocabulary));
    }

    #[test]
    fn multiword_glosses_take_first_token() {
        assert_eq!(normalize_gloss("  Stroll, slowly "), ("stroll".to_string(), true));
        assert_eq!(normalize_gloss("\"boy\""), ("boy".to_string(), false));
    }

    #[test]
    fn malformed_vector_file() {
        assert!(WordVectors::parse("walk 1 0\nboy 1\n", "x").is_err());
        assert!(WordVectors::load(Path::new("/nonexistent/vecs.txt")).is_err());
    }
}
