use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use super::ScoreError;
use crate::resources;

/// Word counts with the corpus size they were drawn from.
///
/// Format: a header line `corpus_size<TAB>N`, then `word<TAB>count`.
#[derive(Debug, Clone)]
pub struct FreqTable {
    counts: HashMap<String, u64>,
    corpus_size: u64,
}

impl FreqTable {
    pub fn new(counts: HashMap<String, u64>, corpus_size: u64) -> Self {
        FreqTable { counts, corpus_size }
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, ScoreError> {
        let err = |line: usize, message: &str| ScoreError::Resource {
            path: origin.to_string(),
            message: format!("line {line}: {message}"),
        };
        let mut lines = text.lines().enumerate();
        let (_, head) = lines.next().ok_or_else(|| err(1, "empty table"))?;
        let corpus_size = head
            .strip_prefix("corpus_size")
            .and_then(|r| r.trim().parse::<u64>().ok())
            .ok_or_else(|| err(1, "header must be `corpus_size<TAB>N`"))?;
        let mut counts = HashMap::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (w, c) = line.split_once('\t').ok_or_else(|| err(i + 1, "expected word<TAB>count"))?;
            let c: u64 = c.trim().parse().map_err(|_| err(i + 1, "count is not an integer"))?;
            counts.insert(w.to_lowercase(), c);
        }
        Ok(FreqTable { counts, corpus_size })
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ScoreError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ScoreError::Resource { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn embedded() -> Arc<FreqTable> {
        static TABLE: OnceLock<Arc<FreqTable>> = OnceLock::new();
        TABLE
            .get_or_init(|| Arc::new(Self::parse(resources::FREQ_EN, "freq_en.tsv").expect("shipped table parses")))
            .clone()
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(&word.to_lowercase()).copied().unwrap_or(0)
    }

    pub fn vocab_size(&self) -> usize {
        self.counts.len()
    }

    /// `log10((count + 1) / (corpus_size + V) · 10⁹)`.
    pub fn zipf(&self, word: &str) -> f64 {
        let denom = (self.corpus_size + self.counts.len() as u64) as f64;
        ((self.count(word) + 1) as f64 / denom * 1e9).log10()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn definitional_values() {
        // corpus_size + V = 1e6; count + 1 = 1 → rate 1e-6 → 3.0
        let t = FreqTable::parse("corpus_size\t999998\nfoo\t0\nbar\t5\n", "t").unwrap();
        assert!((t.zipf("foo") - 3.0).abs() < 1e-12);
        assert!(t.zipf("bar") > t.zipf("foo"));
        assert_eq!(t.zipf("unseen"), t.zipf("other-unseen"));
        assert_eq!(t.zipf("unseen"), t.zipf("foo"));
        let t = FreqTable::parse("corpus_size\t1000000000\nthe\t50000000\n", "t").unwrap();
        assert!((t.zipf("the") - 7.699).abs() < 1e-3);
    }

    #[test]
    fn shipped_table() {
        let t = FreqTable::embedded();
        assert!(t.zipf("the") > 7.0 && t.zipf("the") < 8.0);
        assert!(t.zipf("thank") > t.zipf("perambulation"));
    }

    #[test]
    fn bad_header() {
        assert!(FreqTable::parse("the\t5\n", "t").is_err());
    }
}
