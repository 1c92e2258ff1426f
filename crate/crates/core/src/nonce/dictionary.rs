use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use crate::resources;

/// Reference word list for orthographic neighborhoods.
///
/// Neighborhood counts use a wildcard index: every word contributes one key
/// per position with that position blanked, so `N(w)` is a sum of key
/// counts rather than a scan over the list.
#[derive(Debug, Clone)]
pub struct Dictionary {
    id: String,
    words: HashSet<String>,
    wildcards: HashMap<(usize, String), u32>,
}

const HOLE: char = '\u{0}';

fn wildcard(chars: &[char], i: usize) -> (usize, String) {
    let key = chars.iter().enumerate().map(|(j, &c)| if j == i { HOLE } else { c }).collect();
    (i, key)
}

impl Dictionary {
    pub fn new<I, S>(id: impl Into<String>, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words: HashSet<String> =
            words.into_iter().map(|w| w.as_ref().trim().to_lowercase()).filter(|w| !w.is_empty()).collect();
        let mut wildcards = HashMap::new();
        for w in &words {
            let chars: Vec<char> = w.chars().collect();
            for i in 0..chars.len() {
                *wildcards.entry(wildcard(&chars, i)).or_insert(0) += 1;
            }
        }
        Dictionary { id: id.into(), words, wildcards }
    }

    /// One word per line; `#` lines are comments.
    pub fn from_list(id: impl Into<String>, text: &str) -> Self {
        Self::new(id, text.lines().filter(|l| !l.starts_with('#')))
    }

    pub fn embedded() -> Arc<Dictionary> {
        static DICT: OnceLock<Arc<Dictionary>> = OnceLock::new();
        DICT.get_or_init(|| Arc::new(Self::from_list(resources::DICTIONARY_EN_ID, resources::DICTIONARY_EN)))
            .clone()
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    /// Coltheart's N: dictionary words of the same length that differ from
    /// `word` in exactly one position. `word` itself is never counted.
    pub fn neighborhood_size(&self, word: &str) -> usize {
        let chars: Vec<char> = word.chars().collect();
        let own = usize::from(self.words.contains(word));
        (0..chars.len())
            .map(|i| self.wildcards.get(&wildcard(&chars, i)).copied().unwrap_or(0) as usize - own)
            .sum()
    }

    /// The neighbors themselves, sorted. Linear in dictionary size.
    pub fn neighbors(&self, word: &str) -> Vec<&str> {
        let chars: Vec<char> = word.chars().collect();
        let mut out: Vec<&str> = self
            .words
            .iter()
            .filter(|w| {
                let mut diff = 0;
                let mut len = 0;
                for (a, b) in w.chars().zip(chars.iter()) {
                    len += 1;
                    diff += usize::from(a != *b);
                }
                len == chars.len() && w.chars().count() == len && diff == 1
            })
            .map(String::as_str)
            .collect();
        out.sort_unstable();
        out
    }
}

pub fn neighborhood_size(word: &str, dictionary: &Dictionary) -> usize {
    dictionary.neighborhood_size(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_enumerable() {
        let d = Dictionary::new("t", ["cat", "bat", "cot"]);
        assert_eq!(d.neighborhood_size("cat"), 2);
        assert_eq!(d.neighborhood_size("cut"), 2);
        assert_eq!(d.neighborhood_size("dog"), 0);
        assert_eq!(d.neighbors("cat"), ["bat", "cot"]);
    }

    #[test]
    fn example_nonces_under_shipped_dictionary() {
        let d = Dictionary::embedded();
        assert!(d.len() >= 45_000);
        for (w, n) in [("grolk", 0), ("croile", 0), ("fliff", 2), ("scrill", 2)] {
            assert_eq!(d.neighborhood_size(w), n, "{w}: {:?}", d.neighbors(w));
        }
        assert_eq!(d.neighbors("fliff"), ["cliff", "fluff"]);
    }
}
