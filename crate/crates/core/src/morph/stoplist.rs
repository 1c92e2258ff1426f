use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::resources;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopListVariant {
    Standard,
    NoModals,
    NoModalsNoPreps,
}

/// Words left untouched by substitution.
///
/// `Standard` is the full list. `NoModals` drops auxiliaries and modals
/// (and their negative-contraction stems); `NoModalsNoPreps` additionally
/// drops prepositions. Each variant is a strict subset of the previous one.
#[derive(Debug, Clone)]
pub struct StopList {
    words: HashSet<String>,
    variant: StopListVariant,
    removed: Vec<String>,
}

impl StopList {
    pub fn new(variant: StopListVariant) -> Self {
        Self::from_table(resources::STOPWORDS_EN, variant)
    }

    /// Parses a `word \t class` table where class is `function`, `aux` or
    /// `prep`.
    pub fn from_table(table: &str, variant: StopListVariant) -> Self {
        let mut words = HashSet::new();
        let mut removed = Vec::new();
        for line in table.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, class) = line.split_once('\t').unwrap_or((line, "function"));
            let drop = match (variant, class) {
                (StopListVariant::Standard, _) => false,
                (_, "aux") => true,
                (StopListVariant::NoModalsNoPreps, "prep") => true,
                _ => false,
            };
            if drop {
                removed.push(word.to_string());
            } else {
                words.insert(word.to_string());
            }
        }
        StopList { words, variant, removed }
    }

    pub fn variant(&self) -> StopListVariant {
        self.variant
    }

    /// Case-insensitive membership; curly apostrophes match straight ones.
    pub fn contains(&self, word: &str) -> bool {
        let key = word.to_lowercase().replace('’', "'");
        self.words.contains(&key)
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

    /// Standard-list words this variant no longer protects.
    pub fn removed(&self) -> &[String] {
        &self.removed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variants_are_strictly_nested() {
        let std = StopList::new(StopListVariant::Standard);
        let nm = StopList::new(StopListVariant::NoModals);
        let nmp = StopList::new(StopListVariant::NoModalsNoPreps);
        assert!(nm.words().all(|w| std.contains(w)));
        assert!(nmp.words().all(|w| nm.contains(w)));
        assert!(std.len() > nm.len() && nm.len() > nmp.len());
        assert_eq!(std.len(), 182);
    }

    #[test]
    fn standard_covers_function_classes() {
        let std = StopList::new(StopListVariant::Standard);
        for w in ["the", "a", "she", "into", "be", "can", "is", "The", "don’t"] {
            assert!(std.contains(w), "{w}");
        }
        // Not on the list, so substituted like any content word.
        assert!(!std.contains("must"));
    }

    #[test]
    fn prepositions_only_leave_in_last_variant() {
        assert!(StopList::new(StopListVariant::NoModals).contains("into"));
        assert!(!StopList::new(StopListVariant::NoModalsNoPreps).contains("into"));
        assert!(!StopList::new(StopListVariant::NoModals).contains("is"));
        assert!(StopList::new(StopListVariant::NoModalsNoPreps).contains("the"));
    }
}
