use serde::{Deserialize, Serialize};

/// Letter-case pattern of a word token.
///
/// `Mixed` keeps the per-character uppercase mask of the original so the
/// original surface can be rebuilt from its lowercase lemma.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Casing {
    Lower,
    InitialCap,
    AllCaps,
    Mixed(Vec<bool>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CasingClass {
    Lower,
    InitialCap,
    AllCaps,
    Mixed,
}

impl Casing {
    pub fn detect(surface: &str) -> Casing {
        let letters: Vec<char> = surface.chars().filter(|c| c.is_alphabetic()).collect();
        if letters.iter().all(|c| !c.is_uppercase()) {
            return Casing::Lower;
        }
        let first_upper = letters[0].is_uppercase();
        let rest_lower = letters[1..].iter().all(|c| !c.is_uppercase());
        if first_upper && rest_lower {
            Casing::InitialCap
        } else if letters.iter().all(|c| !c.is_lowercase()) {
            Casing::AllCaps
        } else {
            Casing::Mixed(surface.chars().map(char::is_uppercase).collect())
        }
    }

    pub fn class(&self) -> CasingClass {
        match self {
            Casing::Lower => CasingClass::Lower,
            Casing::InitialCap => CasingClass::InitialCap,
            Casing::AllCaps => CasingClass::AllCaps,
            Casing::Mixed(_) => CasingClass::Mixed,
        }
    }

    /// Applies this pattern to a lowercase word.
    ///
    /// For `Mixed`, the mask is laid over the word position by position; if
    /// the word is shorter than the mask and the result would fall into a
    /// different class, it is nudged back into `Mixed`.
    pub fn apply(&self, word: &str) -> String {
        match self {
            Casing::Lower => word.to_string(),
            Casing::InitialCap => {
                let mut chars = word.chars();
                match chars.next() {
                    Some(first) => first.to_uppercase().chain(chars).collect(),
                    None => String::new(),
                }
            }
            Casing::AllCaps => word.to_uppercase(),
            Casing::Mixed(mask) => {
                let cased: String = word
                    .chars()
                    .enumerate()
                    .flat_map(|(i, c)| {
                        let upper = mask.get(i).copied().unwrap_or(false);
                        CaseIter::new(c, upper)
                    })
                    .collect();
                fit_mixed(cased)
            }
        }
    }
}

fn fit_mixed(word: String) -> String {
    if Casing::detect(&word).class() == CasingClass::Mixed {
        return word;
    }
    let mut chars: Vec<char> = word.chars().collect();
    let letter_idx: Vec<usize> = (0..chars.len()).filter(|&i| chars[i].is_alphabetic()).collect();
    if letter_idx.len() < 2 {
        return word;
    }
    match Casing::detect(&word).class() {
        CasingClass::AllCaps => {
            let last = *letter_idx.last().unwrap();
            chars[last] = chars[last].to_lowercase().next().unwrap_or(chars[last]);
        }
        _ => {
            let second = letter_idx[1];
            chars[second] = chars[second].to_uppercase().next().unwrap_or(chars[second]);
        }
    }
    chars.into_iter().collect()
}

enum CaseIter {
    One(Option<char>),
    Upper(std::char::ToUppercase),
}

impl CaseIter {
    fn new(c: char, upper: bool) -> Self {
        if upper {
            CaseIter::Upper(c.to_uppercase())
        } else {
            CaseIter::One(Some(c))
        }
    }
}

impl Iterator for CaseIter {
    type Item = char;
    fn next(&mut self) -> Option<char> {
        match self {
            CaseIter::One(c) => c.take(),
            CaseIter::Upper(it) => it.next(),
        }
    }
}
