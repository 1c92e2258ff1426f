//! Regular English inflectional orthography.
//!
//! [`inflect`] attaches a suffix to a lemma using the spelling of the lemma
//! to pick the allomorph (`-s`/`-es`/`-ies`, `-d`/`-ed`/`-ied`, consonant
//! doubling, e-deletion). [`strip_candidates`] runs the same rules backwards
//! and yields every lemma that could have produced a surface form; callers
//! keep the candidates for which `inflect` reproduces the surface.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuffixRule {
    None,
    PluralS,
    PluralEs,
    PastEd,
    PastD,
    ProgIng,
    CompEr,
    SupEst,
    ThirdS,
    PossClitic,
}

impl SuffixRule {
    pub const ALL: [SuffixRule; 10] = [
        SuffixRule::None,
        SuffixRule::PluralS,
        SuffixRule::PluralEs,
        SuffixRule::PastEd,
        SuffixRule::PastD,
        SuffixRule::ProgIng,
        SuffixRule::CompEr,
        SuffixRule::SupEst,
        SuffixRule::ThirdS,
        SuffixRule::PossClitic,
    ];
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn ends_with_sibilant(w: &str) -> bool {
    w.ends_with('s') || w.ends_with('x') || w.ends_with('z') || w.ends_with("ch") || w.ends_with("sh")
}

fn consonant_y(w: &str) -> bool {
    let c: Vec<char> = w.chars().collect();
    c.len() >= 2 && c[c.len() - 1] == 'y' && !is_vowel(c[c.len() - 2])
}

/// Number of vowel groups, treating `u` after `q` as a consonant and a
/// word-final silent `e` as no vowel.
fn syllables(w: &[char]) -> usize {
    let mut groups = 0;
    let mut in_vowel = false;
    for (i, &c) in w.iter().enumerate() {
        let vowel = (is_vowel(c) && !(c == 'u' && i > 0 && w[i - 1] == 'q'))
            || (c == 'y' && i > 0 && !is_vowel(w[i - 1]));
        let silent_e = c == 'e' && i == w.len() - 1 && i > 0;
        if vowel && !silent_e && !in_vowel {
            groups += 1;
        }
        in_vowel = vowel && !silent_e;
    }
    groups
}

/// Monosyllabic consonant-vowel-consonant lemmas double their final
/// consonant before a vowel-initial suffix (`nip` -> `nipping`). Two-letter
/// vowel-consonant lemmas do too (`up` -> `upped`).
fn doubles_final(w: &str) -> bool {
    let c: Vec<char> = w.chars().collect();
    let n = c.len();
    if n == 2 && c.iter().all(|ch| ch.is_ascii_lowercase()) {
        return is_vowel(c[0]) && !is_vowel(c[1]) && !matches!(c[1], 'w' | 'x' | 'y');
    }
    if n < 3 || !c.iter().all(|ch| ch.is_ascii_lowercase()) {
        return false;
    }
    let last = c[n - 1];
    let vowel = c[n - 2];
    let before = c[n - 3];
    let before_is_consonant = !is_vowel(before) || (before == 'u' && n >= 4 && c[n - 4] == 'q');
    !is_vowel(last)
        && !matches!(last, 'w' | 'x' | 'y')
        && is_vowel(vowel)
        && before_is_consonant
        && syllables(&c) == 1
}

fn drop_last(w: &str) -> &str {
    let mut it = w.char_indices();
    match it.next_back() {
        Some((i, _)) => &w[..i],
        None => w,
    }
}

fn last_char(w: &str) -> Option<char> {
    w.chars().next_back()
}

fn doubled(w: &str, suffix: &str) -> String {
    let last = last_char(w).unwrap();
    format!("{w}{last}{suffix}")
}

/// Attaches `rule` to a lowercase lemma.
pub fn inflect(lemma: &str, rule: SuffixRule) -> String {
    let w = lemma;
    match rule {
        SuffixRule::None => w.to_string(),
        SuffixRule::PluralS | SuffixRule::ThirdS | SuffixRule::PluralEs => {
            if ends_with_sibilant(w) {
                format!("{w}es")
            } else if consonant_y(w) {
                format!("{}ies", drop_last(w))
            } else if rule == SuffixRule::PluralEs && w.ends_with('o') {
                format!("{w}es")
            } else {
                format!("{w}s")
            }
        }
        SuffixRule::PastEd | SuffixRule::PastD => {
            if w.ends_with('e') {
                format!("{w}d")
            } else if consonant_y(w) {
                format!("{}ied", drop_last(w))
            } else if doubles_final(w) {
                doubled(w, "ed")
            } else {
                format!("{w}ed")
            }
        }
        SuffixRule::ProgIng => {
            if let Some(stem) = w.strip_suffix("ie") {
                format!("{stem}ying")
            } else if w.ends_with('e') && !(w.ends_with("ee") || w.ends_with("ye") || w.ends_with("oe")) && w.len() > 2 {
                format!("{}ing", drop_last(w))
            } else if doubles_final(w) {
                doubled(w, "ing")
            } else {
                format!("{w}ing")
            }
        }
        SuffixRule::CompEr | SuffixRule::SupEst => {
            let (e_form, full) = if rule == SuffixRule::CompEr { ("r", "er") } else { ("st", "est") };
            if w.ends_with('e') {
                format!("{w}{e_form}")
            } else if consonant_y(w) {
                format!("{}i{full}", drop_last(w))
            } else if doubles_final(w) {
                doubled(w, full)
            } else {
                format!("{w}{full}")
            }
        }
        SuffixRule::PossClitic => format!("{w}'s"),
    }
}

/// Which suffix family an inflected form belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    None,
    Plural,
    Past,
    Progressive,
    ThirdSingular,
    Comparative,
    Superlative,
}

impl Feature {
    /// Rules to try, in preference order, for a form carrying this feature.
    pub fn rules(self) -> &'static [SuffixRule] {
        match self {
            Feature::None => &[],
            Feature::Plural => &[SuffixRule::PluralS, SuffixRule::PluralEs],
            Feature::Past => &[SuffixRule::PastEd, SuffixRule::PastD],
            Feature::Progressive => &[SuffixRule::ProgIng],
            Feature::ThirdSingular => &[SuffixRule::ThirdS],
            Feature::Comparative => &[SuffixRule::CompEr],
            Feature::Superlative => &[SuffixRule::SupEst],
        }
    }
}

/// Picks the rule variant recorded for a (lemma, surface) pair: `PastD` for
/// e-final lemmas, `PluralEs` where the plain plural rule would not spell
/// the surface.
pub fn rule_for(lemma: &str, surface: &str, feature: Feature) -> Option<SuffixRule> {
    feature.rules().iter().copied().find(|&r| {
        let applies = match r {
            SuffixRule::PastD => lemma.ends_with('e'),
            SuffixRule::PastEd => !lemma.ends_with('e'),
            _ => true,
        };
        applies && inflect(lemma, r) == surface
    })
}

/// Lemmas that regular orthography could have turned into `surface`
/// under `feature`. Not filtered; may contain non-words.
pub fn strip_candidates(surface: &str, feature: Feature) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut add = |s: &str| {
        if !s.is_empty() && !out.iter().any(|o| o == s) {
            out.push(s.to_string());
        }
    };
    let strip = |suffix: &str| surface.strip_suffix(suffix).filter(|s| !s.is_empty());
    match feature {
        Feature::None => {}
        Feature::Plural | Feature::ThirdSingular => {
            if let Some(stem) = strip("ies") {
                add(&format!("{stem}y"));
            }
            if let Some(stem) = strip("es") {
                add(stem);
            }
            if let Some(stem) = strip("s") {
                add(stem);
            }
        }
        Feature::Past => {
            if let Some(stem) = strip("ied") {
                add(&format!("{stem}y"));
            }
            if let Some(stem) = strip("ed") {
                add(stem);
                add(&format!("{stem}e"));
                add(undouble(stem));
            }
            if let Some(stem) = strip("d") {
                add(stem);
            }
        }
        Feature::Progressive => {
            if let Some(stem) = strip("ying") {
                add(&format!("{stem}ie"));
            }
            if let Some(stem) = strip("ing") {
                add(stem);
                add(&format!("{stem}e"));
                add(undouble(stem));
            }
        }
        Feature::Comparative | Feature::Superlative => {
            let (full, short) = if feature == Feature::Comparative { ("er", "r") } else { ("est", "st") };
            if let Some(stem) = strip(&format!("i{full}")) {
                add(&format!("{stem}y"));
            }
            if let Some(stem) = strip(full) {
                add(stem);
                add(undouble(stem));
            }
            if let Some(stem) = strip(short) {
                add(stem);
            }
        }
    }
    out
}

fn undouble(stem: &str) -> &str {
    let c: Vec<char> = stem.chars().collect();
    let n = c.len();
    if n >= 2 && c[n - 1] == c[n - 2] {
        drop_last(stem)
    } else {
        stem
    }
}
