//! Lexicon-first part-of-speech tagging.
//!
//! Each known form carries tag priors; the highest prior wins unless one of
//! two bigram repairs applies (a determiner pulls an ambiguous word toward a
//! noun reading, `to` pulls it toward a base verb). Unknown words fall back
//! to suffix heuristics.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::inflect::Feature;
use super::tokenize::{is_sentence_ender, Token, TokenKind};
use super::MorphError;
use crate::resources;

/// Coarse part-of-speech classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pos {
    Noun,
    Verb,
    VerbAux,
    Adjective,
    Adverb,
    Pronoun,
    Determiner,
    Preposition,
    Conjunction,
    Numeral,
    Interjection,
    Foreign,
    Other,
}

impl Pos {
    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::VerbAux => "verb-aux",
            Pos::Adjective => "adjective",
            Pos::Adverb => "adverb",
            Pos::Pronoun => "pronoun",
            Pos::Determiner => "determiner",
            Pos::Preposition => "preposition",
            Pos::Conjunction => "conjunction",
            Pos::Numeral => "numeral",
            Pos::Interjection => "interjection",
            Pos::Foreign => "foreign",
            Pos::Other => "other",
        }
    }

    pub fn is_open_class(self) -> bool {
        matches!(self, Pos::Noun | Pos::Verb | Pos::Adjective | Pos::Adverb)
    }
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

const AUX_LEMMAS: [&str; 3] = ["be", "have", "do"];

/// Maps a Penn Treebank tag onto the coarse class plus inflection feature.
pub fn from_penn(tag: &str, lemma: &str) -> Option<(Pos, Feature)> {
    let feature = match tag {
        "NNS" | "NNPS" => Feature::Plural,
        "VBD" | "VBN" => Feature::Past,
        "VBG" => Feature::Progressive,
        "VBZ" => Feature::ThirdSingular,
        "JJR" | "RBR" => Feature::Comparative,
        "JJS" | "RBS" => Feature::Superlative,
        _ => Feature::None,
    };
    let pos = match tag {
        "NN" | "NNS" | "NNP" | "NNPS" => Pos::Noun,
        "MD" => Pos::VerbAux,
        t if t.starts_with("VB") => {
            if AUX_LEMMAS.contains(&lemma) {
                Pos::VerbAux
            } else {
                Pos::Verb
            }
        }
        "JJ" | "JJR" | "JJS" => Pos::Adjective,
        "RB" | "RBR" | "RBS" | "WRB" => Pos::Adverb,
        "PRP" | "PRP$" | "WP" | "WP$" | "EX" => Pos::Pronoun,
        "DT" | "PDT" | "WDT" => Pos::Determiner,
        "IN" | "TO" | "RP" => Pos::Preposition,
        "CC" => Pos::Conjunction,
        "CD" => Pos::Numeral,
        "UH" => Pos::Interjection,
        "FW" => Pos::Foreign,
        "POS" | "LS" | "SYM" => Pos::Other,
        _ => return None,
    };
    Some((pos, feature))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexEntry {
    pub lemma: String,
    pub pos: Pos,
    pub feature: Feature,
    pub prior: f32,
}

/// Form -> tag readings, sorted by descending prior.
#[derive(Debug, Clone, Default)]
pub struct TagLexicon {
    forms: HashMap<String, Vec<LexEntry>>,
    base_lemmas: HashMap<String, ()>,
}

impl TagLexicon {
    /// Parses `form \t lemma \t penn-tag \t prior` lines. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, MorphError> {
        let mut forms: HashMap<String, Vec<LexEntry>> = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let bad = |msg: &str| MorphError::Lexicon { line: i + 1, message: msg.to_string() };
            if cols.len() != 4 {
                return Err(bad("expected 4 tab-separated columns"));
            }
            let prior: f32 = cols[3].parse().map_err(|_| bad("prior is not a number"))?;
            let Some((pos, feature)) = from_penn(cols[2], cols[1]) else {
                return Err(bad("unknown tag"));
            };
            forms.entry(cols[0].to_string()).or_default().push(LexEntry {
                lemma: cols[1].to_string(),
                pos,
                feature,
                prior,
            });
        }
        let mut base_lemmas = HashMap::new();
        for entries in forms.values_mut() {
            entries.sort_by(|a, b| b.prior.total_cmp(&a.prior));
            for e in entries.iter() {
                base_lemmas.insert(e.lemma.clone(), ());
            }
        }
        Ok(TagLexicon { forms, base_lemmas })
    }

    pub fn load(path: &Path) -> Result<Self, MorphError> {
        let text = std::fs::read_to_string(path).map_err(|e| MorphError::Resource {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse(&text)
    }

    /// The lexicon shipped with the crate.
    pub fn embedded() -> Arc<TagLexicon> {
        static LEX: OnceLock<Arc<TagLexicon>> = OnceLock::new();
        LEX.get_or_init(|| Arc::new(TagLexicon::parse(resources::LEXICON_EN).expect("embedded lexicon parses")))
            .clone()
    }

    pub fn lookup(&self, form: &str) -> Option<&[LexEntry]> {
        self.forms.get(form).map(Vec::as_slice)
    }

    /// True if `lemma` appears as the lemma of any reading.
    pub fn is_known_lemma(&self, lemma: &str) -> bool {
        self.base_lemmas.contains_key(lemma)
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }
}

/// Result of tagging one token, before morphological splitting.
#[derive(Debug, Clone, PartialEq)]
pub struct Tagging {
    pub pos: Pos,
    pub feature: Feature,
    /// Lemma proposed by the lexicon, if the form was found.
    pub lexicon_lemma: Option<String>,
    /// Capitalised mid-sentence word not read as a closed-class item.
    pub proper: bool,
}

fn guess_unknown(lower: &str) -> (Pos, Feature) {
    let n = lower.chars().count();
    if n > 4 && lower.ends_with("ing") {
        (Pos::Verb, Feature::Progressive)
    } else if n > 3 && lower.ends_with("ed") {
        (Pos::Verb, Feature::Past)
    } else if n > 3 && lower.ends_with("ly") {
        (Pos::Adverb, Feature::None)
    } else if ["ous", "ful", "able", "ible", "ive", "ic", "al", "less"].iter().any(|s| lower.ends_with(s)) {
        (Pos::Adjective, Feature::None)
    } else if n > 3
        && lower.ends_with('s')
        && !["ss", "us", "is"].iter().any(|s| lower.ends_with(s))
    {
        (Pos::Noun, Feature::Plural)
    } else {
        (Pos::Noun, Feature::None)
    }
}

fn clitic_tag(lower: &str) -> Pos {
    let norm = lower.replace('’', "'");
    match norm.as_str() {
        "n't" => Pos::Adverb,
        "'s" => Pos::Other,
        _ => Pos::VerbAux,
    }
}

/// Tags a token stream. Non-word tokens get `Other`/`Numeral`.
pub fn tag_tokens(tokens: &[Token], lexicon: &TagLexicon) -> Vec<Tagging> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut sentence_start = true;
    let mut prev_word: Option<(String, Pos)> = None;
    for tok in tokens {
        let tagging = match tok.kind {
            TokenKind::Whitespace => Tagging { pos: Pos::Other, feature: Feature::None, lexicon_lemma: None, proper: false },
            TokenKind::Punctuation => {
                if is_sentence_ender(&tok.surface) {
                    sentence_start = true;
                    prev_word = None;
                }
                Tagging { pos: Pos::Other, feature: Feature::None, lexicon_lemma: None, proper: false }
            }
            TokenKind::Numeral => {
                sentence_start = false;
                prev_word = None;
                Tagging { pos: Pos::Numeral, feature: Feature::None, lexicon_lemma: None, proper: false }
            }
            TokenKind::Word => {
                let lower = tok.surface.to_lowercase();
                let t = if tok.clitic {
                    Tagging { pos: clitic_tag(&lower), feature: Feature::None, lexicon_lemma: None, proper: false }
                } else {
                    tag_word(&tok.surface, &lower, sentence_start, prev_word.as_ref(), lexicon)
                };
                sentence_start = false;
                prev_word = Some((lower, t.pos));
                t
            }
        };
        out.push(tagging);
    }
    out
}

fn tag_word(
    surface: &str,
    lower: &str,
    sentence_start: bool,
    prev: Option<&(String, Pos)>,
    lexicon: &TagLexicon,
) -> Tagging {
    let entries = lexicon.lookup(lower);
    let initial_cap = {
        let mut letters = surface.chars().filter(|c| c.is_alphabetic());
        letters.next().is_some_and(char::is_uppercase) && letters.all(|c| !c.is_uppercase())
    };
    let top_open = entries.is_none_or(|e| e[0].pos.is_open_class());
    if initial_cap && !sentence_start && top_open && lower != "i" {
        return Tagging { pos: Pos::Noun, feature: Feature::None, lexicon_lemma: None, proper: true };
    }
    let Some(entries) = entries else {
        let (mut pos, mut feature) = guess_unknown(lower);
        if prev.is_some_and(|(w, _)| w == "to") && feature == Feature::None && pos == Pos::Noun {
            pos = Pos::Verb;
            feature = Feature::None;
        }
        return Tagging { pos, feature, lexicon_lemma: None, proper: false };
    };
    let mut chosen = &entries[0];
    if let Some((prev_lower, prev_pos)) = prev {
        if *prev_pos == Pos::Determiner && matches!(chosen.pos, Pos::Verb | Pos::VerbAux) {
            if let Some(noun) = entries.iter().find(|e| e.pos == Pos::Noun) {
                chosen = noun;
            }
        } else if prev_lower == "to" && chosen.pos == Pos::Noun {
            if let Some(verb) = entries.iter().find(|e| e.pos == Pos::Verb && e.feature == Feature::None) {
                chosen = verb;
            }
        }
    }
    Tagging {
        pos: chosen.pos,
        feature: chosen.feature,
        lexicon_lemma: Some(chosen.lemma.clone()),
        proper: false,
    }
}
