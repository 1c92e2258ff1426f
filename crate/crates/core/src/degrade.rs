//! The six degradation conditions and their transform log.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Passage;
use crate::morph::{
    content_lemmas, is_content, reattach, reattach_blank, sentence_ranges, Casing, ParsedToken, Span, StopList,
    StopListVariant, TokenKind,
};
use crate::nonce::{assign_nonces, NonceError, NoncePool, SubstitutionMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionName {
    Standard,
    NoModals,
    NoVerbsPreps,
    LowercaseNoNumbers,
    NoPunct,
    Blanks,
}

impl ConditionName {
    pub const ALL: [ConditionName; 6] = [
        ConditionName::Standard,
        ConditionName::NoModals,
        ConditionName::NoVerbsPreps,
        ConditionName::LowercaseNoNumbers,
        ConditionName::NoPunct,
        ConditionName::Blanks,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionName::Standard => "standard",
            ConditionName::NoModals => "no_modals",
            ConditionName::NoVerbsPreps => "no_verbs_preps",
            ConditionName::LowercaseNoNumbers => "lowercase_no_numbers",
            ConditionName::NoPunct => "no_punct",
            ConditionName::Blanks => "blanks",
        }
    }
}

impl fmt::Display for ConditionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionName {
    type Err = DegradeError;
    fn from_str(s: &str) -> Result<Self, DegradeError> {
        ConditionName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| DegradeError::Config(format!("unknown condition {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PunctMode {
    Keep,
    PeriodsOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Replacement {
    Nonce,
    BlankToken,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionConfig {
    pub name: ConditionName,
    pub stoplist_variant: StopListVariant,
    pub lowercase: bool,
    pub strip_numerals: bool,
    pub punct_mode: PunctMode,
    pub replacement: Replacement,
    /// Standard stop words this condition substitutes like content words.
    pub removed_stopwords: Vec<String>,
}

pub fn make_condition(name: ConditionName) -> ConditionConfig {
    let variant = match name {
        ConditionName::NoModals => StopListVariant::NoModals,
        ConditionName::NoVerbsPreps => StopListVariant::NoModalsNoPreps,
        _ => StopListVariant::Standard,
    };
    let mut removed_stopwords = StopList::new(variant).removed().to_vec();
    removed_stopwords.sort();
    ConditionConfig {
        name,
        stoplist_variant: variant,
        lowercase: name == ConditionName::LowercaseNoNumbers,
        strip_numerals: name == ConditionName::LowercaseNoNumbers,
        punct_mode: if name == ConditionName::NoPunct { PunctMode::PeriodsOnly } else { PunctMode::Keep },
        replacement: if name == ConditionName::Blanks { Replacement::BlankToken } else { Replacement::Nonce },
        removed_stopwords,
    }
}

impl FromStr for ConditionConfig {
    type Err = DegradeError;
    fn from_str(s: &str) -> Result<Self, DegradeError> {
        s.parse().map(make_condition)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DegradeError {
    #[error("config: {0}")]
    Config(String),
    #[error("substitution map has no entry for content lemma {lemma:?}")]
    Coverage { lemma: String },
    #[error("internal: {0}")]
    Internal(String),
    #[error("condition {0} is not invertible")]
    NotInvertible(ConditionName),
    #[error(transparent)]
    Nonce(#[from] NonceError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformEntry {
    /// Char span of `emitted` in the degraded text.
    pub span: Span,
    pub original: String,
    pub emitted: String,
    /// Uninflected nonce behind `emitted`; absent for BLANK.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonce: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegradedPassage {
    pub passage_id: String,
    pub condition: ConditionName,
    pub text: String,
    pub map: SubstitutionMap,
    pub transform_log: Vec<TransformEntry>,
}

impl DegradedPassage {
    /// Distinct nonce stems present in the text, in order of first
    /// appearance. Empty under blanks.
    pub fn nonces(&self) -> Vec<String> {
        if self.condition == ConditionName::Blanks {
            return Vec::new();
        }
        let mut out: Vec<String> = Vec::new();
        for nonce in self.transform_log.iter().filter_map(|e| e.nonce.as_ref()) {
            if !out.contains(nonce) {
                out.push(nonce.clone());
            }
        }
        out
    }

    /// Number of substituted token positions.
    pub fn substitution_count(&self) -> usize {
        self.transform_log.len()
    }
}

/// Builds the map shared by all six conditions of one passage: lemmas are
/// collected under the smallest stop list so every condition's content
/// words are covered.
pub fn build_map(
    passage_id: &str,
    parsed: &[ParsedToken],
    pool: &NoncePool,
    seed: u64,
) -> Result<SubstitutionMap, DegradeError> {
    let lemmas = content_lemmas(parsed, &StopList::new(StopListVariant::NoModalsNoPreps));
    Ok(assign_nonces(&lemmas, pool, seed)?.for_passage(passage_id))
}

struct Piece {
    text: String,
    whitespace: bool,
    /// Preprocessed original when this piece is a substitution.
    original: Option<String>,
    nonce: Option<String>,
}

fn check_coverage(passage: &Passage, parsed: &[ParsedToken]) -> Result<(), DegradeError> {
    let mut pos = 0;
    for t in parsed {
        if t.span.start != pos || t.span.end < t.span.start {
            return Err(DegradeError::Internal(format!(
                "token {:?} span {}..{} overlaps or leaves a gap at {pos}",
                t.surface, t.span.start, t.span.end
            )));
        }
        pos = t.span.end;
    }
    let joined: String = parsed.iter().map(|t| t.surface.as_str()).collect();
    if joined != passage.text {
        return Err(DegradeError::Internal(format!("parsed tokens do not cover passage {}", passage.id)));
    }
    Ok(())
}

pub fn degrade(
    passage: &Passage,
    parsed: &[ParsedToken],
    cfg: &ConditionConfig,
    map: &SubstitutionMap,
) -> Result<DegradedPassage, DegradeError> {
    check_coverage(passage, parsed)?;
    let stoplist = StopList::new(cfg.stoplist_variant);
    let sentence_final: Vec<bool> = {
        let mut v = vec![false; parsed.len()];
        for r in sentence_ranges(parsed) {
            if let Some(i) = (r.start..r.end).rev().find(|&i| parsed[i].kind == TokenKind::Punctuation
                && crate::morph::is_sentence_ender(&parsed[i].surface))
            {
                v[i] = true;
            }
        }
        v
    };

    let mut pieces: Vec<Piece> = Vec::with_capacity(parsed.len());
    let mut drop_next_ws = false;
    for (i, t) in parsed.iter().enumerate() {
        let verbatim = |s: &str| if cfg.lowercase { s.to_lowercase() } else { s.to_string() };
        match t.kind {
            TokenKind::Whitespace => {
                if drop_next_ws {
                    drop_next_ws = false;
                    continue;
                }
                pieces.push(Piece { text: t.surface.clone(), whitespace: true, original: None, nonce: None });
            }
            TokenKind::Numeral if cfg.strip_numerals => {
                let next_is_ws = parsed.get(i + 1).is_some_and(|n| n.kind == TokenKind::Whitespace);
                if next_is_ws {
                    drop_next_ws = true;
                } else if pieces.last().is_some_and(|p| p.whitespace) {
                    pieces.pop();
                }
            }
            TokenKind::Numeral => pieces.push(Piece { text: verbatim(&t.surface), whitespace: false, original: None, nonce: None }),
            TokenKind::Punctuation => match cfg.punct_mode {
                PunctMode::Keep => pieces.push(Piece { text: t.surface.clone(), whitespace: false, original: None, nonce: None }),
                PunctMode::PeriodsOnly => {
                    if sentence_final[i] {
                        pieces.push(Piece { text: ".".into(), whitespace: false, original: None, nonce: None });
                    }
                }
            },
            TokenKind::Word => {
                let pre = verbatim(&t.surface);
                if !is_content(t, &stoplist) {
                    pieces.push(Piece { text: pre, whitespace: false, original: None, nonce: None });
                    continue;
                }
                let casing = if cfg.lowercase { Casing::Lower } else { t.casing.clone() };
                let (emitted, nonce) = match cfg.replacement {
                    Replacement::BlankToken => (reattach_blank(t.suffix_rule), None),
                    Replacement::Nonce => {
                        let nonce =
                            map.get(&t.lemma).ok_or_else(|| DegradeError::Coverage { lemma: t.lemma.clone() })?;
                        (reattach(nonce, t.suffix_rule, &casing), Some(nonce.to_string()))
                    }
                };
                pieces.push(Piece { text: emitted, whitespace: false, original: Some(pre), nonce });
            }
        }
    }
    if cfg.punct_mode == PunctMode::PeriodsOnly || cfg.strip_numerals {
        pieces = merge_whitespace(pieces);
    }

    let mut text = String::new();
    let mut log = Vec::new();
    let mut pos = 0;
    for p in pieces {
        let len = p.text.chars().count();
        if let Some(original) = p.original {
            log.push(TransformEntry {
                span: Span { start: pos, end: pos + len },
                original,
                emitted: p.text.clone(),
                nonce: p.nonce,
            });
        }
        text.push_str(&p.text);
        pos += len;
    }
    Ok(DegradedPassage {
        passage_id: passage.id.clone(),
        condition: cfg.name,
        text,
        map: map.clone(),
        transform_log: log,
    })
}

/// Collapses whitespace left adjacent by removed tokens, keeping a run that
/// contains a line break if there is one. Whitespace that ends up before a
/// period is dropped.
fn merge_whitespace(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        if p.whitespace {
            if let Some(last) = out.last_mut() {
                if last.whitespace {
                    if !last.text.contains('\n') && p.text.contains('\n') {
                        *last = p;
                    }
                    continue;
                }
            } else {
                continue;
            }
        } else if p.text == "." && p.original.is_none() && out.last().is_some_and(|l| l.whitespace) {
            out.pop();
        }
        out.push(p);
    }
    out
}

/// Replaces every logged substitution with its original, back to front.
pub fn invert(degraded: &DegradedPassage) -> Result<String, DegradeError> {
    if degraded.condition == ConditionName::Blanks {
        return Err(DegradeError::NotInvertible(degraded.condition));
    }
    let mut chars: Vec<char> = degraded.text.chars().collect();
    for e in degraded.transform_log.iter().rev() {
        let Span { start, end } = e.span;
        if end > chars.len() || chars[start..end].iter().collect::<String>() != e.emitted {
            return Err(DegradeError::Internal(format!("log entry {start}..{end} does not match text")));
        }
        chars.splice(start..end, e.original.chars());
    }
    Ok(chars.into_iter().collect())
}
