//! Tokenization, tagging and lemma + suffix analysis.
//!
//! A [`ParsedToken`] is self-inverting: `reattach(lemma, suffix_rule,
//! casing)` rebuilds the surface for every word token. Forms that regular
//! orthography cannot rebuild from the lexicon lemma (irregular
//! inflections such as `went` or `children`) keep their full surface as
//! the lemma with no suffix.

mod casing;
mod inflect;
mod stoplist;
mod tagger;
mod tokenize;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use casing::{Casing, CasingClass};
pub use inflect::{inflect, rule_for, strip_candidates, Feature, SuffixRule};
pub use stoplist::{StopList, StopListVariant};
pub use tagger::{from_penn, tag_tokens, LexEntry, Pos, TagLexicon, Tagging};
pub use tokenize::{is_sentence_ender, sentence_ranges, tokenize, AsToken, Span, Token, TokenKind};

#[derive(Debug, Error)]
pub enum MorphError {
    #[error("cannot read resource {path}: {source}")]
    Resource {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon line {line}: {message}")]
    Lexicon { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParsedToken {
    pub surface: String,
    pub kind: TokenKind,
    pub pos: Pos,
    /// Inflection the tagger read on this form.
    pub feature: Feature,
    pub lemma: String,
    pub suffix_rule: SuffixRule,
    pub casing: Casing,
    pub is_stop: bool,
    pub span: Span,
    pub clitic: bool,
    pub proper: bool,
}

impl AsToken for ParsedToken {
    fn kind(&self) -> TokenKind {
        self.kind
    }
    fn surface(&self) -> &str {
        &self.surface
    }
}

impl ParsedToken {
    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

/// Attaches `rule` to `lemma` and applies `casing` to the whole word.
pub fn reattach(lemma: &str, rule: SuffixRule, casing: &Casing) -> String {
    casing.apply(&inflect(lemma, rule))
}

/// Literal replacement used by the BLANK condition: the stem is always
/// `BLANK`, suffixes stay lowercase (`BLANKed`, `BLANKs`, `BLANKing`).
pub fn reattach_blank(rule: SuffixRule) -> String {
    let inflected = inflect("blank", rule);
    format!("BLANK{}", &inflected["blank".len()..])
}

/// Attaches lexicon tags to raw tokens.
pub fn tag_pos(tokens: &[Token], lexicon: &TagLexicon) -> Vec<ParsedToken> {
    let tags = tag_tokens(tokens, lexicon);
    tokens
        .iter()
        .zip(tags)
        .map(|(tok, tag)| {
            let lower = tok.surface.to_lowercase();
            ParsedToken {
                surface: tok.surface.clone(),
                kind: tok.kind,
                pos: tag.pos,
                feature: if tag.proper { Feature::None } else { tag.feature },
                lemma: match tok.kind {
                    TokenKind::Word => tag.lexicon_lemma.unwrap_or(lower),
                    _ => lower,
                },
                suffix_rule: SuffixRule::None,
                casing: Casing::detect(&tok.surface),
                is_stop: false,
                span: tok.span,
                clitic: tok.clitic,
                proper: tag.proper,
            }
        })
        .collect()
}

/// Splits an inflected word token into lemma + suffix rule.
///
/// The lexicon lemma is tried first; for unknown forms, orthographic
/// candidates are ranked with known lemmas ahead of the rest, then by
/// corpus frequency (`trued` -> `true`, not `tru`). A split is
/// only accepted if [`reattach`] reproduces the surface exactly.
pub fn split_morph(mut token: ParsedToken, lexicon: &TagLexicon) -> ParsedToken {
    if token.kind != TokenKind::Word {
        return token;
    }
    let lower = token.surface.to_lowercase();
    let fallback = |mut t: ParsedToken| {
        t.lemma = lower.clone();
        t.suffix_rule = SuffixRule::None;
        ensure_self_inverting(t)
    };
    if token.clitic || token.proper || token.feature == Feature::None {
        return fallback(token);
    }
    let lexicon_lemma = (token.lemma != lower).then(|| token.lemma.clone());
    let candidates: Vec<String> = match lexicon_lemma {
        Some(lemma) => vec![lemma],
        None => {
            let freq = crate::scoring::FreqTable::embedded();
            let mut c = strip_candidates(&lower, token.feature);
            c.sort_by_key(|l| (!lexicon.is_known_lemma(l), std::cmp::Reverse(freq.count(l))));
            c
        }
    };
    for lemma in candidates {
        if let Some(rule) = rule_for(&lemma, &lower, token.feature) {
            token.lemma = lemma;
            token.suffix_rule = rule;
            return ensure_self_inverting(token);
        }
    }
    fallback(token)
}

/// Falls back to an exact casing mask when the class-level casing does not
/// rebuild the surface (e.g. Unicode case mappings that change length).
fn ensure_self_inverting(mut t: ParsedToken) -> ParsedToken {
    if reattach(&t.lemma, t.suffix_rule, &t.casing) != t.surface {
        t.casing = Casing::Mixed(t.surface.chars().map(char::is_uppercase).collect());
        if reattach(&t.lemma, t.suffix_rule, &t.casing) != t.surface {
            t.lemma = t.surface.to_lowercase();
            t.suffix_rule = SuffixRule::None;
        }
        if reattach(&t.lemma, t.suffix_rule, &t.casing) != t.surface {
            t.lemma = t.surface.clone();
            t.casing = Casing::Lower;
        }
    }
    t
}

/// True iff the token is a substitutable content word under `stoplist`:
/// a non-clitic word token that is not on the list. Numeral tokens are
/// never content.
pub fn is_content(token: &ParsedToken, stoplist: &StopList) -> bool {
    token.kind == TokenKind::Word && !token.clitic && !stoplist.contains(&token.surface)
}

/// Unique content lemmas in order of first appearance.
pub fn content_lemmas(tokens: &[ParsedToken], stoplist: &StopList) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    tokens
        .iter()
        .filter(|t| is_content(t, stoplist))
        .filter(|t| seen.insert(t.lemma.clone()))
        .map(|t| t.lemma.clone())
        .collect()
}

/// Number of non-whitespace tokens.
pub fn token_count(tokens: &[ParsedToken]) -> usize {
    tokens.iter().filter(|t| t.kind != TokenKind::Whitespace).count()
}

/// Tokenize → tag → split, with the standard stop list marking `is_stop`.
#[derive(Debug, Clone)]
pub struct Parser {
    lexicon: Arc<TagLexicon>,
    stoplist: Arc<StopList>,
}

impl Default for Parser {
    fn default() -> Self {
        Parser::new(TagLexicon::embedded())
    }
}

impl Parser {
    pub fn new(lexicon: Arc<TagLexicon>) -> Self {
        Parser { lexicon, stoplist: Arc::new(StopList::new(StopListVariant::Standard)) }
    }

    pub fn lexicon(&self) -> &TagLexicon {
        &self.lexicon
    }

    pub fn parse(&self, text: &str) -> Vec<ParsedToken> {
        let tokens = tokenize(text);
        tag_pos(&tokens, &self.lexicon)
            .into_iter()
            .map(|t| {
                let mut t = split_morph(t, &self.lexicon);
                t.is_stop = t.kind == TokenKind::Word && (t.clitic || self.stoplist.contains(&t.surface));
                t
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Vec<ParsedToken> {
        Parser::default().parse(text)
    }

    fn word<'a>(toks: &'a [ParsedToken], surface: &str) -> &'a ParsedToken {
        toks.iter().find(|t| t.surface == surface).unwrap()
    }

    #[test]
    fn methods_sentence_tags_and_lemmas() {
        let toks = parse("A boy walked into a store to buy some gum");
        let expect = [
            ("boy", Pos::Noun, "boy", SuffixRule::None),
            ("walked", Pos::Verb, "walk", SuffixRule::PastEd),
            ("store", Pos::Noun, "store", SuffixRule::None),
            ("buy", Pos::Verb, "buy", SuffixRule::None),
            ("gum", Pos::Noun, "gum", SuffixRule::None),
        ];
        for (s, pos, lemma, rule) in expect {
            let t = word(&toks, s);
            assert_eq!((t.pos, t.lemma.as_str(), t.suffix_rule), (pos, lemma, rule), "{s}");
        }
        assert_eq!(word(&toks, "walked").feature, Feature::Past);
        let stop: Vec<_> = toks.iter().filter(|t| t.is_stop).map(|t| t.surface.as_str()).collect();
        assert_eq!(stop, ["A", "into", "a", "to", "some"]);
        let content = content_lemmas(&toks, &StopList::new(StopListVariant::Standard));
        assert_eq!(content, ["boy", "walk", "store", "buy", "gum"]);
    }

    #[test]
    fn determiner_tag() {
        assert_eq!(word(&parse("the"), "the").pos, Pos::Determiner);
    }

    #[test]
    fn doubling_split() {
        let toks = parse("She was nipping at the grass");
        let t = word(&toks, "nipping");
        assert_eq!((t.lemma.as_str(), t.suffix_rule), ("nip", SuffixRule::ProgIng));
    }

    #[test]
    fn orthographic_splits() {
        let toks = parse("They stored it. He tried. We barred them. The buses left.");
        for (s, lemma, rule) in [
            ("stored", "store", SuffixRule::PastD),
            ("tried", "try", SuffixRule::PastEd),
            ("barred", "bar", SuffixRule::PastEd),
            ("buses", "bus", SuffixRule::PluralS),
        ] {
            let t = word(&toks, s);
            assert_eq!((t.lemma.as_str(), t.suffix_rule), (lemma, rule), "{s}");
        }
    }

    #[test]
    fn irregulars_are_not_split() {
        let toks = parse("He went with the children");
        for s in ["went", "children"] {
            let t = word(&toks, s);
            assert_eq!((t.lemma.as_str(), t.suffix_rule), (s, SuffixRule::None));
        }
    }

    #[test]
    fn unknown_nonce_forms_still_invert() {
        let toks = parse("A throse clirsed into a ghoathe");
        let t = word(&toks, "clirsed");
        assert_eq!(t.suffix_rule, SuffixRule::PastEd);
        assert_eq!(reattach(&t.lemma, t.suffix_rule, &t.casing), "clirsed");
    }

    #[test]
    fn reattach_examples() {
        assert_eq!(reattach("clirse", SuffixRule::PastEd, &Casing::Lower), "clirsed");
        assert_eq!(reattach("walk", SuffixRule::PastEd, &Casing::AllCaps), "WALKED");
        assert_eq!(reattach("grolk", SuffixRule::PluralS, &Casing::InitialCap), "Grolks");
        assert_eq!(reattach_blank(SuffixRule::PastEd), "BLANKed");
        assert_eq!(reattach_blank(SuffixRule::PluralS), "BLANKs");
        assert_eq!(reattach_blank(SuffixRule::ProgIng), "BLANKing");
        assert_eq!(reattach_blank(SuffixRule::None), "BLANK");
    }

    #[test]
    fn content_decisions() {
        let std = StopList::new(StopListVariant::Standard);
        let nmp = StopList::new(StopListVariant::NoModalsNoPreps);
        let toks = parse("He went into town in 1957.");
        let into = word(&toks, "into");
        assert!(!is_content(into, &std));
        assert!(is_content(into, &nmp));
        let year = word(&toks, "1957");
        for v in [StopListVariant::Standard, StopListVariant::NoModals, StopListVariant::NoModalsNoPreps] {
            assert!(!is_content(year, &StopList::new(v)));
        }
    }

    #[test]
    fn clitics_are_function_tokens() {
        let toks = parse("any particular state’s law");
        let s = word(&toks, "’s");
        assert!(s.clitic && s.is_stop);
        assert!(!is_content(s, &StopList::new(StopListVariant::NoModalsNoPreps)));
    }

    #[test]
    fn every_word_token_self_inverts() {
        let text = "The QUEEN’s McDonald-like gardeners were PAINTING roses; İstanbul’s straße, 3.5 miles.";
        for t in parse(text) {
            if t.is_word() {
                assert_eq!(reattach(&t.lemma, t.suffix_rule, &t.casing), t.surface, "{t:?}");
            }
        }
    }
}
