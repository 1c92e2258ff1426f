//! Lossless tokenizer.
//!
//! Every input character lands in exactly one token, so concatenating the
//! surfaces in order reproduces the input. Clitics (`'s`, `n't`, `'ll`, ...)
//! become their own word tokens; hyphens and other punctuation are separate
//! punctuation tokens.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Word,
    Punctuation,
    Numeral,
    Whitespace,
}

/// Half-open range of char offsets into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    pub span: Span,
    /// Set for split-off clitics such as `'s` and `n't`.
    pub clitic: bool,
}

const CLITICS: [&str; 6] = ["s", "re", "ve", "ll", "d", "m"];
const SENTENCE_ENDERS: [char; 4] = ['.', '!', '?', '…'];

pub(crate) fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '’'
}

pub fn is_sentence_ender(surface: &str) -> bool {
    !surface.is_empty() && surface.chars().all(|c| SENTENCE_ENDERS.contains(&c))
}

pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            while i < chars.len() && chars[i].is_whitespace() {
                i += 1;
            }
            push(&mut out, &chars, start, i, TokenKind::Whitespace, false);
        } else if c.is_ascii_digit() {
            i = scan_numeral(&chars, i);
            push(&mut out, &chars, start, i, TokenKind::Numeral, false);
        } else if c.is_alphabetic() {
            i += 1;
            while i < chars.len() {
                if chars[i].is_alphabetic() {
                    i += 1;
                } else if is_apostrophe(chars[i])
                    && i + 1 < chars.len()
                    && chars[i + 1].is_alphabetic()
                {
                    i += 2;
                } else {
                    break;
                }
            }
            split_clitic(&mut out, &chars, start, i);
        } else {
            i += 1;
            if SENTENCE_ENDERS.contains(&c) {
                while i < chars.len() && SENTENCE_ENDERS.contains(&chars[i]) {
                    i += 1;
                }
            } else {
                while i < chars.len() && chars[i] == c {
                    i += 1;
                }
            }
            push(&mut out, &chars, start, i, TokenKind::Punctuation, false);
        }
    }
    out
}

fn push(out: &mut Vec<Token>, chars: &[char], start: usize, end: usize, kind: TokenKind, clitic: bool) {
    out.push(Token {
        surface: chars[start..end].iter().collect(),
        kind,
        span: Span { start, end },
        clitic,
    });
}

/// Digits with internal separators (`1,000`, `3.5`, `9:30`) and an optional
/// letter tail (`1990s`, `21st`).
fn scan_numeral(chars: &[char], mut i: usize) -> usize {
    while i < chars.len() {
        if chars[i].is_ascii_digit() {
            i += 1;
        } else if matches!(chars[i], '.' | ',' | ':' | '/')
            && i + 1 < chars.len()
            && chars[i + 1].is_ascii_digit()
        {
            i += 2;
        } else {
            break;
        }
    }
    while i < chars.len() && chars[i].is_alphabetic() {
        i += 1;
    }
    i
}

fn split_clitic(out: &mut Vec<Token>, chars: &[char], start: usize, end: usize) {
    let word = &chars[start..end];
    let n = word.len();
    // n't
    if n > 3
        && is_apostrophe(word[n - 2])
        && word[n - 3].eq_ignore_ascii_case(&'n')
        && word[n - 1].eq_ignore_ascii_case(&'t')
    {
        push(out, chars, start, end - 3, TokenKind::Word, false);
        push(out, chars, end - 3, end, TokenKind::Word, true);
        return;
    }
    if let Some(apos) = word.iter().rposition(|&c| is_apostrophe(c)) {
        let tail: String = word[apos + 1..].iter().collect::<String>().to_lowercase();
        if apos > 0 && CLITICS.contains(&tail.as_str()) {
            push(out, chars, start, start + apos, TokenKind::Word, false);
            push(out, chars, start + apos, end, TokenKind::Word, true);
            return;
        }
    }
    push(out, chars, start, end, TokenKind::Word, false);
}

/// Token-index ranges of sentences. A sentence ends after a run of
/// `.`, `!`, `?` or `…` plus any closing quotes, brackets or further enders
/// that follow it (`pity!”?` is one ending);
/// whitespace between sentences opens the next range. Common title
/// abbreviations (`Mr.`, `Dr.`) do not end a sentence.
pub fn sentence_ranges<T: AsToken>(tokens: &[T]) -> Vec<std::ops::Range<usize>> {
    let mut ranges = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        if t.kind() == TokenKind::Punctuation && is_sentence_ender(t.surface()) && !after_abbreviation(tokens, i) {
            let mut end = i + 1;
            while end < tokens.len()
                && tokens[end].kind() == TokenKind::Punctuation
                && (tokens[end].surface().chars().all(is_closer) || is_sentence_ender(tokens[end].surface()))
            {
                end += 1;
            }
            ranges.push(start..end);
            start = end;
            i = end;
        } else {
            i += 1;
        }
    }
    if tokens[start..].iter().any(|t| t.kind() != TokenKind::Whitespace) {
        ranges.push(start..tokens.len());
    } else if let Some(last) = ranges.last_mut() {
        last.end = tokens.len();
    }
    ranges
}

fn is_closer(c: char) -> bool {
    matches!(c, '’' | '”' | '"' | '\'' | ')' | ']' | '»')
}

const ABBREVIATIONS: [&str; 8] = ["mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr"];

fn after_abbreviation<T: AsToken>(tokens: &[T], i: usize) -> bool {
    tokens[i].surface() == "."
        && i > 0
        && tokens[i - 1].kind() == TokenKind::Word
        && ABBREVIATIONS.contains(&tokens[i - 1].surface().to_lowercase().as_str())
}

/// Minimal view shared by [`Token`] and [`super::ParsedToken`].
pub trait AsToken {
    fn kind(&self) -> TokenKind;
    fn surface(&self) -> &str;
}

impl AsToken for Token {
    fn kind(&self) -> TokenKind {
        self.kind
    }
    fn surface(&self) -> &str {
        &self.surface
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|t| t.surface).collect()
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn simple_sentence_counts() {
        let toks = tokenize("A boy walked into a store to buy some gum");
        let words = toks.iter().filter(|t| t.kind == TokenKind::Word).count();
        let ws = toks.iter().filter(|t| t.kind == TokenKind::Whitespace).count();
        assert_eq!((words, ws), (10, 9));
    }

    #[test]
    fn possessive_clitic_is_split() {
        assert_eq!(surfaces("state’s law"), ["state", "’s", " ", "law"]);
        let toks = tokenize("state’s");
        assert!(toks[1].clitic);
    }

    #[test]
    fn negation_clitic() {
        assert_eq!(surfaces("didn't"), ["did", "n't"]);
        assert_eq!(surfaces("can’t"), ["ca", "n’t"]);
        assert_eq!(surfaces("they’ll"), ["they", "’ll"]);
    }

    #[test]
    fn internal_apostrophe_without_clitic_stays_whole() {
        assert_eq!(surfaces("o'clock"), ["o'clock"]);
        assert_eq!(surfaces("‘Drink me,’"), ["‘", "Drink", " ", "me", ",", "’"]);
    }

    #[test]
    fn hyphenated_names_split() {
        assert_eq!(surfaces("Mo-wan"), ["Mo", "-", "wan"]);
    }

    #[test]
    fn numerals() {
        let toks = tokenize("In 1957, 3.5 of 1,000 in the 1990s.");
        let nums: Vec<_> = toks
            .iter()
            .filter(|t| t.kind == TokenKind::Numeral)
            .map(|t| t.surface.as_str())
            .collect();
        assert_eq!(nums, ["1957", "3.5", "1,000", "1990s"]);
        assert_eq!(toks.last().unwrap().surface, ".");
    }

    #[test]
    fn ender_runs_group() {
        assert_eq!(surfaces("What?! Wait..."), ["What", "?!", " ", "Wait", "..."]);
    }

    #[test]
    fn spans_are_char_offsets() {
        let toks = tokenize("é’s x");
        assert_eq!(toks[0].span, Span { start: 0, end: 1 });
        assert_eq!(toks[1].span, Span { start: 1, end: 3 });
        assert_eq!(toks[3].span, Span { start: 4, end: 5 });
    }

    #[test]
    fn sentences() {
        let toks = tokenize("Mr. Smith left. ‘Why?’ she asked! Then nothing");
        let ranges = sentence_ranges(&toks);
        let texts: Vec<String> = ranges
            .iter()
            .map(|r| toks[r.clone()].iter().map(|t| t.surface.as_str()).collect())
            .collect();
        assert_eq!(texts, ["Mr. Smith left.", " ‘Why?’", " she asked!", " Then nothing"]);
    }

    #[test]
    fn trailing_whitespace_joins_last_sentence() {
        let toks = tokenize("One. Two.  ");
        let ranges = sentence_ranges(&toks);
        assert_eq!(ranges.len(), 2);
        assert_eq!(ranges[1].end, toks.len());
    }
}
