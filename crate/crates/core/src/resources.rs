//! Lexical resources compiled into the crate.
//!
//! The files under `data/` are regenerated by `scripts/build_resources.py`;
//! see `data/README.md` for their sources and licences.

/// Reference dictionary used for orthographic neighbourhood counts.
pub const DICTIONARY_EN: &str = include_str!("../data/dictionary_en.txt");
/// Identifier recorded alongside every neighbourhood count.
pub const DICTIONARY_EN_ID: &str = "wordfreq-web2-en-50k-v1";

/// Tag lexicon: `form \t lemma \t penn-tag \t prior`.
pub const LEXICON_EN: &str = include_str!("../data/lexicon_en.tsv");

/// Word counts per billion tokens with a `corpus_size` header line.
pub const FREQ_EN: &str = include_str!("../data/freq_en.tsv");

/// Nonce candidates: a handful of attested nonwords followed by the
/// output of [`crate::nonce::generator`] with seed [`NONCE_CANDIDATES_SEED`].
pub const NONCE_CANDIDATES: &str = include_str!("../data/nonce_candidates.txt");
pub const NONCE_CANDIDATES_SEED: u64 = 20_251_016;

/// Stop-word list with variant markers, see [`crate::morph::StopList`].
pub const STOPWORDS_EN: &str = include_str!("../data/stopwords_en.txt");
pub const STOPWORDS_EN_VERSION: &str = "nltk-english-179+clitic-stems-v1";
