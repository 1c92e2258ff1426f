//! Core pipeline for degraded-text meaning-recovery experiments.
//!
//! Passages are parsed into lemma + suffix tokens ([`morph`]), their content
//! lemmas are swapped for nonce words drawn from a constrained pool
//! ([`nonce`]), one of six degradation conditions is applied ([`degrade`]),
//! and translations of the degraded text are scored against the original
//! ([`scoring`]) and summarised with the statistics in [`analysis`].
//!
//! The heavy per-passage and per-seed loops go through [`exec`], which runs
//! on rayon when the `parallel` feature is enabled and sequentially
//! otherwise.

pub mod analysis;
pub mod corpus;
pub mod degrade;
pub mod exec;
pub mod morph;
pub mod nonce;
pub mod resources;
pub mod scoring;
pub mod translation;

pub use corpus::{Corpus, Genre, Passage, Provenance};
pub use degrade::{ConditionConfig, ConditionName, DegradedPassage};
pub use exec::Execution;
pub use morph::{ParsedToken, Parser, Pos, StopList, StopListVariant, SuffixRule};
pub use nonce::{NoncePool, SubstitutionMap};
pub use scoring::{Embedder, Embedding, ScoreRecord};
pub use translation::{TranslationRecord, Translator};
