//! Sentence-by-sentence translation. Each prefix of 1..S sentences is
//! degraded with the passage's map and translated in its own call, with no
//! earlier model output in the prompt.

use std::fs;

use anyhow::{Context, Result};
use jabberwock_core::corpus::load_corpus;
use jabberwock_core::degrade::{build_map, degrade, make_condition};
use jabberwock_core::morph::{is_content, is_sentence_ender, sentence_ranges, tokenize, ParsedToken, StopList, TokenKind};
use jabberwock_core::nonce::passage_seed;
use jabberwock_core::{ConditionName, Embedder, Execution, NoncePool, Parser, Passage, StopListVariant, Translator};
use log::{info, warn};

use crate::config::{Providers, RunConfig};
use crate::tables::{write_csv, IncrementalPoint, INCREMENTAL_HEADER};

pub const INCREMENTAL_CSV: &str = "incremental.csv";

fn similarity(embedder: &dyn Embedder, a: &str, b: &str) -> Result<f64> {
    let ea = embedder.embed(a)?;
    let eb = embedder.embed(b)?;
    Ok(ea.cosine(&eb)?)
}

fn surface(tokens: &[ParsedToken]) -> String {
    tokens.iter().map(|t| t.surface.as_str()).collect()
}

/// First sentence of free text, trimmed.
pub fn first_sentence(text: &str) -> String {
    let tokens = tokenize(text);
    match sentence_ranges(&tokens).first() {
        Some(r) => tokens[r.clone()].iter().map(|t| t.surface.as_str()).collect::<String>().trim().to_string(),
        None => text.trim().to_string(),
    }
}

pub fn run_incremental(
    passage: &Passage,
    parser: &Parser,
    pool: &NoncePool,
    seed: u64,
    translator: &dyn Translator,
    embedder: &dyn Embedder,
) -> Result<Vec<IncrementalPoint>> {
    let parsed = parser.parse(&passage.text);
    let map = build_map(&passage.id, &parsed, pool, passage_seed(seed, &passage.id))?;
    let has_ender = parsed.iter().any(|t| t.kind == TokenKind::Punctuation && is_sentence_ender(&t.surface));
    let mut ends: Vec<usize> = sentence_ranges(&parsed).iter().map(|r| r.end).collect();
    if !has_ender {
        warn!("{}: no sentence terminators; treating the passage as one sentence", passage.id);
        ends = vec![parsed.len()];
    }
    let stop = StopList::new(StopListVariant::Standard);
    let cfg = make_condition(ConditionName::Standard);
    let first_original = surface(&parsed[..ends[0]]).trim().to_string();
    let mut points = Vec::with_capacity(ends.len());
    for (k, &end) in ends.iter().enumerate() {
        let tokens = &parsed[..end];
        let prefix = Passage { text: surface(tokens), ..passage.clone() };
        let d = degrade(&prefix, tokens, &cfg, &map)?;
        let rec = translator.translate(&d).with_context(|| format!("{} prefix {}", passage.id, k + 1))?;
        points.push(IncrementalPoint {
            passage_id: passage.id.clone(),
            prefix_len_sentences: k + 1,
            prefix_content_words: tokens.iter().filter(|t| is_content(t, &stop)).count(),
            sim_prefix: similarity(embedder, &prefix.text, &rec.translation_text)?,
            sim_first_sentence: similarity(embedder, &first_original, &first_sentence(&rec.translation_text))?,
        });
    }
    Ok(points)
}

/// Runs every configured passage and writes `incremental.csv`. A passage
/// that fails is logged and left out.
pub fn run_incremental_all(cfg: &RunConfig, providers: &Providers, execution: Execution) -> Result<Vec<IncrementalPoint>> {
    let corpus = load_corpus(&cfg.corpus_path).with_context(|| format!("loading {}", cfg.corpus_path.display()))?;
    let pool = cfg.load_pool()?;
    let parser = Parser::default();
    let chosen: Vec<&Passage> = if cfg.incremental_passages.is_empty() {
        corpus.passages.iter().collect()
    } else {
        cfg.incremental_passages
            .iter()
            .map(|id| corpus.get(id).with_context(|| format!("incremental passage {id:?} is not in the corpus")))
            .collect::<Result<_>>()?
    };
    let results = execution.map(&chosen, |p| {
        run_incremental(p, &parser, &pool, cfg.seed, providers.prefix_translator.as_ref(), providers.embedder.as_ref())
    });
    let mut points = Vec::new();
    for (p, r) in chosen.iter().zip(results) {
        match r {
            Ok(mut pts) => points.append(&mut pts),
            Err(e) => warn!("{}: incremental run failed: {e:#}", p.id),
        }
    }
    points.sort_by(|a, b| (&a.passage_id, a.prefix_len_sentences).cmp(&(&b.passage_id, b.prefix_len_sentences)));
    fs::create_dir_all(&cfg.output_dir)?;
    write_csv(&cfg.output_dir.join(INCREMENTAL_CSV), &INCREMENTAL_HEADER, &points)?;
    info!("incremental: {} point(s) from {} passage(s)", points.len(), chosen.len());
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use jabberwock_core::Genre;
    use jabberwock_gateway::{HashedBowEmbedder, OracleTranslator};

    fn points(text: &str) -> Vec<IncrementalPoint> {
        let p = Passage::new("p", Genre::Fiction, text);
        run_incremental(&p, &Parser::default(), &NoncePool::shipped(), 7, &OracleTranslator, &HashedBowEmbedder).unwrap()
    }

    #[test]
    fn oracle_prefixes_score_one() {
        let pts = points("The boy walked home. He bought gum! Then the dog barked at him? The cat ran far.");
        assert_eq!(pts.iter().map(|p| p.prefix_len_sentences).collect::<Vec<_>>(), [1, 2, 3, 4]);
        assert!(pts.iter().all(|p| p.sim_prefix == 1.0 && p.sim_first_sentence == 1.0));
        assert!(pts.windows(2).all(|w| w[0].prefix_content_words < w[1].prefix_content_words));
    }

    #[test]
    fn single_sentence_and_no_terminator_give_one_point() {
        assert_eq!(points("The boy walked home.").len(), 1);
        let pts = points("the boy walked home and the dog barked");
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].sim_prefix, 1.0);
    }

    #[test]
    fn first_sentence_of_free_text() {
        assert_eq!(first_sentence("  One thing. Two things."), "One thing.");
        assert_eq!(first_sentence("no end"), "no end");
        assert_eq!(first_sentence(""), "");
    }
}
