//! Printed example texts, reproduced from pinned maps.

use std::collections::BTreeMap;

use jabberwock_core::degrade::{degrade, invert, make_condition, ConditionName};
use jabberwock_core::morph::{content_lemmas, StopList, StopListVariant};
use jabberwock_core::nonce::{assign_nonces, build_pool, Dictionary, PoolConstraint, SubstitutionMap};
use jabberwock_core::{Execution, Genre, Parser, Passage};
use serde::Deserialize;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{FIXTURES}/{name}")).unwrap()
}

#[derive(Deserialize)]
struct MethodsFixture {
    passage_id: String,
    text: String,
    pool: String,
    seed: u64,
    lemmas: Vec<String>,
    entries: BTreeMap<String, String>,
    degraded: String,
}

#[derive(Deserialize)]
struct Divergence {
    printed: String,
    produced: String,
    original: String,
}

#[derive(Deserialize)]
struct PrintedFixture {
    passage_id: String,
    original: String,
    printed: String,
    #[serde(default)]
    map: BTreeMap<String, String>,
    divergences: Vec<Divergence>,
}

fn words(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

/// Positions where the two texts differ, as (expected, actual) pairs.
fn token_diff<'a>(expected: &'a str, actual: &'a str) -> Vec<(&'a str, &'a str)> {
    let (e, a) = (words(expected), words(actual));
    assert_eq!(e.len(), a.len(), "token counts differ:\n{expected}\n{actual}");
    e.into_iter().zip(a).filter(|(x, y)| x != y).collect()
}

#[test]
fn methods_sentence_from_pinned_seed() {
    let fx: MethodsFixture = serde_json::from_str(&fixture("methods_map.json")).unwrap();
    let candidates: Vec<String> = fixture(&fx.pool).lines().map(str::to_string).collect();
    let pool = build_pool(&candidates, &Dictionary::embedded(), PoolConstraint::default(), Execution::Sequential).unwrap();
    assert_eq!(pool.words, candidates);

    let parser = Parser::default();
    let parsed = parser.parse(&fx.text);
    let lemmas = content_lemmas(&parsed, &StopList::new(StopListVariant::Standard));
    assert_eq!(lemmas, fx.lemmas);

    let map = assign_nonces(&lemmas, &pool, fx.seed).unwrap().for_passage(&fx.passage_id);
    assert_eq!(map.entries, fx.entries);

    let passage = Passage::new(&fx.passage_id, Genre::Other, &fx.text);
    let d = degrade(&passage, &parsed, &make_condition(ConditionName::Standard), &map).unwrap();
    assert_eq!(d.text, fx.degraded);
    assert_eq!(invert(&d).unwrap(), fx.text);
}

#[test]
fn legal_passage_standard_matches_printed_except_enumerated_tokens() {
    let fx: PrintedFixture = serde_json::from_str(&fixture("table1.json")).unwrap();
    let parsed = Parser::default().parse(&fx.original);
    let map = SubstitutionMap { passage_id: fx.passage_id.clone(), entries: fx.map.clone(), seed: 0 };
    let passage = Passage::new(&fx.passage_id, Genre::Other, &fx.original);
    let d = degrade(&passage, &parsed, &make_condition(ConditionName::Standard), &map).unwrap();

    let diff = token_diff(&fx.printed, &d.text);
    let listed: Vec<(&str, &str)> = fx.divergences.iter().map(|v| (v.printed.as_str(), v.produced.as_str())).collect();
    let strip = |s: &str| s.trim_end_matches(|c: char| c.is_ascii_punctuation()).to_string();
    let got: Vec<(String, String)> = diff.iter().map(|(e, a)| (strip(e), strip(a))).collect();
    let want: Vec<(String, String)> = listed.iter().map(|(e, a)| (e.to_string(), a.to_string())).collect();
    assert_eq!(got, want);

    let originals = words(&fx.original);
    for v in &fx.divergences {
        assert!(originals.iter().any(|w| strip(w) == v.original), "{} not in original", v.original);
    }
    assert_eq!(invert(&d).unwrap(), fx.original);
}

#[test]
fn legal_passage_blanks_matches_printed() {
    let fx: PrintedFixture = serde_json::from_str(&fixture("table2.json")).unwrap();
    let parsed = Parser::default().parse(&fx.original);
    let passage = Passage::new(&fx.passage_id, Genre::Other, &fx.original);
    let d = degrade(&passage, &parsed, &make_condition(ConditionName::Blanks), &SubstitutionMap::default()).unwrap();
    let diff = token_diff(&fx.printed, &d.text);
    assert_eq!(diff.len(), fx.divergences.len(), "{diff:?}");
    let total = words(&fx.printed).len();
    assert!((total - diff.len()) as f64 / total as f64 >= 0.95);
    assert_eq!(d.text, fx.printed);
}

#[test]
fn blanks_first_sentence() {
    let fx: PrintedFixture = serde_json::from_str(&fixture("table2.json")).unwrap();
    let first = fx.original.split_inclusive(". ").next().unwrap().trim_end();
    let parsed = Parser::default().parse(first);
    let d = degrade(&Passage::new("s1", Genre::Other, first), &parsed, &make_condition(ConditionName::Blanks), &SubstitutionMap::default())
        .unwrap();
    assert_eq!(d.text, "In the BLANK BLANK, BLANK BLANK has BLANK over any BLANK BLANK’s BLANK.");
}
