//! Phonotactic nonce candidates built from onset + nucleus + coda
//! grapheme inventories.

use std::collections::HashSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ONSETS: &[&str] = &[
    "b", "bl", "br", "c", "ch", "cl", "cr", "d", "dr", "f", "fl", "fr", "g", "gl", "gn", "gr", "gh", "gw", "h", "j",
    "k", "kn", "l", "m", "n", "p", "ph", "phl", "pl", "pr", "ps", "qu", "r", "s", "sc", "scr", "sh", "shr", "sk",
    "sl", "sm", "sn", "sp", "sph", "spl", "spr", "st", "str", "sw", "t", "th", "thr", "thw", "tr", "tw", "v", "w",
    "wh", "z",
];
const FINAL_ONSETS: &[&str] = &["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"];
const NUCLEI: &[&str] = &[
    "a", "e", "i", "o", "u", "y", "ai", "au", "ea", "ee", "ie", "oa", "oi", "oo", "ou", "ui", "oe", "ay", "oy",
];
const CODAS: &[&str] = &[
    "", "b", "ck", "d", "ff", "g", "k", "l", "ll", "lk", "lm", "lp", "m", "mp", "n", "nch", "nd", "ng", "nk",
    "nt", "p", "rb", "rd", "rf", "rg", "rk", "rl", "rm", "rn", "rp", "rsh", "rst", "rt", "sk", "sp", "ss", "st",
    "t", "th", "tch", "x", "zz",
];
/// Final silent-e codas (`croile`, `throse`).
const E_CODAS: &[&str] = &["be", "de", "ge", "ke", "le", "me", "ne", "pe", "rse", "se", "the", "ve", "ze", "rve", "dge"];

fn syllable(rng: &mut impl Rng, last: bool, first: bool) -> String {
    let mut s = String::new();
    if first || rng.random_bool(0.85) {
        let onset = if first { ONSETS } else { FINAL_ONSETS };
        s.push_str(onset.choose(rng).unwrap());
    }
    s.push_str(NUCLEI.choose(rng).unwrap());
    if last && rng.random_bool(0.3) {
        s.push_str(E_CODAS.choose(rng).unwrap());
    } else {
        s.push_str(CODAS.choose(rng).unwrap());
    }
    s
}

/// One candidate of one or two syllables.
pub fn candidate(rng: &mut impl Rng) -> String {
    let two = rng.random_bool(0.12);
    if two {
        let mut w = syllable(rng, false, true);
        w.push_str(&syllable(rng, true, false));
        w
    } else {
        syllable(rng, true, true)
    }
}

/// `n` distinct candidates between `min_len` and `max_len` letters.
/// Output is fully determined by `seed`.
pub fn generate(n: usize, seed: u64, min_len: usize, max_len: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while out.len() < n && attempts < n.saturating_mul(1000).max(1000) {
        attempts += 1;
        let w = candidate(&mut rng);
        let len = w.chars().count();
        if (min_len..=max_len).contains(&len) && !has_triple(&w) && seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

fn has_triple(w: &str) -> bool {
    let c: Vec<char> = w.chars().collect();
    c.windows(3).any(|x| x[0] == x[1] && x[1] == x[2])
}
