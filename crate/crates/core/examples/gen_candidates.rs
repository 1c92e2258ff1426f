//! Regenerates `data/nonce_candidates.txt`.
//!
//! cargo run -p jabberwock-core --example gen_candidates > crates/core/data/nonce_candidates.txt

use jabberwock_core::nonce::generator;
use jabberwock_core::resources::NONCE_CANDIDATES_SEED;

const TOTAL: usize = 5000;

const SEEDED: &[&str] = &[
    "throse", "clirse", "ghoathe", "glarn", "scrill", "grolk", "croile", "fliff", "staught", "splunk", "sprarb",
    "phlaint", "phlol", "bredge", "strith", "lyss", "whoap", "glork", "glauge", "stroothe", "jyme", "pruib",
    "phalp", "thwirr", "scrorch", "psug", "splisk", "gninch", "strirl", "troor", "whess", "slinn", "nynch",
    "knelve", "gwive",
];

fn main() {
    println!("# nonce candidates: hand-picked examples, then generator output (seed {NONCE_CANDIDATES_SEED})");
    let mut words: Vec<String> = SEEDED.iter().map(|s| s.to_string()).collect();
    for w in generator::generate(TOTAL * 2, NONCE_CANDIDATES_SEED, 3, 9) {
        if words.len() == TOTAL {
            break;
        }
        if !words.contains(&w) {
            words.push(w);
        }
    }
    for w in words {
        println!("{w}");
    }
}
