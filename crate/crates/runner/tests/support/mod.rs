#![allow(dead_code)]

use std::path::{Path, PathBuf};

use jabberwock_core::ConditionName;
use jabberwock_runner::{ProviderSpec, RunConfig};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn corpus_50() -> PathBuf {
    fixture("corpus_50.jsonl")
}

/// Mock run over the 50-passage fixture.
pub fn mock_config(out: &Path, model: &str, conditions: &[ConditionName]) -> RunConfig {
    RunConfig {
        corpus_path: corpus_50(),
        conditions: conditions.to_vec(),
        model: ProviderSpec::mock(model),
        embedder: ProviderSpec::mock("hashed-bow"),
        seed: 20240,
        baseline_seed: 77,
        incremental: false,
        output_dir: out.to_path_buf(),
        resume: false,
        cache_dir: None,
        pool_path: None,
        dictionary_path: None,
        vectors_path: None,
        incremental_passages: vec![],
    }
}

pub fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
