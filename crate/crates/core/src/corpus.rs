//! Passage corpora stored as JSON lines.
//!
//! The first line is a head record `{"schema_version": N}`; every following
//! non-blank line is one passage object with fields
//! `{id, genre, provenance, pair_id, text}` and an optional `token_count`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::morph::{self, Parser};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Genre {
    Spoken,
    Screenplay,
    Fiction,
    Other,
}

impl Genre {
    pub const ALL: [Genre; 4] = [Genre::Spoken, Genre::Screenplay, Genre::Fiction, Genre::Other];

    pub fn as_str(self) -> &'static str {
        match self {
            Genre::Spoken => "spoken",
            Genre::Screenplay => "screenplay",
            Genre::Fiction => "fiction",
            Genre::Other => "other",
        }
    }
}

impl fmt::Display for Genre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Genre {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Genre::ALL.into_iter().find(|g| g.as_str() == s).ok_or_else(|| format!("unknown genre {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    InPretraining,
    Novel,
    #[default]
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Passage {
    pub id: String,
    pub genre: Genre,
    #[serde(default)]
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_id: Option<String>,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub token_count: Option<usize>,
}

impl Passage {
    pub fn new(id: impl Into<String>, genre: Genre, text: impl Into<String>) -> Self {
        Passage {
            id: id.into(),
            genre,
            provenance: Provenance::Unknown,
            pair_id: None,
            text: text.into(),
            token_count: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    pub passages: Vec<Passage>,
    pub source_path: PathBuf,
    pub schema_version: u32,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("duplicate id {id:?} on lines {first} and {second}")]
    DuplicateId { id: String, first: usize, second: usize },
    #[error("pair_id {pair_id:?} is carried by {count} passage(s) ({ids}); expected exactly 2")]
    BadPair { pair_id: String, count: usize, ids: String },
    #[error("passage {id:?} has empty text")]
    EmptyText { id: String },
    #[error("genre {genre} has {available} passage(s) besides {exclude_id:?}; need at least 1")]
    InsufficientBaseline { genre: Genre, exclude_id: String, available: usize },
    #[error("no passage with id {0:?}")]
    UnknownId(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Head {
    schema_version: u32,
}

impl Corpus {
    pub fn new(passages: Vec<Passage>) -> Result<Self, CorpusError> {
        let corpus = Corpus { passages, source_path: PathBuf::new(), schema_version: SCHEMA_VERSION };
        corpus.validate()?;
        Ok(corpus)
    }

    pub fn len(&self) -> usize {
        self.passages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.passages.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Passage> {
        self.passages.iter().find(|p| p.id == id)
    }

    pub fn by_genre(&self, genre: Genre) -> impl Iterator<Item = &Passage> {
        self.passages.iter().filter(move |p| p.genre == genre)
    }

    pub fn genre_counts(&self) -> BTreeMap<Genre, usize> {
        let mut counts = BTreeMap::new();
        for p in &self.passages {
            *counts.entry(p.genre).or_insert(0) += 1;
        }
        counts
    }

    /// Pairs as `(pair_id, first id, second id)` in corpus order.
    pub fn pairs(&self) -> Vec<(String, String, String)> {
        let mut seen: Vec<(String, Vec<String>)> = Vec::new();
        for p in &self.passages {
            if let Some(pid) = &p.pair_id {
                match seen.iter_mut().find(|(k, _)| k == pid) {
                    Some((_, ids)) => ids.push(p.id.clone()),
                    None => seen.push((pid.clone(), vec![p.id.clone()])),
                }
            }
        }
        seen.into_iter()
            .filter(|(_, ids)| ids.len() == 2)
            .map(|(k, ids)| (k, ids[0].clone(), ids[1].clone()))
            .collect()
    }

    /// Checks every passage invariant. Line numbers in errors assume the
    /// on-disk layout (head record on line 1).
    pub fn validate(&self) -> Result<(), CorpusError> {
        let mut ids: HashMap<&str, usize> = HashMap::new();
        for (i, p) in self.passages.iter().enumerate() {
            if let Some(first) = ids.insert(&p.id, i + 2) {
                return Err(CorpusError::DuplicateId { id: p.id.clone(), first, second: i + 2 });
            }
            if p.text.is_empty() {
                return Err(CorpusError::EmptyText { id: p.id.clone() });
            }
        }
        let mut groups: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for p in &self.passages {
            if let Some(pid) = &p.pair_id {
                groups.entry(pid).or_default().push(&p.id);
            }
        }
        for (pid, members) in groups {
            if members.len() != 2 {
                return Err(CorpusError::BadPair {
                    pair_id: pid.to_string(),
                    count: members.len(),
                    ids: members.join(", "),
                });
            }
        }
        Ok(())
    }

    /// Fills `token_count` with the parser's non-whitespace token count.
    pub fn annotate_token_counts(&mut self, parser: &Parser) {
        for p in &mut self.passages {
            p.token_count = Some(morph::token_count(&parser.parse(&p.text)));
        }
    }
}

pub fn parse_corpus(text: &str, source_path: &Path) -> Result<Corpus, CorpusError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (head_idx, head_line) = lines
        .next()
        .ok_or(CorpusError::Malformed { line: 1, message: "missing schema_version head record".into() })?;
    let head: Head = serde_json::from_str(head_line).map_err(|e| CorpusError::Malformed {
        line: head_idx + 1,
        message: format!("head record must be {{\"schema_version\": N}}: {e}"),
    })?;
    if head.schema_version != SCHEMA_VERSION {
        return Err(CorpusError::Malformed {
            line: head_idx + 1,
            message: format!("unsupported schema_version {}", head.schema_version),
        });
    }
    let mut passages = Vec::new();
    let mut lines_of: HashMap<String, usize> = HashMap::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let p: Passage = serde_json::from_str(line)
            .map_err(|e| CorpusError::Malformed { line: line_no, message: e.to_string() })?;
        if p.text.is_empty() {
            return Err(CorpusError::Malformed { line: line_no, message: "text is empty".into() });
        }
        if let Some(first) = lines_of.insert(p.id.clone(), line_no) {
            return Err(CorpusError::DuplicateId { id: p.id, first, second: line_no });
        }
        passages.push(p);
    }
    let corpus = Corpus { passages, source_path: source_path.to_path_buf(), schema_version: head.schema_version };
    corpus.validate()?;
    Ok(corpus)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    parse_corpus(&text, path)
}

pub fn write_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let io = |source| CorpusError::Io { path: path.to_path_buf(), source };
    let file = fs::File::create(path).map_err(io)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{{\"schema_version\":{}}}", corpus.schema_version.max(1)).map_err(io)?;
    for p in &corpus.passages {
        let line = serde_json::to_string(p).expect("passage serializes");
        writeln!(w, "{line}").map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Draws a same-genre passage other than `exclude_id`, uniformly and
/// deterministically from `seed`.
pub fn sample_baseline<'c>(
    corpus: &'c Corpus,
    genre: Genre,
    exclude_id: &str,
    seed: u64,
) -> Result<&'c Passage, CorpusError> {
    let eligible: Vec<&Passage> = corpus.by_genre(genre).filter(|p| p.id != exclude_id).collect();
    let in_genre = corpus.by_genre(genre).count();
    if in_genre < 2 || eligible.is_empty() {
        return Err(CorpusError::InsufficientBaseline {
            genre,
            exclude_id: exclude_id.to_string(),
            available: eligible.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(eligible.choose(&mut rng).expect("non-empty"))
}
