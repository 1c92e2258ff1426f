use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser as ClapParser, Subcommand};
use jabberwock_core::corpus::{load_corpus, sample_baseline};
use jabberwock_core::degrade::{build_map, degrade};
use jabberwock_core::nonce::{build_pool, generator, passage_seed, Dictionary, PoolConstraint};
use jabberwock_core::scoring::{score_glosses, score_passage, FreqTable, PassageContext, WordVectors};
use jabberwock_core::{
    ConditionConfig, DegradedPassage, Embedder, Execution, Parser, TranslationRecord, Translator,
};
use jabberwock_gateway::{DiskCache, GatewayEmbedder, LlmTranslator, ModelConfig};
use jabberwock_runner::config::{load_pool, mock_embedder, mock_translator};
use jabberwock_runner::tables::{write_csv, ScoreRow, SCORE_HEADER};
use jabberwock_runner::{emit_report, run_all, run_incremental_all, Providers, RunConfig, SweepOptions};
use log::{info, warn};
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(ClapParser)]
#[command(name = "jabberwock", version, about = "Nonce-word degradation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corpus file checks.
    #[command(subcommand)]
    Corpus(CorpusCmd),
    /// Nonce pool construction.
    #[command(subcommand)]
    Lexicon(LexiconCmd),
    /// Degrade passages under one condition; writes JSON lines.
    Degrade(DegradeArgs),
    /// Translate degraded passages; writes JSON lines.
    Translate(TranslateArgs),
    /// Score translations against originals and same-genre baselines.
    Score(ScoreArgs),
    /// Run an experiment from a config file.
    #[command(subcommand)]
    Run(RunCmd),
    /// Rebuild the summary and figures of a run directory.
    Report {
        #[arg(long)]
        run: PathBuf,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    Validate { path: PathBuf },
}

#[derive(Subcommand)]
enum LexiconCmd {
    /// Filter candidates (a word list or generated strings) into a pool.
    Build {
        #[arg(long, conflicts_with = "generate")]
        candidates: Option<PathBuf>,
        /// Generate this many candidate strings instead of reading a list.
        #[arg(long)]
        generate: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// One word per line; the shipped dictionary when absent.
        #[arg(long)]
        dictionary: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        max_neighbors: usize,
        #[arg(long, default_value_t = 3)]
        min_len: usize,
        #[arg(long, default_value_t = 9)]
        max_len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DegradeArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Passage ids; all passages when omitted.
    #[arg(long = "passage")]
    passages: Vec<String>,
    #[arg(long)]
    condition: ConditionConfig,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Nonce candidate list; the shipped pool when absent.
    #[arg(long)]
    pool: Option<PathBuf>,
    #[arg(long)]
    dictionary: Option<PathBuf>,
    /// Also write each passage's substitution map as JSON lines.
    #[arg(long)]
    map_out: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RemoteArgs {
    /// Remote model name (requires --base-url).
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    base_url: Option<String>,
    #[arg(long, default_value = "OPENAI_API_KEY")]
    api_key_env: String,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl RemoteArgs {
    fn model_config(&self, model: &str) -> Result<ModelConfig> {
        let url = self.base_url.as_deref().context("--base-url is required for remote providers")?;
        let mut cfg = ModelConfig::new(url, model);
        cfg.api_key_env_var_name = self.api_key_env.clone();
        Ok(cfg)
    }

    fn cache(&self, sub: &str) -> Result<Option<DiskCache>> {
        Ok(self.cache_dir.as_ref().map(|d| DiskCache::open(d.join(sub))).transpose()?)
    }
}

#[derive(Args)]
struct TranslateArgs {
    /// Degraded passages as written by `degrade`.
    #[arg(long)]
    input: PathBuf,
    /// oracle | lossy:<rate>
    #[arg(long, conflicts_with = "model")]
    mock: Option<String>,
    #[command(flatten)]
    remote: RemoteArgs,
    /// Seed for the lossy mock.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip the gloss turn.
    #[arg(long)]
    no_gloss: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Translation records as written by `translate`.
    #[arg(long)]
    translations: PathBuf,
    /// `hashed-bow`, or a remote embedding model with --base-url.
    #[arg(long, default_value = "hashed-bow")]
    embedder: String,
    #[arg(long)]
    base_url: Option<String>,
    #[arg(long, default_value = "OPENAI_API_KEY")]
    api_key_env: String,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    baseline_seed: u64,
    /// Word vectors for gloss scoring (needs --degraded for the maps).
    #[arg(long, requires = "degraded")]
    vectors: Option<PathBuf>,
    #[arg(long)]
    degraded: Option<PathBuf>,
    #[arg(long)]
    gloss_out: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RunCmd {
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        sequential: bool,
        /// Stop after this many passages (resume later with resume = true).
        #[arg(long)]
        stop_after: Option<usize>,
    },
    Incremental {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        sequential: bool,
    },
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_jsonl<T: Serialize>(w: &mut dyn Write, items: &[T]) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut *w, item)?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).with_context(|| format!("{}:{}", path.display(), i + 1))?);
    }
    Ok(out)
}

fn corpus_validate(path: &Path) -> Result<()> {
    let mut corpus = load_corpus(path)?;
    corpus.validate()?;
    corpus.annotate_token_counts(&Parser::default());
    println!("{}: {} passage(s)", path.display(), corpus.len());
    for (genre, n) in corpus.genre_counts() {
        println!("  {:<10} {n}", genre.as_str());
    }
    let tokens: Vec<usize> = corpus.passages.iter().filter_map(|p| p.token_count).collect();
    if let (Some(min), Some(max)) = (tokens.iter().min(), tokens.iter().max()) {
        println!("  tokens     {min}..{max}");
    }
    println!("  pairs      {}", corpus.pairs().len());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn lexicon_build(
    candidates: Option<&Path>,
    generate: Option<usize>,
    seed: u64,
    dictionary: Option<&Path>,
    constraint: PoolConstraint,
    out: Option<&Path>,
) -> Result<()> {
    let words: Vec<String> = match (candidates, generate) {
        (Some(p), _) => std::fs::read_to_string(p)
            .with_context(|| format!("reading {}", p.display()))?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(String::from)
            .collect(),
        (None, Some(n)) => generator::generate(n, seed, constraint.min_len, constraint.max_len),
        (None, None) => bail!("give --candidates or --generate"),
    };
    let dict = match dictionary {
        Some(d) => Arc::new(Dictionary::from_list(d.display().to_string(), &std::fs::read_to_string(d)?)),
        None => Dictionary::embedded(),
    };
    let pool = build_pool(&words, &dict, constraint, Execution::default())?;
    eprintln!(
        "pool: {} of {} candidate(s); mean N {:.3}, median N {}, mean length {:.2}",
        pool.len(),
        words.len(),
        pool.mean_neighbors(),
        pool.median_neighbors(),
        pool.mean_length()
    );
    let mut w = output(out)?;
    writeln!(w, "# dictionary={} max_neighbors={} mean_n={:.4}", pool.dictionary_id, constraint.max_neighbors, pool.mean_neighbors())?;
    for word in &pool.words {
        writeln!(w, "{word}")?;
    }
    w.flush()?;
    Ok(())
}

fn degrade_cmd(a: &DegradeArgs) -> Result<()> {
    let corpus = load_corpus(&a.corpus)?;
    let pool = load_pool(a.pool.as_deref(), a.dictionary.as_deref())?;
    let parser = Parser::default();
    let chosen: Vec<_> = if a.passages.is_empty() {
        corpus.passages.iter().collect()
    } else {
        a.passages.iter().map(|id| corpus.get(id).with_context(|| format!("no passage {id:?}"))).collect::<Result<_>>()?
    };
    let mut degraded = Vec::new();
    let mut maps = Vec::new();
    for p in chosen {
        let parsed = parser.parse(&p.text);
        let map = build_map(&p.id, &parsed, &pool, passage_seed(a.seed, &p.id))?;
        degraded.push(degrade(p, &parsed, &a.condition, &map)?);
        maps.push(map);
    }
    if let Some(path) = &a.map_out {
        write_jsonl(output(Some(path))?.as_mut(), &maps)?;
    }
    write_jsonl(output(a.out.as_deref())?.as_mut(), &degraded)
}

fn translate_cmd(a: &TranslateArgs) -> Result<()> {
    let input: Vec<DegradedPassage> = read_jsonl(&a.input)?;
    let translator: Box<dyn Translator> = match (&a.mock, &a.remote.model) {
        (Some(m), _) => mock_translator(m, a.seed)?,
        (None, Some(model)) => {
            let t = remote_transport()?;
            let mut tr = LlmTranslator::new(a.remote.model_config(model)?, t, a.remote.cache("chat")?);
            if a.no_gloss {
                tr = tr.without_gloss();
            }
            Box::new(tr)
        }
        (None, None) => bail!("give --mock or --model"),
    };
    let results = Execution::default().map(&input, |d| translator.translate(d));
    let mut records: Vec<TranslationRecord> = Vec::new();
    for (d, r) in input.iter().zip(results) {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => warn!("{} {}: {e}", d.passage_id, d.condition),
        }
    }
    info!("translated {} of {}", records.len(), input.len());
    write_jsonl(output(a.out.as_deref())?.as_mut(), &records)
}

#[cfg(feature = "http")]
fn remote_transport() -> Result<Arc<dyn jabberwock_gateway::Transport>> {
    Ok(Arc::new(jabberwock_gateway::HttpTransport::new()))
}

#[cfg(not(feature = "http"))]
fn remote_transport() -> Result<Arc<dyn jabberwock_gateway::Transport>> {
    bail!("this build has no HTTP support (enable the `http` feature)")
}

fn score_cmd(a: &ScoreArgs) -> Result<()> {
    let corpus = load_corpus(&a.corpus)?;
    let records: Vec<TranslationRecord> = read_jsonl(&a.translations)?;
    let embedder: Box<dyn Embedder> = match &a.base_url {
        Some(url) => {
            let mut cfg = ModelConfig::new(url, &a.embedder);
            cfg.api_key_env_var_name = a.api_key_env.clone();
            let cache = a.cache_dir.as_ref().map(|d| DiskCache::open(d.join("embed"))).transpose()?;
            Box::new(GatewayEmbedder::new(cfg, remote_transport()?, cache))
        }
        None => mock_embedder(&a.embedder)?,
    };
    let mut rows = Vec::new();
    for rec in &records {
        let p = corpus.get(&rec.passage_id).with_context(|| format!("no passage {:?}", rec.passage_id))?;
        let seed = passage_seed(a.baseline_seed, &p.id);
        let base = sample_baseline(&corpus, p.genre, &p.id, seed)?;
        let mut s = score_passage(p, rec, base, embedder.as_ref())?;
        s.baseline_seed = Some(seed);
        rows.push(ScoreRow {
            passage_id: p.id.clone(),
            genre: p.genre.as_str().into(),
            provenance: serde_json::to_value(p.provenance)?.as_str().unwrap_or_default().into(),
            condition: rec.condition.as_str().into(),
            model_name: s.model_name,
            embedder_id: s.embedder_id,
            sim_translation: s.sim_translation,
            sim_baseline: s.sim_baseline,
            specificity: s.specificity,
            baseline_passage_id: s.baseline_passage_id,
            baseline_seed: s.baseline_seed,
            substitutions: 0,
            gloss_warning: rec.gloss_warning,
        });
    }
    rows.sort_by(|a, b| (&a.passage_id, &a.condition).cmp(&(&b.passage_id, &b.condition)));
    match &a.out {
        Some(p) => write_csv(p, &SCORE_HEADER, &rows)?,
        None => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(io::stdout());
            w.write_record(SCORE_HEADER)?;
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }

    if let (Some(vpath), Some(dpath)) = (&a.vectors, &a.degraded) {
        let vectors = WordVectors::load(vpath)?;
        let degraded: Vec<DegradedPassage> = read_jsonl(dpath)?;
        let parser = Parser::default();
        let freq = FreqTable::embedded();
        let mut glosses = Vec::new();
        for rec in &records {
            let Some(d) = degraded.iter().find(|d| d.passage_id == rec.passage_id && d.condition == rec.condition) else {
                warn!("{} {}: no degraded passage for gloss scoring", rec.passage_id, rec.condition);
                continue;
            };
            let p = corpus.get(&rec.passage_id).expect("checked above");
            let ctx = PassageContext::new(&parser.parse(&p.text));
            glosses.extend(score_glosses(&d.map, &rec.gloss, &vectors, &ctx, &freq));
        }
        write_jsonl(output(a.gloss_out.as_deref())?.as_mut(), &glosses)?;
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Corpus(CorpusCmd::Validate { path }) => corpus_validate(&path),
        Command::Lexicon(LexiconCmd::Build { candidates, generate, seed, dictionary, max_neighbors, min_len, max_len, out }) => {
            let constraint = PoolConstraint { max_neighbors, min_len, max_len };
            lexicon_build(candidates.as_deref(), generate, seed, dictionary.as_deref(), constraint, out.as_deref())
        }
        Command::Degrade(a) => degrade_cmd(&a),
        Command::Translate(a) => translate_cmd(&a),
        Command::Score(a) => score_cmd(&a),
        Command::Run(RunCmd::Sweep { config, sequential, stop_after }) => {
            let cfg = RunConfig::load(&config)?;
            let providers = Providers::from_config(&cfg)?;
            let out = run_all(&cfg, &providers, SweepOptions { execution: execution(sequential), stop_after })?;
            if out.complete {
                println!(
                    "{}: {} score row(s), {} failure(s), {} passage(s) resumed",
                    cfg.output_dir.display(),
                    out.scores.len(),
                    out.failures.len(),
                    out.passages_resumed
                );
            } else {
                println!("stopped after {} passage(s)", out.passages_run + out.passages_resumed);
            }
            Ok(())
        }
        Command::Run(RunCmd::Incremental { config, sequential }) => {
            let cfg = RunConfig::load(&config)?;
            let providers = Providers::from_config(&cfg)?;
            let pts = run_incremental_all(&cfg, &providers, execution(sequential))?;
            emit_report_if_scored(&cfg.output_dir)?;
            println!("{}: {} incremental point(s)", cfg.output_dir.display(), pts.len());
            Ok(())
        }
        Command::Report { run } => {
            let s = emit_report(&run)?;
            println!("{}: report over {} row(s)", run.display(), s.rows);
            Ok(())
        }
    }
}

/// The incremental command alone leaves no score table; report only when
/// a sweep has written one.
fn emit_report_if_scored(dir: &Path) -> Result<()> {
    if dir.join(jabberwock_runner::sweep::SCORES_CSV).exists() {
        emit_report(dir)?;
    }
    Ok(())
}
