//! Command-line front end.
//!
//! Every option may also be given in a `key = value` config file passed
//! with `--config`; flags on the command line take precedence. Output goes
//! to `--out` when given (written atomically, removed on failure) and to
//! stdout otherwise.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    density_stats, reciprocity_sample, similarity_curve, write_column_csv, write_curve_csv, write_reciprocity_csv,
};
use crate::embedding::{load_text_embeddings, EmbeddingModel, WordId};
use crate::error::{Error, Result};
use crate::knn::knn;
use crate::pmi::{count_cooccurrences, ppmi, random_projection, tokenize_corpus};
use crate::rng::{horizon, krng_neighbors, rn_tree, RelativeNeighbor, RngTree};
use crate::similarity::{CosineSpace, EuclideanSpace, SimilaritySpace};

pub const DEFAULT_K: usize = 100;
pub const DEFAULT_WINDOW: usize = 2;
pub const DEFAULT_TARGET_DIM: usize = 2000;
pub const DEFAULT_MIN_COUNT: u64 = 5;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_DENSITY_K: usize = 10;

#[derive(Debug, Parser)]
#[command(
    name = "relneigh",
    version,
    about = "Relative neighborhood graphs over word embeddings"
)]
pub struct Cli {
    /// Config file of `key = value` lines; command-line flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads [default: all available]
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a PPMI model from a corpus (one document per line) and write it as text embeddings
    BuildPmi(BuildPmiArgs),
    /// Ranked k nearest neighbors of a word
    Knn(QueryArgs),
    /// Relative neighbors of a word within its k nearest neighbors
    Krng(QueryArgs),
    /// Relative neighbors of a word over the whole vocabulary
    Horizon(QueryArgs),
    /// Relative neighborhood tree of a word as DOT, JSON or text
    Tree(TreeArgs),
    /// Neighbor ranks of random word pairs in both directions (CSV)
    Reciprocity(SampleArgs),
    /// Random-pair similarities and mean k-NN similarities (two CSV files)
    Density(SampleArgs),
    /// Similarities of the k nearest neighbors of a word (CSV)
    Simcurve(QueryArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityKind {
    Cosine,
    Euclidean,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
    Csv,
}

#[derive(Debug, Args, Default)]
pub struct ModelArgs {
    /// Text embedding file
    #[arg(long)]
    pub model: Option<PathBuf>,

    /// Model file starts with a `|V| dim` line [default: false]
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub header: Option<bool>,

    /// Similarity function [default: cosine]
    #[arg(long, value_enum)]
    pub similarity: Option<SimilarityKind>,

    /// Retry unknown words in lowercase and suggest case variants [default: false]
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub fold_case: Option<bool>,
}

#[derive(Debug, Args)]
pub struct BuildPmiArgs {
    /// Corpus file, UTF-8, one document per line
    #[arg(long)]
    pub corpus: Option<PathBuf>,

    /// Output embedding file
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Write a `|V| dim` header line [default: false]
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub header: Option<bool>,

    /// Context window on each side [default: 2]
    #[arg(long)]
    pub window: Option<usize>,

    /// Drop tokens seen fewer times than this [default: 5]
    #[arg(long)]
    pub min_count: Option<u64>,

    /// Dimension after random projection [default: 2000]
    #[arg(long)]
    pub target_dim: Option<usize>,

    /// Projection seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,

    /// Also write the co-occurrence counts in sparse text format
    #[arg(long)]
    pub counts_out: Option<PathBuf>,

    /// Also write the PPMI matrix in sparse text format
    #[arg(long)]
    pub ppmi_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// Query word
    pub word: String,

    #[command(flatten)]
    pub model: ModelArgs,

    /// Number of nearest neighbors [default: 100]
    #[arg(short, long)]
    pub k: Option<usize>,

    /// Output format: text or json (csv for simcurve) [default: text, simcurve: csv]
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,

    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    /// Root word
    pub word: String,

    #[command(flatten)]
    pub model: ModelArgs,

    /// Number of nearest neighbors in the tree [default: 100]
    #[arg(short, long)]
    pub k: Option<usize>,

    /// Emit only nodes at most this many edges below the root [default: unbounded]
    #[arg(long)]
    pub depth: Option<usize>,

    /// Output format: dot, json or text [default: dot]
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,

    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Number of random word pairs [default: 1000]
    #[arg(long)]
    pub n_pairs: Option<usize>,

    /// Number of random words for k-NN means (density only) [default: 1000]
    #[arg(long)]
    pub n_words: Option<usize>,

    /// Neighbors per word for k-NN means (density only) [default: 10]
    #[arg(short, long)]
    pub k: Option<usize>,

    /// Sampling seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,

    /// Output file; for density a prefix for `<out>.pairs.csv` and `<out>.knn.csv` [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model_path: Option<PathBuf>,
    pub header: bool,
    pub similarity: SimilarityKind,
    pub fold_case: bool,
    pub k: usize,
    pub depth: Option<usize>,
    pub seed: u64,
    pub format: Option<OutputFormat>,
    pub min_count: u64,
    pub window: usize,
    pub target_dim: usize,
    pub n_pairs: usize,
    pub n_words: usize,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model_path: None,
            header: false,
            similarity: SimilarityKind::Cosine,
            fold_case: false,
            k: DEFAULT_K,
            depth: None,
            seed: DEFAULT_SEED,
            format: None,
            min_count: DEFAULT_MIN_COUNT,
            window: DEFAULT_WINDOW,
            target_dim: DEFAULT_TARGET_DIM,
            n_pairs: DEFAULT_SAMPLES,
            n_words: DEFAULT_SAMPLES,
            threads: None,
            out: None,
        }
    }
}

/// Parsed `key = value` config file.
#[derive(Debug, Default)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

const CONFIG_KEYS: &[&str] = &[
    "model",
    "header",
    "similarity",
    "fold_case",
    "k",
    "depth",
    "seed",
    "format",
    "min_count",
    "window",
    "target_dim",
    "n_pairs",
    "n_words",
    "threads",
    "out",
    "corpus",
];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            let key = key.trim().replace('-', "_");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("line {}: unknown key `{key}`", i + 1)));
            }
            values.insert(key, value.trim().to_owned());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::Config(format!("bad value `{v}` for `{key}`")))
            })
            .transpose()
    }

    fn get_enum<T: ValueEnum>(&self, key: &str) -> Result<Option<T>> {
        self.values
            .get(key)
            .map(|v| T::from_str(v, true).map_err(|_| Error::Config(format!("bad value `{v}` for `{key}`"))))
            .transpose()
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.values.get(key).map(PathBuf::from)
    }
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

impl RunConfig {
    fn resolve_model(&mut self, m: &ModelArgs, file: &ConfigFile) -> Result<()> {
        self.model_path = m.model.clone().or_else(|| file.path("model"));
        self.header = pick(m.header, file.get("header")?, false);
        self.similarity = pick(m.similarity, file.get_enum("similarity")?, SimilarityKind::Cosine);
        self.fold_case = pick(m.fold_case, file.get("fold_case")?, false);
        Ok(())
    }

    fn resolve_common(
        &mut self,
        k: Option<usize>,
        out: &Option<PathBuf>,
        file: &ConfigFile,
        k_default: usize,
    ) -> Result<()> {
        self.k = pick(k, file.get("k")?, k_default);
        self.out = out.clone().or_else(|| file.path("out"));
        self.seed = file.get("seed")?.unwrap_or(DEFAULT_SEED);
        Ok(())
    }

    /// Merges command-line flags over an optional config file.
    pub fn resolve(cli: &Cli) -> Result<(RunConfig, Option<PathBuf>)> {
        let file = match &cli.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let mut cfg = RunConfig {
            threads: cli.threads.or(file.get("threads")?),
            ..RunConfig::default()
        };
        let mut corpus = None;
        match &cli.command {
            Command::BuildPmi(a) => {
                corpus = a.corpus.clone().or_else(|| file.path("corpus"));
                cfg.out = a.out.clone().or_else(|| file.path("out"));
                cfg.header = pick(a.header, file.get("header")?, false);
                cfg.window = pick(a.window, file.get("window")?, DEFAULT_WINDOW);
                cfg.min_count = pick(a.min_count, file.get("min_count")?, DEFAULT_MIN_COUNT);
                cfg.target_dim = pick(a.target_dim, file.get("target_dim")?, DEFAULT_TARGET_DIM);
                cfg.seed = pick(a.seed, file.get("seed")?, DEFAULT_SEED);
            }
            Command::Knn(q) | Command::Krng(q) | Command::Horizon(q) | Command::Simcurve(q) => {
                cfg.resolve_model(&q.model, &file)?;
                cfg.resolve_common(q.k, &q.out, &file, DEFAULT_K)?;
                cfg.format = q.format.or(file.get_enum("format")?);
            }
            Command::Tree(t) => {
                cfg.resolve_model(&t.model, &file)?;
                cfg.resolve_common(t.k, &t.out, &file, DEFAULT_K)?;
                cfg.depth = t.depth.or(file.get("depth")?);
                cfg.format = t.format.or(file.get_enum("format")?);
            }
            Command::Reciprocity(s) | Command::Density(s) => {
                cfg.resolve_model(&s.model, &file)?;
                cfg.resolve_common(s.k, &s.out, &file, DEFAULT_DENSITY_K)?;
                cfg.seed = pick(s.seed, file.get("seed")?, DEFAULT_SEED);
                cfg.n_pairs = pick(s.n_pairs, file.get("n_pairs")?, DEFAULT_SAMPLES);
                cfg.n_words = pick(s.n_words, file.get("n_words")?, DEFAULT_SAMPLES);
            }
        }
        if cfg.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if cfg.depth == Some(0) {
            return Err(Error::InvalidParameter("depth must be at least 1".into()));
        }
        Ok((cfg, corpus))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Config(e.to_string()))?;
    run_cli(&cli, stdout, stderr)
}

pub fn run_cli(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let (cfg, corpus) = RunConfig::resolve(cli)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut out_buf = Vec::new();
    let mut err_buf = Vec::new();
    let result = pool.install(|| dispatch(&cli.command, &cfg, corpus, &mut out_buf, &mut err_buf));
    stderr.write_all(&err_buf)?;
    stdout.write_all(&out_buf)?;
    stdout.flush()?;
    result
}

fn dispatch(
    command: &Command,
    cfg: &RunConfig,
    corpus: Option<PathBuf>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    match command {
        Command::BuildPmi(a) => cmd_build_pmi(corpus, a, cfg, stdout),
        Command::Knn(q) => with_model(cfg, stderr, |m, s, err| cmd_knn(m, s, &q.word, cfg, stdout, err)),
        Command::Krng(q) => with_model(cfg, stderr, |m, s, err| {
            let id = find_word(m, &q.word, cfg.fold_case)?;
            warn_truncation(s, cfg.k, err)?;
            let nbrs = krng_neighbors(s, id, cfg.k)?;
            emit(cfg, stdout, |w| write_relatives(w, m, id, cfg.k, &nbrs, cfg.format))
        }),
        Command::Horizon(q) => with_model(cfg, stderr, |m, s, _| {
            let id = find_word(m, &q.word, cfg.fold_case)?;
            let h = horizon(s, id)?;
            let k = s.active_ids().len() - 1;
            emit(cfg, stdout, |w| write_relatives(w, m, id, k, &h.neighbors, cfg.format))
        }),
        Command::Tree(t) => with_model(cfg, stderr, |m, s, err| {
            let id = find_word(m, &t.word, cfg.fold_case)?;
            warn_truncation(s, cfg.k, err)?;
            let tree = rn_tree(s, id, cfg.k)?;
            let root_sim = s.similarity(id, id);
            emit(cfg, stdout, |w| {
                write_tree(w, m, &tree, root_sim, cfg.depth, cfg.format)
            })
        }),
        Command::Simcurve(q) => with_model(cfg, stderr, |m, s, err| {
            let id = find_word(m, &q.word, cfg.fold_case)?;
            warn_truncation(s, cfg.k, err)?;
            let curve = similarity_curve(s, id, cfg.k)?;
            emit(cfg, stdout, |w| write_curve_csv(w, &curve))
        }),
        Command::Reciprocity(_) => with_model(cfg, stderr, |m, s, _| {
            let pairs = reciprocity_sample(s, cfg.n_pairs, cfg.seed)?;
            emit(cfg, stdout, |w| {
                write_reciprocity_csv(w, &pairs, |id| m.token(id).to_owned())
            })
        }),
        Command::Density(_) => with_model(cfg, stderr, |_, s, _| {
            let d = density_stats(s, cfg.n_words, cfg.n_pairs, cfg.k, cfg.seed)?;
            match &cfg.out {
                Some(prefix) => {
                    let pairs = suffixed(prefix, ".pairs.csv");
                    let knn_path = suffixed(prefix, ".knn.csv");
                    write_atomic(&pairs, |w| write_column_csv(w, "pair_sim", &d.random_pair_sims))?;
                    if let Err(e) = write_atomic(&knn_path, |w| write_column_csv(w, "knn_mean_sim", &d.knn_mean_sims)) {
                        let _ = fs::remove_file(&pairs);
                        return Err(e);
                    }
                    let line = |name: &str, f: &crate::analysis::FiveNumber| {
                        format!(
                            "{name}\tmin {:.6}\tq1 {:.6}\tmedian {:.6}\tq3 {:.6}\tmax {:.6}\n",
                            f.min, f.q1, f.median, f.q3, f.max
                        )
                    };
                    stdout.write_all(line("pair_sim", &d.random_pair_summary).as_bytes())?;
                    stdout.write_all(line("knn_mean_sim", &d.knn_mean_summary).as_bytes())?;
                    Ok(())
                }
                None => {
                    write_column_csv(&mut *stdout, "pair_sim", &d.random_pair_sims)?;
                    write_column_csv(&mut *stdout, "knn_mean_sim", &d.knn_mean_sims)?;
                    Ok(())
                }
            }
        }),
    }
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn with_model<F>(cfg: &RunConfig, stderr: &mut dyn Write, f: F) -> Result<()>
where
    F: FnOnce(&EmbeddingModel, &dyn SimilaritySpace, &mut dyn Write) -> Result<()>,
{
    let path = cfg
        .model_path
        .as_ref()
        .ok_or_else(|| Error::Config("missing --model".into()))?;
    let model = load_text_embeddings(path, cfg.header)?;
    if cfg.similarity == SimilarityKind::Cosine {
        for &z in &model.report().zero_vectors {
            writeln!(
                stderr,
                "warning: `{}` is a zero vector and is excluded from queries",
                model.token(z)
            )?;
        }
    }
    let dups = model.duplicate_vectors();
    if !dups.is_empty() {
        writeln!(
            stderr,
            "warning: {} groups of identical vectors; duplicates block each other's relative neighbors",
            dups.len()
        )?;
    }
    match cfg.similarity {
        SimilarityKind::Cosine => f(&model, &CosineSpace::new(&model), stderr),
        SimilarityKind::Euclidean => {
            let rows: Vec<&[f64]> = (0..model.len()).map(|i| model.vector(WordId::new(i))).collect();
            let space = EuclideanSpace::new(&rows)?;
            f(&model, &space, stderr)
        }
    }
}

fn find_word(model: &EmbeddingModel, word: &str, fold_case: bool) -> Result<WordId> {
    let found = if fold_case {
        model.lookup_folded(word)
    } else {
        model.lookup(word)
    };
    found.map_err(|_| {
        let suggestion = fold_case
            .then(|| {
                let lower = word.to_lowercase();
                model.vocab().iter().find(|t| t.to_lowercase() == lower).cloned()
            })
            .flatten();
        Error::UnknownWord {
            word: word.to_owned(),
            suggestion,
        }
    })
}

fn warn_truncation(space: &dyn SimilaritySpace, k: usize, stderr: &mut dyn Write) -> Result<()> {
    let available = space.active_ids().len().saturating_sub(1);
    if k > available {
        writeln!(
            stderr,
            "warning: k={k} exceeds the {available} available neighbors; list truncated"
        )?;
    }
    Ok(())
}

/// Writes through `f` to `cfg.out` (atomically) or to stdout.
fn emit<F>(cfg: &RunConfig, stdout: &mut dyn Write, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match &cfg.out {
        Some(path) => write_atomic(path, f),
        None => {
            f(stdout)?;
            Ok(())
        }
    }
}

/// Writes into a sibling temporary file and renames it over `path`; the
/// temporary file is removed on any failure.
pub fn write_atomic<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    let result = (|| -> io::Result<()> {
        let mut w = BufWriter::new(File::create(&tmp)?);
        f(&mut w)?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
        fs::rename(&tmp, path)
    })();
    result.map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

fn cmd_build_pmi(corpus: Option<PathBuf>, args: &BuildPmiArgs, cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let corpus = corpus.ok_or_else(|| Error::Config("missing --corpus".into()))?;
    let out = cfg.out.clone().ok_or_else(|| Error::Config("missing --out".into()))?;
    let text = fs::read_to_string(&corpus).map_err(|e| Error::io(&corpus, e))?;
    let docs = tokenize_corpus(&text);
    let counts = count_cooccurrences(&docs, cfg.window, cfg.min_count)?;
    if counts.vocab.is_empty() || counts.total == 0 {
        return Err(Error::EmptyVocabulary(corpus));
    }
    if let Some(p) = &args.counts_out {
        write_atomic(p, |w| counts.write_sparse(w))?;
    }
    let matrix = ppmi(&counts)?;
    if let Some(p) = &args.ppmi_out {
        write_atomic(p, |w| matrix.write_sparse(w))?;
    }
    let model = random_projection(&matrix, cfg.target_dim, cfg.seed)?;
    write_atomic(&out, |w| model.write_text(w, cfg.header))?;
    writeln!(stdout, "vocab {} dim {}", model.len(), model.dim())?;
    Ok(())
}

/// JSON document emitted by `knn --format json`.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct KnnJson {
    pub query: String,
    pub k: usize,
    pub neighbors: Vec<RankedWordJson>,
}

/// One ranked word; used by the knn, krng and horizon JSON outputs.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RankedWordJson {
    pub rank: usize,
    pub word: String,
    pub sim: f64,
}

/// Nested tree node emitted by `tree --format json`.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TreeJson {
    pub word: String,
    pub sim: f64,
    pub children: Vec<TreeJson>,
}

fn cmd_knn(
    model: &EmbeddingModel,
    space: &dyn SimilaritySpace,
    word: &str,
    cfg: &RunConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let id = find_word(model, word, cfg.fold_case)?;
    warn_truncation(space, cfg.k, stderr)?;
    let list = knn(space, id, cfg.k)?;
    let ranked: Vec<RankedWordJson> = list
        .entries
        .iter()
        .enumerate()
        .map(|(i, n)| RankedWordJson {
            rank: i + 1,
            word: model.token(n.id).to_owned(),
            sim: n.sim,
        })
        .collect();
    emit(cfg, stdout, |w| match cfg.format.unwrap_or(OutputFormat::Text) {
        OutputFormat::Json => {
            let doc = KnnJson {
                query: model.token(id).to_owned(),
                k: cfg.k,
                neighbors: ranked,
            };
            serde_json::to_writer_pretty(&mut *w, &doc)?;
            writeln!(w)
        }
        _ => {
            for r in &ranked {
                writeln!(w, "{}\t{}\t{}", r.rank, r.word, crate::fmt_f64(r.sim))?;
            }
            Ok(())
        }
    })
}

fn write_relatives(
    w: &mut dyn Write,
    model: &EmbeddingModel,
    query: WordId,
    k: usize,
    nbrs: &[RelativeNeighbor],
    format: Option<OutputFormat>,
) -> io::Result<()> {
    match format.unwrap_or(OutputFormat::Text) {
        OutputFormat::Json => {
            let doc = KnnJson {
                query: model.token(query).to_owned(),
                k,
                neighbors: nbrs
                    .iter()
                    .map(|n| RankedWordJson {
                        rank: n.rank,
                        word: model.token(n.id).to_owned(),
                        sim: n.sim,
                    })
                    .collect(),
            };
            serde_json::to_writer_pretty(&mut *w, &doc)?;
            writeln!(w)
        }
        _ => {
            for n in nbrs {
                writeln!(w, "{} ({})", model.token(n.id), n.rank)?;
            }
            Ok(())
        }
    }
}

/// Quotes a DOT identifier.
fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn write_tree(
    w: &mut dyn Write,
    model: &EmbeddingModel,
    tree: &RngTree,
    root_sim: f64,
    depth: Option<usize>,
    format: Option<OutputFormat>,
) -> io::Result<()> {
    let limit = depth.unwrap_or(usize::MAX);
    let nodes: Vec<_> = tree.nodes.iter().filter(|n| n.depth <= limit).collect();
    match format.unwrap_or(OutputFormat::Dot) {
        OutputFormat::Json => {
            fn build(
                id: WordId,
                sim: f64,
                model: &EmbeddingModel,
                tree: &RngTree,
                limit: usize,
                level: usize,
            ) -> TreeJson {
                let children = if level < limit {
                    tree.nodes
                        .iter()
                        .filter(|n| n.parent == id)
                        .map(|n| build(n.id, n.sim, model, tree, limit, level + 1))
                        .collect()
                } else {
                    Vec::new()
                };
                TreeJson {
                    word: model.token(id).to_owned(),
                    sim,
                    children,
                }
            }
            serde_json::to_writer_pretty(&mut *w, &build(tree.root, root_sim, model, tree, limit, 0))?;
            writeln!(w)
        }
        OutputFormat::Text => {
            for n in nodes {
                writeln!(w, "{}{} ({})", "  ".repeat(n.depth - 1), model.token(n.id), n.rank)?;
            }
            Ok(())
        }
        _ => {
            writeln!(w, "digraph {} {{", dot_id(model.token(tree.root)))?;
            writeln!(w, "  {};", dot_id(model.token(tree.root)))?;
            for n in nodes {
                writeln!(
                    w,
                    "  {} -> {};",
                    dot_id(model.token(n.parent)),
                    dot_id(model.token(n.id))
                )?;
            }
            writeln!(w, "}}")
        }
    }
}
