//! File-level commands behind the `kglab` binary, and the end-to-end
//! pipeline driven by a `key = value` config file.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analyze::{compare_corpora, AnalyzeError, CorpusComparison};
use crate::embed::{train, EmbedError, EmbeddingModel, KeyedVectors, TrainConfig};
use crate::eval::{
    run_classification, run_docsim, run_entity_ranking, run_regression, DocSimDataset, EvalError, EvalReport,
    LabeledDataset, RankingDataset, RegressionDataset,
};
use crate::graph::{parse_graph, parse_tbox, serialize_graph, Graph, GraphError, TBox};
use crate::materialize::{materialize, MaterializationReport};
use crate::walk::{corpus_to_token_sequences, generate_walks, read_token_corpus, write_corpus, WalkConfig, WalkError};

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Graph { path: PathBuf, source: GraphError },
    #[error("{path}: {source}")]
    Walk { path: PathBuf, source: WalkError },
    #[error("{path}: {source}")]
    Embed { path: PathBuf, source: EmbedError },
    #[error("{path}: {source}")]
    Eval { path: PathBuf, source: EvalError },
    #[error(transparent)]
    Analyze(#[from] AnalyzeError),
    #[error("{path}:{line}: {reason}")]
    Config { path: PathBuf, line: usize, reason: String },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl Error {
    /// 2 for usage and input validation problems, 1 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Config { .. } => 2,
            Error::Graph { source, .. } => match source {
                GraphError::Io(_) => 1,
                _ => 2,
            },
            Error::Walk { source, .. } => match source {
                WalkError::Io(_) => 1,
                _ => 2,
            },
            Error::Embed { source, .. } => match source {
                EmbedError::EmptyCorpus | EmbedError::InvalidConfig(_) | EmbedError::MalformedFile { .. } => 2,
                _ => 1,
            },
            Error::Eval { source, .. } => match source {
                EvalError::MalformedDataset { .. } | EvalError::InvalidDataset(_) => 2,
                _ => 1,
            },
            Error::Analyze(_) | Error::Io { .. } => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_owned(),
        source,
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Error> {
    File::open(path).map(BufReader::new).map_err(io_err(path))
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<(), Error> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(io_err(path))
}

pub fn sha256_file(path: &Path) -> Result<String, Error> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn load_graph(path: &Path) -> Result<Graph, Error> {
    parse_graph(open(path)?).map_err(|source| Error::Graph {
        path: path.to_owned(),
        source,
    })
}

pub fn load_tbox(path: &Path, graph: &mut Graph) -> Result<TBox, Error> {
    parse_tbox(open(path)?, graph).map_err(|source| Error::Graph {
        path: path.to_owned(),
        source,
    })
}

pub fn load_embeddings(path: &Path) -> Result<KeyedVectors, Error> {
    KeyedVectors::read(open(path)?).map_err(|source| Error::Embed {
        path: path.to_owned(),
        source,
    })
}

pub fn load_token_corpus(path: &Path) -> Result<Vec<Vec<String>>, Error> {
    read_token_corpus(open(path)?)
        .map(|(_, seqs)| seqs)
        .map_err(|source| Error::Walk {
            path: path.to_owned(),
            source,
        })
}

/// Table followed by `key=value` lines.
pub fn materialization_report_text(report: &MaterializationReport) -> String {
    format!("{report}\n{}", report.key_values())
}

/// Materializes `graph` under `tbox` (no T-box means no axioms) and writes the
/// result graph and the report.
pub fn cmd_materialize(
    graph: &Path,
    tbox: Option<&Path>,
    out: &Path,
    report_path: &Path,
) -> Result<MaterializationReport, Error> {
    let mut g = load_graph(graph)?;
    let tbox = match tbox {
        Some(p) => load_tbox(p, &mut g)?,
        None => TBox::default(),
    };
    let (g, report) = materialize(g, &tbox);
    write_file(out, |w| serialize_graph(&g, w))?;
    write_file(report_path, |w| w.write_all(materialization_report_text(&report).as_bytes()))?;
    Ok(report)
}

pub fn cmd_walk(graph: &Path, config: WalkConfig, out: &Path) -> Result<usize, Error> {
    let g = load_graph(graph)?;
    let walk_err = |source| Error::Walk {
        path: graph.to_owned(),
        source,
    };
    let corpus = generate_walks(&g, config).map_err(walk_err)?;
    write_file(out, |w| write_corpus(&corpus, &g, w))?;
    Ok(corpus.len())
}

pub fn cmd_train(corpus: &Path, config: &TrainConfig, out: &Path) -> Result<EmbeddingModel, Error> {
    let sequences = load_token_corpus(corpus)?;
    let model = train(&sequences, config).map_err(|source| Error::Embed {
        path: corpus.to_owned(),
        source,
    })?;
    write_file(out, |w| model.vectors.write(w))?;
    Ok(model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Task {
    Classification,
    Regression,
    Similarity,
    Relatedness,
    DocSim,
}

impl Task {
    pub const ALL: [Task; 5] = [
        Task::Classification,
        Task::Regression,
        Task::Relatedness,
        Task::Similarity,
        Task::DocSim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Classification => "classification",
            Task::Regression => "regression",
            Task::Similarity => "similarity",
            Task::Relatedness => "relatedness",
            Task::DocSim => "docsim",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown task {s:?}; expected one of classification, regression, similarity, relatedness, docsim")))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    pub folds: usize,
    pub seed: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { folds: 10, seed: 42 }
    }
}

pub fn evaluate(
    vectors: &KeyedVectors,
    model: &str,
    task: Task,
    dataset: &Path,
    opts: EvalOptions,
) -> Result<EvalReport, Error> {
    let name = dataset
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let eval_err = |source| Error::Eval {
        path: dataset.to_owned(),
        source,
    };
    let input = open(dataset)?;
    match task {
        Task::Classification => {
            let ds = LabeledDataset::read(input, &name).map_err(eval_err)?;
            run_classification(vectors, model, &ds, opts.folds, opts.seed)
        }
        Task::Regression => {
            let ds = RegressionDataset::read(input, &name).map_err(eval_err)?;
            run_regression(vectors, model, &ds, opts.folds, opts.seed)
        }
        Task::Similarity | Task::Relatedness => {
            let ds = RankingDataset::read(input, &name).map_err(eval_err)?;
            run_entity_ranking(vectors, model, &ds, task.name())
        }
        Task::DocSim => {
            let ds = DocSimDataset::read(input, &name).map_err(eval_err)?;
            run_docsim(vectors, model, &ds)
        }
    }
    .map_err(eval_err)
}

pub fn eval_report_text(report: &EvalReport) -> String {
    format!("{report}\n{}", report.key_values())
}

pub fn cmd_eval(
    embeddings: &Path,
    task: Task,
    dataset: &Path,
    out: &Path,
    opts: EvalOptions,
) -> Result<EvalReport, Error> {
    let vectors = load_embeddings(embeddings)?;
    let model = embeddings
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let report = evaluate(&vectors, &model, task, dataset, opts)?;
    write_file(out, |w| w.write_all(eval_report_text(&report).as_bytes()))?;
    Ok(report)
}

/// `<out>` with its extension replaced by `csv`.
pub fn csv_path_for(out: &Path) -> PathBuf {
    out.with_extension("csv")
}

fn write_comparison(cmp: &CorpusComparison, out: &Path) -> Result<(), Error> {
    write_file(out, |w| w.write_all(cmp.to_string().as_bytes()))?;
    write_file(&csv_path_for(out), |w| w.write_all(cmp.csv().as_bytes()))
}

/// Walks both graphs with the same configuration and compares their
/// predicate distributions. Writes `out` and a sibling `.csv`.
pub fn cmd_compare(
    original: &Path,
    enriched: &Path,
    config: WalkConfig,
    top_k: usize,
    out: &Path,
) -> Result<CorpusComparison, Error> {
    let mut sequences = Vec::with_capacity(2);
    for path in [original, enriched] {
        let g = load_graph(path)?;
        let corpus = generate_walks(&g, config).map_err(|source| Error::Walk {
            path: path.to_owned(),
            source,
        })?;
        sequences.push(corpus_to_token_sequences(&corpus, &g));
    }
    let cmp = compare_corpora(&sequences[0], &sequences[1], top_k)?;
    write_comparison(&cmp, out)?;
    Ok(cmp)
}

/// Stable 64-bit tag hash used to derive stage seeds.
pub fn stage_tag(tag: &str) -> u64 {
    let digest = Sha256::digest(tag.as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

pub fn stage_seed(global: u64, tag: &str) -> u64 {
    global ^ stage_tag(tag)
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub config_path: PathBuf,
    pub graph: PathBuf,
    pub tbox: Option<PathBuf>,
    pub walk: WalkConfig,
    pub train: TrainConfig,
    pub eval: EvalOptions,
    pub datasets: BTreeMap<Task, PathBuf>,
    pub top_k: usize,
    pub output_dir: PathBuf,
    pub global_seed: u64,
}

/// Cuts a `#` or `;` comment that follows whitespace.
fn strip_inline_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    (1..bytes.len())
        .find(|&i| matches!(bytes[i], b'#' | b';') && bytes[i - 1].is_ascii_whitespace())
        .map_or(line, |i| &line[..i])
}

type Sections = BTreeMap<String, BTreeMap<String, (usize, String)>>;

fn parse_sections(path: &Path, text: &str) -> Result<Sections, Error> {
    let mut sections: Sections = BTreeMap::new();
    let mut current = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_inline_comment(raw).trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        let bad = |reason: &str| Error::Config {
            path: path.to_owned(),
            line: i + 1,
            reason: reason.to_owned(),
        };
        if let Some(name) = line.strip_prefix('[') {
            current = name.strip_suffix(']').ok_or_else(|| bad("unterminated section header"))?.trim().to_owned();
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
        let entry = sections.entry(current.clone()).or_default();
        if entry.insert(k.trim().to_owned(), (i + 1, v.trim().to_owned())).is_some() {
            return Err(bad("duplicate key"));
        }
    }
    Ok(sections)
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Self::parse(path, &text)
    }

    /// Parses a config; relative paths resolve against the config's
    /// directory. Referenced input files must exist.
    pub fn parse(path: &Path, text: &str) -> Result<Self, Error> {
        let mut sections = parse_sections(path, text)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let cfg_err = |line: usize, reason: String| Error::Config {
            path: path.to_owned(),
            line,
            reason,
        };
        let mut take = |section: &str, key: &str| sections.get_mut(section).and_then(|s| s.remove(key));

        fn num<T: FromStr>(v: Option<(usize, String)>, e: &dyn Fn(usize, String) -> Error) -> Result<Option<T>, Error> {
            v.map(|(line, s)| s.parse::<T>().map_err(|_| e(line, format!("cannot parse {s:?}"))))
                .transpose()
        }

        let global_seed = num::<u64>(take("", "seed"), &cfg_err)?.unwrap_or(42);
        let resolve = |p: String| base.join(p);

        let graph = take("input", "graph")
            .map(|(_, v)| resolve(v))
            .ok_or_else(|| cfg_err(0, "missing [input] graph".into()))?;
        let tbox = take("input", "tbox").map(|(_, v)| resolve(v));

        let walk = WalkConfig {
            walks_per_node: num(take("walk", "walks"), &cfg_err)?.unwrap_or(500),
            depth: num(take("walk", "depth"), &cfg_err)?.unwrap_or(4),
            seed: num(take("walk", "seed"), &cfg_err)?.unwrap_or_else(|| stage_seed(global_seed, "walk")),
        };
        let defaults = TrainConfig::default();
        let train = TrainConfig {
            dim: num(take("train", "dim"), &cfg_err)?.unwrap_or(defaults.dim),
            window: num(take("train", "window"), &cfg_err)?.unwrap_or(defaults.window),
            epochs: num(take("train", "epochs"), &cfg_err)?.unwrap_or(defaults.epochs),
            negatives: num(take("train", "negatives"), &cfg_err)?.unwrap_or(defaults.negatives),
            initial_lr: num(take("train", "lr"), &cfg_err)?.unwrap_or(defaults.initial_lr),
            min_lr: num(take("train", "min_lr"), &cfg_err)?.unwrap_or(defaults.min_lr),
            unigram_exponent: num(take("train", "unigram_exponent"), &cfg_err)?.unwrap_or(defaults.unigram_exponent),
            seed: num(take("train", "seed"), &cfg_err)?.unwrap_or_else(|| stage_seed(global_seed, "train")),
            deterministic: num(take("train", "deterministic"), &cfg_err)?.unwrap_or(false),
        };
        let eval = EvalOptions {
            folds: num(take("eval", "folds"), &cfg_err)?.unwrap_or(10),
            seed: num(take("eval", "seed"), &cfg_err)?.unwrap_or_else(|| stage_seed(global_seed, "eval")),
        };
        let mut datasets = BTreeMap::new();
        for task in Task::ALL {
            if let Some((_, v)) = take("eval", task.name()) {
                datasets.insert(task, resolve(v));
            }
        }
        let top_k = num(take("compare", "top_k"), &cfg_err)?.unwrap_or(10);
        let output_dir = take("output", "dir")
            .map(|(_, v)| resolve(v))
            .ok_or_else(|| cfg_err(0, "missing [output] dir".into()))?;

        for (section, keys) in &sections {
            if let Some((key, (line, _))) = keys.iter().next() {
                let name = if section.is_empty() { key.clone() } else { format!("[{section}] {key}") };
                return Err(cfg_err(*line, format!("unknown key {name}")));
            }
        }

        let cfg = PipelineConfig {
            config_path: path.to_owned(),
            graph,
            tbox,
            walk,
            train,
            eval,
            datasets,
            top_k,
            output_dir,
            global_seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), Error> {
        let inputs = std::iter::once(&self.graph)
            .chain(self.tbox.iter())
            .chain(self.datasets.values());
        for p in inputs {
            if !p.is_file() {
                return Err(Error::Usage(format!("input file {} does not exist", p.display())));
            }
        }
        self.walk.validate().map_err(|source| Error::Walk {
            path: self.config_path.clone(),
            source,
        })?;
        self.train.validate().map_err(|source| Error::Embed {
            path: self.config_path.clone(),
            source,
        })?;
        if self.top_k == 0 {
            return Err(Error::Usage("top_k must be >= 1".into()));
        }
        Ok(())
    }
}

/// Inputs, seeds and artifact hashes of one pipeline run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub inputs: Vec<(String, String, String)>,
    pub seeds: Vec<(String, u64)>,
    /// `(path relative to the output directory, sha256)`.
    pub artifacts: Vec<(String, String)>,
}

impl fmt::Display for Manifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (role, path, hash) in &self.inputs {
            writeln!(f, "input.{role}={path} sha256={hash}")?;
        }
        for (stage, seed) in &self.seeds {
            writeln!(f, "seed.{stage}={seed}")?;
        }
        for (path, hash) in &self.artifacts {
            writeln!(f, "artifact={path} sha256={hash}")?;
        }
        Ok(())
    }
}

pub const MANIFEST_FILE: &str = "manifest.txt";

struct ArtifactLog<'a> {
    dir: &'a Path,
    entries: Vec<(String, String)>,
}

impl ArtifactLog<'_> {
    fn record(&mut self, name: &str) -> Result<(), Error> {
        let hash = sha256_file(&self.dir.join(name))?;
        self.entries.push((name.to_owned(), hash));
        Ok(())
    }
}

/// Runs materialize → walk → train → eval → compare and writes a manifest.
/// Artifacts written before a failing stage are left in place.
pub fn cmd_pipeline(config_path: &Path) -> Result<Manifest, Error> {
    let cfg = PipelineConfig::load(config_path)?;
    run_pipeline(&cfg)
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<Manifest, Error> {
    let dir = cfg.output_dir.as_path();
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut log = ArtifactLog {
        dir,
        entries: Vec::new(),
    };

    let original = load_graph(&cfg.graph)?;
    let enriched_path = match &cfg.tbox {
        Some(tbox) => {
            let report = cmd_materialize(
                &cfg.graph,
                Some(tbox),
                &dir.join("materialized.nt"),
                &dir.join("materialize_report.txt"),
            )?;
            log::info!("materialization added {} triples", report.added_total);
            log.record("materialized.nt")?;
            log.record("materialize_report.txt")?;
            Some(dir.join("materialized.nt"))
        }
        None => None,
    };
    let enriched = match &enriched_path {
        Some(p) => load_graph(p)?,
        None => original.clone(),
    };

    let mut corpora = Vec::with_capacity(2);
    for (label, graph, source) in [
        ("original", &original, cfg.graph.as_path()),
        ("enriched", &enriched, enriched_path.as_deref().unwrap_or(&cfg.graph)),
    ] {
        let corpus = generate_walks(graph, cfg.walk).map_err(|source_err| Error::Walk {
            path: source.to_owned(),
            source: source_err,
        })?;
        let name = format!("walks_{label}.txt");
        write_file(&dir.join(&name), |w| write_corpus(&corpus, graph, w))?;
        log.record(&name)?;
        corpora.push(corpus_to_token_sequences(&corpus, graph));
    }

    let mut models = Vec::with_capacity(2);
    for (label, sequences) in ["original", "enriched"].into_iter().zip(&corpora) {
        let name = format!("embeddings_{label}.txt");
        let model = train(sequences, &cfg.train).map_err(|source| Error::Embed {
            path: dir.join(format!("walks_{label}.txt")),
            source,
        })?;
        write_file(&dir.join(&name), |w| model.vectors.write(w))?;
        log.record(&name)?;
        models.push((label, model));
    }

    for (&task, dataset) in &cfg.datasets {
        for (label, model) in &models {
            let report = evaluate(&model.vectors, label, task, dataset, cfg.eval)?;
            let name = format!("eval_{task}_{label}.txt");
            write_file(&dir.join(&name), |w| w.write_all(eval_report_text(&report).as_bytes()))?;
            log.record(&name)?;
        }
    }

    let cmp = compare_corpora(&corpora[0], &corpora[1], cfg.top_k)?;
    write_comparison(&cmp, &dir.join("compare.txt"))?;
    log.record("compare.txt")?;
    log.record("compare.csv")?;

    let mut inputs = vec![(
        "config".to_owned(),
        cfg.config_path.display().to_string(),
        sha256_file(&cfg.config_path)?,
    )];
    inputs.push(("graph".into(), cfg.graph.display().to_string(), sha256_file(&cfg.graph)?));
    if let Some(t) = &cfg.tbox {
        inputs.push(("tbox".into(), t.display().to_string(), sha256_file(t)?));
    }
    for (task, p) in &cfg.datasets {
        inputs.push((format!("dataset.{task}"), p.display().to_string(), sha256_file(p)?));
    }
    let manifest = Manifest {
        inputs,
        seeds: vec![
            ("global".into(), cfg.global_seed),
            ("walk".into(), cfg.walk.seed),
            ("train".into(), cfg.train.seed),
            ("eval".into(), cfg.eval.seed),
        ],
        artifacts: log.entries,
    };
    write_file(&dir.join(MANIFEST_FILE), |w| w.write_all(manifest.to_string().as_bytes()))?;
    Ok(manifest)
}

/// Extracts `key=value` lines (the machine-readable part of any report).
pub fn parse_key_values(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .filter(|(k, _)| !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.'))
        .map(|(k, v)| (k.to_owned(), v.to_owned()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_names_round_trip() {
        for t in Task::ALL {
            assert_eq!(t.name().parse::<Task>().unwrap(), t);
        }
        assert!(matches!("bogus".parse::<Task>(), Err(Error::Usage(_))));
    }

    #[test]
    fn stage_seeds_differ_by_tag() {
        assert_ne!(stage_seed(1, "walk"), stage_seed(1, "train"));
        assert_eq!(stage_seed(1, "walk"), stage_seed(1, "walk"));
    }

    #[test]
    fn config_sections_and_errors() {
        let p = Path::new("/nonexistent/pipeline.conf");
        let s = parse_sections(p, "seed = 3\n[walk]\ndepth = 8\n# c\n").unwrap();
        assert_eq!(s[""]["seed"].1, "3");
        assert_eq!(s["walk"]["depth"], (3, "8".to_owned()));
        assert!(matches!(parse_sections(p, "[walk\n"), Err(Error::Config { line: 1, .. })));
        assert!(matches!(parse_sections(p, "a = 1\na = 2\n"), Err(Error::Config { line: 2, .. })));
    }

    #[test]
    fn inline_comments() {
        let p = Path::new("/nonexistent/pipeline.conf");
        let s = parse_sections(p, "seed = 3   # note\n[input] ; x\ngraph = a#b.nt\n").unwrap();
        assert_eq!(s[""]["seed"].1, "3");
        assert_eq!(s["input"]["graph"].1, "a#b.nt");
    }

    #[test]
    fn unknown_config_key_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let graph = dir.path().join("g.nt");
        fs::write(&graph, "<a> <p> <b> .\n").unwrap();
        let conf = dir.path().join("p.conf");
        let text = "[input]\ngraph = g.nt\n[output]\ndir = out\n[walk]\nwalkz = 3\n";
        let err = PipelineConfig::parse(&conf, text).unwrap_err();
        assert!(matches!(err, Error::Config { line: 6, .. }), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn key_value_extraction() {
        let kv = parse_key_values("table row\ncorrelation=0.5\nknn_accuracy=n/a\n  spaced = no\n");
        assert_eq!(kv["correlation"], "0.5");
        assert_eq!(kv["knn_accuracy"], "n/a");
        assert!(!kv.contains_key("  spaced "));
    }
}
