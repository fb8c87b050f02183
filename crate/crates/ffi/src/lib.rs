//! C ABI for kglab.
//!
//! Objects cross the boundary as opaque handles (`KglGraph`, `KglCorpus`,
//! `KglEmbedding`) created by `kgl_*` constructors and released with the
//! matching `*_free`. Fallible calls return a [`KglStatus`]; on failure a
//! description is available from [`kgl_last_error_message`] on the same
//! thread. Strings handed out by the library are released with
//! [`kgl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kglab::embed::{train, EmbedError, KeyedVectors, TrainConfig};
use kglab::eval::{harmonic_mean, spearman};
use kglab::graph::{parse_graph_str, parse_tbox_str, serialize_graph_string, Graph, GraphError, TBox};
use kglab::materialize::{materialize, Rule};
use kglab::walk::{corpus_to_token_sequences, generate_walks, write_corpus, WalkConfig, WalkError};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KglStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    EmptyInput = 5,
    UnknownToken = 6,
    Io = 7,
    Internal = 8,
}

pub struct KglGraph {
    graph: Graph,
    tbox: TBox,
}

pub struct KglCorpus {
    sequences: Vec<Vec<String>>,
    text: String,
}

pub struct KglEmbedding {
    vectors: KeyedVectors,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct KglMaterializeSummary {
    pub iterations: usize,
    pub added_subproperty: usize,
    pub added_inverse: usize,
    pub added_transitive: usize,
    pub added_symmetric: usize,
    pub added_total: usize,
    pub total_before: usize,
    pub total_after: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct KglWalkConfig {
    pub walks_per_node: usize,
    pub depth: usize,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct KglTrainConfig {
    pub dim: usize,
    pub window: usize,
    pub epochs: usize,
    pub negatives: usize,
    pub initial_lr: f64,
    pub min_lr: f64,
    pub seed: u64,
    /// Non-zero for single-threaded, reproducible training.
    pub deterministic: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(KglStatus, String);

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        let status = match e {
            GraphError::Io(_) => KglStatus::Io,
            _ => KglStatus::ParseError,
        };
        Failure(status, e.to_string())
    }
}

impl From<WalkError> for Failure {
    fn from(e: WalkError) -> Self {
        let status = match e {
            WalkError::EmptyGraph => KglStatus::EmptyInput,
            WalkError::Io(_) => KglStatus::Io,
            _ => KglStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<EmbedError> for Failure {
    fn from(e: EmbedError) -> Self {
        let status = match e {
            EmbedError::EmptyCorpus => KglStatus::EmptyInput,
            EmbedError::UnknownToken(_) => KglStatus::UnknownToken,
            EmbedError::InvalidConfig(_) => KglStatus::InvalidArgument,
            EmbedError::MalformedFile { .. } => KglStatus::ParseError,
            EmbedError::Io(_) => KglStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

/// Runs `f`, converting errors and panics into a status plus last-error text.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> KglStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KglStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            KglStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(KglStatus::NullArgument, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(KglStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(KglStatus::Internal, "string contains NUL".into()))
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn kgl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kgl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn kgl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses N-Triples text into a new graph with an empty T-box.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kgl_graph_parse(text: *const c_char, out: *mut *mut KglGraph) -> KglStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let graph = parse_graph_str(str_arg(text, "text")?)?;
        *out = Box::into_raw(Box::new(KglGraph {
            graph,
            tbox: TBox::default(),
        }));
        Ok(())
    })
}

/// Adds the axioms in `text` to the graph's T-box.
///
/// # Safety
/// `graph` must be a live handle; `text` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn kgl_graph_load_tbox(graph: *mut KglGraph, text: *const c_char) -> KglStatus {
    guard(|| {
        let g = out_arg(graph, "graph")?;
        let parsed = parse_tbox_str(str_arg(text, "text")?, &mut g.graph)?;
        g.tbox.symmetric.extend(parsed.symmetric);
        g.tbox.transitive.extend(parsed.transitive);
        g.tbox.inverse.extend(parsed.inverse);
        g.tbox.subproperty.extend(parsed.subproperty);
        Ok(())
    })
}

/// Materializes the graph in place under its T-box. `summary` may be NULL.
///
/// # Safety
/// `graph` must be a live handle; `summary` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn kgl_graph_materialize(graph: *mut KglGraph, summary: *mut KglMaterializeSummary) -> KglStatus {
    guard(|| {
        let g = out_arg(graph, "graph")?;
        let (done, report) = materialize(std::mem::take(&mut g.graph), &g.tbox);
        g.graph = done;
        if let Some(s) = summary.as_mut() {
            *s = KglMaterializeSummary {
                iterations: report.iterations,
                added_subproperty: report.added_by_rule.get(Rule::Subproperty),
                added_inverse: report.added_by_rule.get(Rule::Inverse),
                added_transitive: report.added_by_rule.get(Rule::Transitive),
                added_symmetric: report.added_by_rule.get(Rule::Symmetric),
                added_total: report.added_total,
                total_before: report.total_before,
                total_after: report.total_after,
            };
        }
        Ok(())
    })
}

/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kgl_graph_entity_count(graph: *const KglGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.entity_count())
}

/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kgl_graph_predicate_count(graph: *const KglGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.predicate_count())
}

/// Resource triples only; literal-valued triples are not counted.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kgl_graph_triple_count(graph: *const KglGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.triple_count())
}

/// Serializes the graph as N-Triples into a new string (free with
/// `kgl_string_free`).
///
/// # Safety
/// `graph` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kgl_graph_serialize(graph: *const KglGraph, out: *mut *mut c_char) -> KglStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let g = ref_arg(graph, "graph")?;
        *out = into_c_string(serialize_graph_string(&g.graph))?;
        Ok(())
    })
}

/// # Safety
/// `graph` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kgl_graph_free(graph: *mut KglGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Generates random walks over the graph.
///
/// # Safety
/// `graph` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kgl_walks_generate(
    graph: *const KglGraph,
    config: KglWalkConfig,
    out: *mut *mut KglCorpus,
) -> KglStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let g = ref_arg(graph, "graph")?;
        let corpus = generate_walks(
            &g.graph,
            WalkConfig {
                walks_per_node: config.walks_per_node,
                depth: config.depth,
                seed: config.seed,
            },
        )?;
        let mut buf = Vec::new();
        write_corpus(&corpus, &g.graph, &mut buf).map_err(|e| Failure(KglStatus::Io, e.to_string()))?;
        let text = String::from_utf8(buf).map_err(|_| Failure(KglStatus::Internal, "corpus is not UTF-8".into()))?;
        *out = Box::into_raw(Box::new(KglCorpus {
            sequences: corpus_to_token_sequences(&corpus, &g.graph),
            text,
        }));
        Ok(())
    })
}

/// # Safety
/// `corpus` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kgl_corpus_len(corpus: *const KglCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.sequences.len())
}

/// Corpus file text (header line plus one walk per line) as a new string.
///
/// # Safety
/// `corpus` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kgl_corpus_text(corpus: *const KglCorpus, out: *mut *mut c_char) -> KglStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        *out = into_c_string(ref_arg(corpus, "corpus")?.text.clone())?;
        Ok(())
    })
}

/// # Safety
/// `corpus` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kgl_corpus_free(corpus: *mut KglCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Default training parameters.
#[no_mangle]
pub extern "C" fn kgl_train_config_default() -> KglTrainConfig {
    let d = TrainConfig::default();
    KglTrainConfig {
        dim: d.dim,
        window: d.window,
        epochs: d.epochs,
        negatives: d.negatives,
        initial_lr: d.initial_lr,
        min_lr: d.min_lr,
        seed: d.seed,
        deterministic: d.deterministic as i32,
    }
}

/// Trains skip-gram embeddings on a corpus.
///
/// # Safety
/// `corpus` must be a live handle; `config` readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kgl_train(
    corpus: *const KglCorpus,
    config: *const KglTrainConfig,
    out: *mut *mut KglEmbedding,
) -> KglStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let c = ref_arg(corpus, "corpus")?;
        let cfg = ref_arg(config, "config")?;
        let cfg = TrainConfig {
            dim: cfg.dim,
            window: cfg.window,
            epochs: cfg.epochs,
            negatives: cfg.negatives,
            initial_lr: cfg.initial_lr,
            min_lr: cfg.min_lr,
            seed: cfg.seed,
            deterministic: cfg.deterministic != 0,
            ..TrainConfig::default()
        };
        let model = train(&c.sequences, &cfg)?;
        *out = Box::into_raw(Box::new(KglEmbedding { vectors: model.vectors }));
        Ok(())
    })
}

/// Parses embedding-file text (`<count> <dim>` header, then one token and
/// its values per line).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kgl_embedding_load(text: *const c_char, out: *mut *mut KglEmbedding) -> KglStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let vectors = KeyedVectors::read(str_arg(text, "text")?.as_bytes())?;
        *out = Box::into_raw(Box::new(KglEmbedding { vectors }));
        Ok(())
    })
}

/// Embedding-file text as a new string.
///
/// # Safety
/// `embedding` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kgl_embedding_text(embedding: *const KglEmbedding, out: *mut *mut c_char) -> KglStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let mut buf = Vec::new();
        ref_arg(embedding, "embedding")?
            .vectors
            .write(&mut buf)
            .map_err(|e| Failure(KglStatus::Io, e.to_string()))?;
        *out = into_c_string(String::from_utf8_lossy(&buf).into_owned())?;
        Ok(())
    })
}

/// # Safety
/// `embedding` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kgl_embedding_dim(embedding: *const KglEmbedding) -> usize {
    embedding.as_ref().map_or(0, |e| e.vectors.dim())
}

/// # Safety
/// `embedding` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kgl_embedding_len(embedding: *const KglEmbedding) -> usize {
    embedding.as_ref().map_or(0, |e| e.vectors.len())
}

/// Cosine similarity of two tokens.
///
/// # Safety
/// `embedding` must be a live handle; `a`, `b` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kgl_embedding_cosine(
    embedding: *const KglEmbedding,
    a: *const c_char,
    b: *const c_char,
    out: *mut f64,
) -> KglStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let e = ref_arg(embedding, "embedding")?;
        *out = e.vectors.cosine(str_arg(a, "a")?, str_arg(b, "b")?)?;
        Ok(())
    })
}

/// Copies a token's vector into `buf`, which must hold at least `dim` values.
///
/// # Safety
/// `embedding` must be a live handle; `token` NUL-terminated; `buf` must
/// point to `buf_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn kgl_embedding_vector(
    embedding: *const KglEmbedding,
    token: *const c_char,
    buf: *mut f64,
    buf_len: usize,
) -> KglStatus {
    guard(|| {
        let e = ref_arg(embedding, "embedding")?;
        let token = str_arg(token, "token")?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let v = e
            .vectors
            .get(token)
            .ok_or_else(|| Failure(KglStatus::UnknownToken, format!("unknown token {token:?}")))?;
        if buf_len < v.len() {
            return Err(Failure(
                KglStatus::InvalidArgument,
                format!("buffer holds {buf_len} values, need {}", v.len()),
            ));
        }
        std::slice::from_raw_parts_mut(buf, v.len()).copy_from_slice(v);
        Ok(())
    })
}

/// # Safety
/// `embedding` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kgl_embedding_free(embedding: *mut KglEmbedding) {
    if !embedding.is_null() {
        drop(Box::from_raw(embedding));
    }
}

/// Spearman rank correlation (average ranks for ties) of two arrays of
/// length `n`.
///
/// # Safety
/// `x` and `y` must point to `n` readable doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kgl_spearman(x: *const f64, y: *const f64, n: usize, out: *mut f64) -> KglStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        if x.is_null() || y.is_null() {
            return Err(null("input array"));
        }
        let xs = std::slice::from_raw_parts(x, n);
        let ys = std::slice::from_raw_parts(y, n);
        *out = spearman(xs, ys).map_err(|e| Failure(KglStatus::InvalidArgument, e.to_string()))?;
        Ok(())
    })
}

/// `2 r ρ / (r + ρ)`, or 0 when the inputs have mixed signs or `r + ρ <= 0`.
#[no_mangle]
pub extern "C" fn kgl_harmonic_mean(pearson: f64, spearman: f64) -> f64 {
    harmonic_mean(pearson, spearman)
}
