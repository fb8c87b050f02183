//! Skip-gram with negative sampling over walk token sequences.
//!
//! Training keeps both matrices in `AtomicU64` cells holding `f64` bits so
//! that the parallel mode can run lock-free, race-tolerant updates without
//! `unsafe`. In deterministic mode a single thread walks the corpus in order
//! and the result is bit-reproducible.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::sync::atomic::{AtomicU64, Ordering};

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("corpus contains no tokens")]
    EmptyCorpus,
    #[error("unknown token {0:?}")]
    UnknownToken(String),
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error("line {line}: malformed embedding file: {reason}")]
    MalformedFile { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub dim: usize,
    pub window: usize,
    pub epochs: usize,
    pub negatives: usize,
    pub initial_lr: f64,
    pub min_lr: f64,
    pub unigram_exponent: f64,
    pub seed: u64,
    pub deterministic: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 200,
            window: 5,
            epochs: 10,
            negatives: 25,
            initial_lr: 0.025,
            min_lr: 1e-4,
            unigram_exponent: 0.75,
            seed: 1,
            deterministic: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), EmbedError> {
        let bad = |m: &str| Err(EmbedError::InvalidConfig(m.to_owned()));
        if self.dim == 0 {
            return bad("dimension must be >= 1");
        }
        if self.window == 0 {
            return bad("window must be >= 1");
        }
        if !(self.min_lr > 0.0 && self.min_lr <= self.initial_lr && self.initial_lr.is_finite()) {
            return bad("learning rates must satisfy 0 < min <= initial");
        }
        if !self.unigram_exponent.is_finite() {
            return bad("unigram exponent must be finite");
        }
        Ok(())
    }
}

/// Token ↔ index map with occurrence counts, sorted by descending count
/// then token.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocab {
    tokens: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, usize>,
}

impl Vocab {
    pub fn from_tokens(tokens: Vec<String>, counts: Vec<u64>) -> Self {
        let index = tokens.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Vocab {
            tokens,
            counts,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn token(&self, i: usize) -> &str {
        &self.tokens[i]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn count(&self, i: usize) -> u64 {
        self.counts[i]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
}

/// Every distinct token with its total count; no minimum-count cutoff.
pub fn build_vocab<S: AsRef<str>>(sequences: &[Vec<S>]) -> Result<Vocab, EmbedError> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for seq in sequences {
        for t in seq {
            *counts.entry(t.as_ref()).or_default() += 1;
        }
    }
    if counts.is_empty() {
        return Err(EmbedError::EmptyCorpus);
    }
    let mut entries: Vec<(&str, u64)> = counts.into_iter().collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let (tokens, counts) = entries.into_iter().map(|(t, c)| (t.to_owned(), c)).unzip();
    Ok(Vocab::from_tokens(tokens, counts))
}

/// Number of (center, context) pairs a sequence of `len` tokens yields.
pub fn pair_count(len: usize, window: usize) -> usize {
    (0..len)
        .map(|i| i.min(window) + (len - 1 - i).min(window))
        .sum()
}

/// All `(t_i, t_j)` with `j != i` and `|i - j| <= window`, in center order.
pub fn extract_pairs<T: Copy>(sequence: &[T], window: usize) -> Vec<(T, T)> {
    let mut pairs = Vec::with_capacity(pair_count(sequence.len(), window));
    for (i, &center) in sequence.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window).min(sequence.len().saturating_sub(1));
        for (j, &context) in sequence.iter().enumerate().take(hi + 1).skip(lo) {
            if j != i {
                pairs.push((center, context));
            }
        }
    }
    pairs
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln σ(x)` without overflow for large `|x|`.
pub fn log_sigmoid(x: f64) -> f64 {
    -((-x.abs()).exp().ln_1p() + (-x).max(0.0))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// SGNS loss `-ln σ(u·v) - Σ_k ln σ(-u·n_k)`.
pub fn pair_loss(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> f64 {
    let mut loss = -log_sigmoid(dot(center, context));
    for n in negatives {
        loss -= log_sigmoid(-dot(center, n));
    }
    loss
}

/// Loss and its analytic gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct PairGradient {
    pub loss: f64,
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

pub fn pair_loss_grad(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> PairGradient {
    let pos = sigmoid(dot(center, context)) - 1.0;
    let mut g_center: Vec<f64> = context.iter().map(|v| pos * v).collect();
    let g_context: Vec<f64> = center.iter().map(|u| pos * u).collect();
    let mut g_negs = Vec::with_capacity(negatives.len());
    for n in negatives {
        let s = sigmoid(dot(center, n));
        for (g, x) in g_center.iter_mut().zip(n.iter()) {
            *g += s * x;
        }
        g_negs.push(center.iter().map(|u| s * u).collect());
    }
    PairGradient {
        loss: pair_loss(center, context, negatives),
        center: g_center,
        context: g_context,
        negatives: g_negs,
    }
}

/// Draws negatives from `count^exponent`, redrawing collisions with the
/// true context token.
#[derive(Debug, Clone)]
pub struct NegativeSampler {
    dist: Option<WeightedIndex<f64>>,
    size: usize,
}

impl NegativeSampler {
    pub fn new(counts: &[u64], exponent: f64) -> Self {
        let weights: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(exponent)).collect();
        NegativeSampler {
            dist: WeightedIndex::new(weights).ok(),
            size: counts.len(),
        }
    }

    /// `None` when no token other than `exclude` can be drawn.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, exclude: usize) -> Option<usize> {
        let dist = self.dist.as_ref()?;
        if self.size < 2 {
            return None;
        }
        loop {
            let t = dist.sample(rng);
            if t != exclude {
                return Some(t);
            }
        }
    }

    pub fn sample_any<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        self.dist.as_ref().map(|d| d.sample(rng))
    }
}

/// Token vectors as published: the input matrix of a trained model, or the
/// contents of an embedding file.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyedVectors {
    tokens: Vec<String>,
    index: HashMap<String, usize>,
    dim: usize,
    data: Vec<f64>,
}

impl KeyedVectors {
    pub fn new(tokens: Vec<String>, dim: usize, data: Vec<f64>) -> Self {
        assert_eq!(tokens.len() * dim, data.len(), "matrix shape mismatch");
        let index = tokens.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        KeyedVectors {
            tokens,
            index,
            dim,
            data,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.index.get(token).map(|&i| self.row(i))
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn cosine(&self, a: &str, b: &str) -> Result<f64, EmbedError> {
        let va = self.get(a).ok_or_else(|| EmbedError::UnknownToken(a.to_owned()))?;
        let vb = self.get(b).ok_or_else(|| EmbedError::UnknownToken(b.to_owned()))?;
        Ok(cosine(va, vb))
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.tokens.len(), self.dim)?;
        for (i, token) in self.tokens.iter().enumerate() {
            write!(out, "{token}")?;
            for x in self.row(i) {
                write!(out, " {x}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(input: R) -> Result<Self, EmbedError> {
        let bad = |line: usize, reason: &str| EmbedError::MalformedFile {
            line,
            reason: reason.to_owned(),
        };
        let mut lines = input.lines();
        let header = lines.next().ok_or_else(|| bad(1, "missing header"))??;
        let mut fields = header.split_whitespace();
        let (Some(n), Some(dim), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(bad(1, "header must be `<vocab-size> <dimension>`"));
        };
        let n: usize = n.parse().map_err(|_| bad(1, "bad vocabulary size"))?;
        let dim: usize = dim.parse().map_err(|_| bad(1, "bad dimension"))?;
        let mut tokens = Vec::with_capacity(n);
        let mut data = Vec::with_capacity(n * dim);
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(' ');
            let token = parts.next().filter(|t| !t.is_empty()).ok_or_else(|| bad(lineno, "missing token"))?;
            let before = data.len();
            for p in parts {
                let x: f64 = p.parse().map_err(|_| bad(lineno, "bad float"))?;
                data.push(x);
            }
            if data.len() - before != dim {
                return Err(bad(lineno, "wrong number of components"));
            }
            tokens.push(token.to_owned());
        }
        if tokens.len() != n {
            return Err(bad(1, "vocabulary size does not match row count"));
        }
        let kv = KeyedVectors::new(tokens, dim, data);
        if kv.index.len() != kv.tokens.len() {
            return Err(bad(1, "duplicate token"));
        }
        Ok(kv)
    }
}

/// Cosine similarity; 0 when either vector has zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot(a, b) / (na * nb)).clamp(-1.0, 1.0)
}

#[derive(Debug, Clone)]
pub struct EmbeddingModel {
    pub vectors: KeyedVectors,
    /// Context (output) matrix, row-major like `vectors`.
    pub context: Vec<f64>,
    pub vocab: Vocab,
    pub config: TrainConfig,
    /// Mean pair loss per epoch, measured before each update.
    pub epoch_losses: Vec<f64>,
}

impl EmbeddingModel {
    pub fn final_loss(&self) -> Option<f64> {
        self.epoch_losses.last().copied()
    }
}

struct SharedMatrix {
    cells: Vec<AtomicU64>,
    dim: usize,
}

impl SharedMatrix {
    fn from_values(values: impl IntoIterator<Item = f64>, dim: usize) -> Self {
        SharedMatrix {
            cells: values.into_iter().map(|x| AtomicU64::new(x.to_bits())).collect(),
            dim,
        }
    }

    fn load_row(&self, row: usize, buf: &mut [f64]) {
        let cells = &self.cells[row * self.dim..(row + 1) * self.dim];
        for (b, c) in buf.iter_mut().zip(cells) {
            *b = f64::from_bits(c.load(Ordering::Relaxed));
        }
    }

    fn dot_row(&self, row: usize, v: &[f64]) -> f64 {
        let cells = &self.cells[row * self.dim..(row + 1) * self.dim];
        cells
            .iter()
            .zip(v)
            .map(|(c, x)| f64::from_bits(c.load(Ordering::Relaxed)) * x)
            .sum()
    }

    /// `row += scale * v`, also accumulating `grad += scale * row_before`.
    fn axpy_row(&self, row: usize, scale: f64, v: &[f64], grad: &mut [f64]) {
        let cells = &self.cells[row * self.dim..(row + 1) * self.dim];
        for ((c, x), g) in cells.iter().zip(v).zip(grad.iter_mut()) {
            let old = f64::from_bits(c.load(Ordering::Relaxed));
            *g += scale * old;
            c.store((old + scale * x).to_bits(), Ordering::Relaxed);
        }
    }

    fn add_row(&self, row: usize, v: &[f64]) {
        let cells = &self.cells[row * self.dim..(row + 1) * self.dim];
        for (c, x) in cells.iter().zip(v) {
            let old = f64::from_bits(c.load(Ordering::Relaxed));
            c.store((old + x).to_bits(), Ordering::Relaxed);
        }
    }

    fn into_values(self) -> Vec<f64> {
        self.cells.into_iter().map(|c| f64::from_bits(c.into_inner())).collect()
    }
}

struct Trainer<'a> {
    cfg: &'a TrainConfig,
    input: SharedMatrix,
    output: SharedMatrix,
    sampler: NegativeSampler,
    total_pairs: u64,
    processed: AtomicU64,
}

impl Trainer<'_> {
    fn learning_rate(&self, processed: u64) -> f64 {
        if self.total_pairs == 0 {
            return self.cfg.initial_lr;
        }
        let progress = processed as f64 / self.total_pairs as f64;
        let span = self.cfg.initial_lr - self.cfg.min_lr;
        (self.cfg.initial_lr - span * progress).max(self.cfg.min_lr)
    }

    /// Trains on one sequence; returns (summed loss, pairs seen).
    fn sequence<R: Rng>(&self, seq: &[usize], rng: &mut R, scratch: &mut Scratch) -> (f64, u64) {
        let window = self.cfg.window;
        let mut loss = 0.0;
        let mut pairs = 0u64;
        for (i, &center) in seq.iter().enumerate() {
            let lo = i.saturating_sub(window);
            let hi = (i + window).min(seq.len() - 1);
            let n_ctx = (hi - lo) as u64;
            if n_ctx == 0 {
                continue;
            }
            let done = self.processed.fetch_add(n_ctx, Ordering::Relaxed);
            let lr = self.learning_rate(done);
            for (j, &context) in seq.iter().enumerate().take(hi + 1).skip(lo) {
                if j == i {
                    continue;
                }
                loss += self.pair(center, context, lr, rng, scratch);
                pairs += 1;
            }
        }
        (loss, pairs)
    }

    fn pair<R: Rng>(&self, center: usize, context: usize, lr: f64, rng: &mut R, s: &mut Scratch) -> f64 {
        self.input.load_row(center, &mut s.center);
        s.grad.iter_mut().for_each(|g| *g = 0.0);
        let mut loss = 0.0;
        let mut target = Some(context);
        let mut label = 1.0;
        let mut drawn = 0;
        while let Some(t) = target {
            let f = self.output.dot_row(t, &s.center);
            loss -= if label > 0.0 { log_sigmoid(f) } else { log_sigmoid(-f) };
            let g = (label - sigmoid(f)) * lr;
            self.output.axpy_row(t, g, &s.center, &mut s.grad);
            target = if drawn < self.cfg.negatives {
                drawn += 1;
                label = 0.0;
                self.sampler.sample(rng, context)
            } else {
                None
            };
        }
        self.input.add_row(center, &s.grad);
        loss
    }
}

struct Scratch {
    center: Vec<f64>,
    grad: Vec<f64>,
}

impl Scratch {
    fn new(dim: usize) -> Self {
        Scratch {
            center: vec![0.0; dim],
            grad: vec![0.0; dim],
        }
    }
}

const INIT_STREAM: u64 = 0x696e_6974;
const TRAIN_STREAM: u64 = 0x7472_6169_6e00;

/// Initial input matrix: uniform in `[-0.5/dim, 0.5/dim]`.
pub fn initial_vectors(vocab_size: usize, dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ INIT_STREAM);
    let half = 0.5 / dim as f64;
    (0..vocab_size * dim).map(|_| rng.gen_range(-half..=half)).collect()
}

/// Trains skip-gram with negative sampling on token sequences.
pub fn train<S: AsRef<str> + Sync>(sequences: &[Vec<S>], cfg: &TrainConfig) -> Result<EmbeddingModel, EmbedError> {
    cfg.validate()?;
    let vocab = build_vocab(sequences)?;
    let encoded: Vec<Vec<usize>> = sequences
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| s.iter().map(|t| vocab.get(t.as_ref()).expect("token in vocab")).collect())
        .collect();
    let dim = cfg.dim;
    let pairs_per_epoch: u64 = encoded.iter().map(|s| pair_count(s.len(), cfg.window) as u64).sum();

    let trainer = Trainer {
        cfg,
        input: SharedMatrix::from_values(initial_vectors(vocab.len(), dim, cfg.seed), dim),
        output: SharedMatrix::from_values(std::iter::repeat_n(0.0, vocab.len() * dim), dim),
        sampler: NegativeSampler::new(vocab.counts(), cfg.unigram_exponent),
        total_pairs: pairs_per_epoch * cfg.epochs as u64,
        processed: AtomicU64::new(0),
    };

    let mut epoch_losses = Vec::with_capacity(cfg.epochs);
    let mut serial_rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ TRAIN_STREAM);
    for epoch in 0..cfg.epochs {
        let (loss, pairs) = if cfg.deterministic {
            let mut scratch = Scratch::new(dim);
            encoded.iter().fold((0.0, 0u64), |(l, n), seq| {
                let (sl, sn) = trainer.sequence(seq, &mut serial_rng, &mut scratch);
                (l + sl, n + sn)
            })
        } else {
            let threads = rayon::current_num_threads().max(1);
            let chunk = encoded.len().div_ceil(threads * 4).max(1);
            encoded
                .par_chunks(chunk)
                .enumerate()
                .map(|(c, seqs)| {
                    let stream = cfg.seed ^ TRAIN_STREAM ^ ((epoch as u64) << 40) ^ c as u64;
                    let mut rng = ChaCha8Rng::seed_from_u64(stream);
                    let mut scratch = Scratch::new(dim);
                    seqs.iter().fold((0.0, 0u64), |(l, n), seq| {
                        let (sl, sn) = trainer.sequence(seq, &mut rng, &mut scratch);
                        (l + sl, n + sn)
                    })
                })
                .reduce(|| (0.0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
        };
        let mean = if pairs == 0 { 0.0 } else { loss / pairs as f64 };
        log::debug!("epoch {} mean loss {mean:.6}", epoch + 1);
        epoch_losses.push(mean);
    }

    let Trainer { input, output, .. } = trainer;
    Ok(EmbeddingModel {
        vectors: KeyedVectors::new(vocab.tokens().to_vec(), dim, input.into_values()),
        context: output.into_values(),
        vocab,
        config: *cfg,
        epoch_losses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seqs(text: &[&str]) -> Vec<Vec<String>> {
        text.iter()
            .map(|l| l.split(' ').map(str::to_owned).collect())
            .collect()
    }

    #[test]
    fn vocab_of_one_walk() {
        let v = build_vocab(&seqs(&["a p b"])).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.counts().iter().all(|&c| c == 1));
    }

    #[test]
    fn vocab_counts_repeated_token() {
        let v = build_vocab(&seqs(&["a p b", "a q c", "a p d"])).unwrap();
        assert_eq!(v.count(v.get("a").unwrap()), 3);
        assert_eq!(v.count(v.get("p").unwrap()), 2);
        assert_eq!(v.token(0), "a");
    }

    #[test]
    fn empty_corpus_rejected() {
        let empty: Vec<Vec<String>> = vec![];
        assert!(matches!(build_vocab(&empty), Err(EmbedError::EmptyCorpus)));
        assert!(matches!(
            train(&empty, &TrainConfig::default()),
            Err(EmbedError::EmptyCorpus)
        ));
    }

    #[test]
    fn pair_extraction_counts() {
        assert_eq!(extract_pairs(&[0, 1, 2], 5).len(), 6);
        assert!(extract_pairs(&[0], 5).is_empty());
        let seq: Vec<usize> = (0..11).collect();
        let pairs = extract_pairs(&seq, 5);
        assert_eq!(pairs.iter().filter(|p| p.0 == 5).count(), 10);
        assert_eq!(pairs.iter().filter(|p| p.0 == 0).count(), 5);
        assert_eq!(pairs.iter().filter(|p| p.0 == 10).count(), 5);
        assert_eq!(pairs.len(), pair_count(11, 5));
    }

    #[test]
    fn loss_at_zero_is_ln2_per_term() {
        let z = [0.0; 4];
        let negs: Vec<&[f64]> = vec![&z; 25];
        let loss = pair_loss(&z, &z, &negs);
        assert!((loss - 26.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn loss_saturates_to_zero() {
        let u = [100.0, 0.0];
        let v = [100.0, 0.0];
        let n = [-100.0, 0.0];
        let loss = pair_loss(&u, &v, &[&n, &n]);
        assert!((0.0..1e-12).contains(&loss));
    }

    #[test]
    fn log_sigmoid_is_stable() {
        assert!((log_sigmoid(0.0) + std::f64::consts::LN_2).abs() < 1e-15);
        assert!(log_sigmoid(-800.0).is_finite());
        assert!((log_sigmoid(-800.0) + 800.0).abs() < 1e-9);
        assert_eq!(log_sigmoid(800.0), 0.0);
    }

    #[test]
    fn cosine_conventions() {
        assert!((cosine(&[1.0, 0.0], &[1.0, 1.0]) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 3.0]), 0.0);
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 1.0]), 0.0);
        assert!((cosine(&[0.3, -2.0], &[0.3, -2.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_unknown_token() {
        let kv = KeyedVectors::new(vec!["a".into()], 2, vec![1.0, 0.0]);
        assert!(matches!(kv.cosine("a", "zz"), Err(EmbedError::UnknownToken(t)) if t == "zz"));
    }

    #[test]
    fn zero_epochs_returns_initialization() {
        let corpus = seqs(&["a p b", "b p c"]);
        let cfg = TrainConfig {
            dim: 8,
            epochs: 0,
            deterministic: true,
            ..TrainConfig::default()
        };
        let model = train(&corpus, &cfg).unwrap();
        assert_eq!(model.vectors.as_slice(), initial_vectors(4, 8, cfg.seed).as_slice());
        assert!(model.context.iter().all(|&x| x == 0.0));
        assert!(model.vectors.as_slice().iter().all(|x| x.abs() <= 0.5 / 8.0));
        assert!(model.final_loss().is_none());
    }

    #[test]
    fn sampler_never_returns_excluded() {
        let s = NegativeSampler::new(&[5, 1, 1], 0.75);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            assert_ne!(s.sample(&mut rng, 0), Some(0));
        }
        let single = NegativeSampler::new(&[4], 0.75);
        assert_eq!(single.sample(&mut rng, 0), None);
    }

    #[test]
    fn embedding_file_rejects_bad_rows() {
        let bad = "2 2\na 1 2\nb 1\n";
        assert!(matches!(
            KeyedVectors::read(bad.as_bytes()),
            Err(EmbedError::MalformedFile { line: 3, .. })
        ));
        let short = "3 1\na 1\n";
        assert!(KeyedVectors::read(short.as_bytes()).is_err());
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = TrainConfig {
            min_lr: 0.5,
            ..TrainConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(EmbedError::InvalidConfig(_))));
    }
}
