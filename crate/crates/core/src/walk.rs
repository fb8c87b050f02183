//! Uniform random walks over the resource graph.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{EntityId, Graph, PredicateId};

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("cannot generate walks over an empty graph")]
    EmptyGraph,
    #[error("invalid walk configuration: {0}")]
    InvalidConfig(String),
    #[error("line {line}: malformed corpus header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkConfig {
    pub walks_per_node: usize,
    /// Number of hops; a full walk has `2 * depth + 1` tokens.
    pub depth: usize,
    pub seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            walks_per_node: 500,
            depth: 4,
            seed: 42,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<(), WalkError> {
        if self.walks_per_node == 0 {
            return Err(WalkError::InvalidConfig("walks per node must be >= 1".into()));
        }
        if self.depth == 0 {
            return Err(WalkError::InvalidConfig("depth must be >= 1".into()));
        }
        Ok(())
    }
}

/// Alternating entity / predicate ids: `[e0, p1, e1, p2, e2, ...]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    tokens: Vec<u32>,
}

impl Walk {
    pub fn from_tokens(tokens: Vec<u32>) -> Self {
        debug_assert!(tokens.len() % 2 == 1);
        Walk { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn hops(&self) -> usize {
        self.tokens.len() / 2
    }

    pub fn start(&self) -> EntityId {
        EntityId(self.tokens[0])
    }

    pub fn entity(&self, i: usize) -> EntityId {
        EntityId(self.tokens[2 * i])
    }

    /// Predicate of hop `i` (1-based, as in `p_i`).
    pub fn predicate(&self, i: usize) -> PredicateId {
        PredicateId(self.tokens[2 * i - 1])
    }

    pub fn predicates(&self) -> impl Iterator<Item = PredicateId> + '_ {
        self.tokens.iter().skip(1).step_by(2).map(|&p| PredicateId(p))
    }

    pub fn render(&self, graph: &Graph) -> Vec<String> {
        self.tokens
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                if i % 2 == 0 {
                    graph.entity_iri(EntityId(t)).to_owned()
                } else {
                    graph.predicate_iri(PredicateId(t)).to_owned()
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct WalkCorpus {
    pub walks: Vec<Walk>,
    pub graph_fingerprint: String,
    pub config: WalkConfig,
}

impl WalkCorpus {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn header(&self) -> String {
        format!(
            "# walks={} depth={} seed={} graph={}",
            self.config.walks_per_node, self.config.depth, self.config.seed, self.graph_fingerprint
        )
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of the RNG stream for one (start entity, walk index) pair.
pub fn walk_seed(seed: u64, entity: EntityId, walk_index: usize) -> u64 {
    seed ^ splitmix64(((entity.0 as u64) << 32) ^ walk_index as u64)
}

fn single_walk(graph: &Graph, start: EntityId, depth: usize, rng: &mut impl Rng) -> Walk {
    let mut tokens = Vec::with_capacity(2 * depth + 1);
    tokens.push(start.0);
    let mut current = start;
    for _ in 0..depth {
        let edges = graph.out_edges(current);
        if edges.is_empty() {
            break;
        }
        let (p, o) = edges[rng.gen_range(0..edges.len())];
        tokens.push(p.0);
        tokens.push(o.0);
        current = o;
    }
    Walk { tokens }
}

/// `walks_per_node` walks from every entity with at least one out-edge,
/// ordered by start entity then walk index.
pub fn generate_walks(graph: &Graph, config: WalkConfig) -> Result<WalkCorpus, WalkError> {
    config.validate()?;
    if graph.is_empty() {
        return Err(WalkError::EmptyGraph);
    }
    let walks: Vec<Walk> = (0..graph.entity_count() as u32)
        .into_par_iter()
        .map(EntityId)
        .filter(|&e| graph.out_degree(e) > 0)
        .flat_map_iter(|e| {
            (0..config.walks_per_node).map(move |w| {
                let mut rng = ChaCha8Rng::seed_from_u64(walk_seed(config.seed, e, w));
                single_walk(graph, e, config.depth, &mut rng)
            })
        })
        .collect();
    Ok(WalkCorpus {
        walks,
        graph_fingerprint: graph.fingerprint(),
        config,
    })
}

pub fn corpus_to_token_sequences(corpus: &WalkCorpus, graph: &Graph) -> Vec<Vec<String>> {
    corpus.walks.iter().map(|w| w.render(graph)).collect()
}

pub fn write_corpus<W: Write>(corpus: &WalkCorpus, graph: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{}", corpus.header())?;
    for walk in &corpus.walks {
        writeln!(out, "{}", walk.render(graph).join(" "))?;
    }
    Ok(())
}

/// Header fields of a corpus file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusHeader {
    pub config: WalkConfig,
    pub graph_fingerprint: String,
}

fn parse_header(line: &str, lineno: usize) -> Result<CorpusHeader, WalkError> {
    let bad = |reason: &str| WalkError::MalformedHeader {
        line: lineno,
        reason: reason.to_owned(),
    };
    let body = line.strip_prefix('#').ok_or_else(|| bad("missing '#'"))?;
    let (mut walks, mut depth, mut seed, mut graph) = (None, None, None, None);
    for field in body.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        match key {
            "walks" => walks = value.parse().ok(),
            "depth" => depth = value.parse().ok(),
            "seed" => seed = value.parse().ok(),
            "graph" => graph = Some(value.to_owned()),
            _ => return Err(bad("unknown header key")),
        }
    }
    match (walks, depth, seed, graph) {
        (Some(walks_per_node), Some(depth), Some(seed), Some(graph_fingerprint)) => Ok(CorpusHeader {
            config: WalkConfig {
                walks_per_node,
                depth,
                seed,
            },
            graph_fingerprint,
        }),
        _ => Err(bad("missing or unparsable walks/depth/seed/graph")),
    }
}

/// Reads a corpus file as token sequences. The header is optional so that
/// hand-written corpora can be trained on directly.
pub fn read_token_corpus<R: BufRead>(
    input: R,
) -> Result<(Option<CorpusHeader>, Vec<Vec<String>>), WalkError> {
    let mut header = None;
    let mut sequences = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.starts_with('#') {
            if i == 0 {
                header = Some(parse_header(&line, 1)?);
            }
            continue;
        }
        let tokens: Vec<String> = line.split(' ').filter(|t| !t.is_empty()).map(str::to_owned).collect();
        if !tokens.is_empty() {
            sequences.push(tokens);
        }
    }
    Ok((header, sequences))
}
