//! Walk-corpus and graph diagnostics: predicate distributions, degree
//! statistics and symmetry gaps.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::eval::{pearson, EvalError};
use crate::graph::{EntityId, Graph, PredicateId, Triple};

#[derive(Debug, Error)]
pub enum AnalyzeError {
    #[error("correlation undefined: an aligned distribution is constant")]
    ZeroVariance,
    #[error("need at least two predicates across both distributions, got {0}")]
    TooFewKeys(usize),
    #[error("unknown entity {0:?}")]
    UnknownEntity(String),
    #[error("unknown predicate {0:?}")]
    UnknownPredicate(String),
    #[error("entity subset is empty")]
    EmptySubset,
}

/// Predicate-token counts over a walk corpus, keyed by predicate IRI.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PropertyDistribution {
    pub counts: BTreeMap<String, u64>,
    pub total: u64,
}

impl PropertyDistribution {
    pub fn frequency(&self, predicate: &str) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.get(predicate).copied().unwrap_or(0) as f64 / self.total as f64
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }
}

/// Counts predicate tokens (odd positions) across token sequences.
pub fn property_distribution<S: AsRef<str>>(sequences: &[Vec<S>]) -> PropertyDistribution {
    let mut dist = PropertyDistribution::default();
    for seq in sequences {
        for p in seq.iter().skip(1).step_by(2) {
            *dist.counts.entry(p.as_ref().to_owned()).or_default() += 1;
            dist.total += 1;
        }
    }
    dist
}

/// Number of walks containing each predicate at least once.
pub fn walk_containment<S: AsRef<str>>(sequences: &[Vec<S>]) -> BTreeMap<String, u64> {
    let mut out: BTreeMap<String, u64> = BTreeMap::new();
    for seq in sequences {
        let distinct: BTreeSet<&str> = seq.iter().skip(1).step_by(2).map(AsRef::as_ref).collect();
        for p in distinct {
            *out.entry(p.to_owned()).or_default() += 1;
        }
    }
    out
}

/// The `k` most frequent predicates, descending, ties by IRI ascending.
pub fn top_k(dist: &PropertyDistribution, k: usize) -> Vec<(String, f64)> {
    let mut all: Vec<(&String, u64)> = dist.counts.iter().map(|(p, &c)| (p, c)).collect();
    all.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    all.into_iter()
        .take(k)
        .map(|(p, c)| (p.clone(), c as f64 / dist.total as f64))
        .collect()
}

/// Relative-frequency vectors of both distributions over the union of their
/// keys (sorted), with zeros for absent predicates.
pub fn align(d1: &PropertyDistribution, d2: &PropertyDistribution) -> (Vec<String>, Vec<f64>, Vec<f64>) {
    let keys: BTreeSet<&String> = d1.counts.keys().chain(d2.counts.keys()).collect();
    let a = keys.iter().map(|k| d1.frequency(k)).collect();
    let b = keys.iter().map(|k| d2.frequency(k)).collect();
    (keys.into_iter().cloned().collect(), a, b)
}

/// Pearson correlation of the aligned relative frequencies. Identical
/// non-empty distributions correlate at exactly 1, even when a single
/// predicate leaves Pearson undefined.
pub fn distribution_correlation(d1: &PropertyDistribution, d2: &PropertyDistribution) -> Result<f64, AnalyzeError> {
    let (keys, a, b) = align(d1, d2);
    if !keys.is_empty() && a == b {
        return Ok(1.0);
    }
    if keys.len() < 2 {
        return Err(AnalyzeError::TooFewKeys(keys.len()));
    }
    pearson(&a, &b).map_err(|e| match e {
        EvalError::ZeroVariance => AnalyzeError::ZeroVariance,
        other => unreachable!("aligned vectors have equal length >= 2: {other}"),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    /// `(entity IRI, out-degree)` for the selected entities.
    pub degrees: Vec<(String, usize)>,
    pub mean: f64,
    pub median: f64,
    pub max: usize,
}

/// Out-degree statistics, optionally over an entity subset and counting
/// only edges of one predicate.
pub fn degree_stats(graph: &Graph, subset: Option<&[&str]>, predicate: Option<&str>) -> Result<DegreeStats, AnalyzeError> {
    let restrict: Option<PredicateId> = match predicate {
        Some(p) => Some(graph.predicate_id(p).ok_or_else(|| AnalyzeError::UnknownPredicate(p.to_owned()))?),
        None => None,
    };
    let ids: Vec<EntityId> = match subset {
        Some(names) => names
            .iter()
            .map(|n| graph.entity_id(n).ok_or_else(|| AnalyzeError::UnknownEntity((*n).to_owned())))
            .collect::<Result<_, _>>()?,
        None => (0..graph.entity_count() as u32).map(EntityId).collect(),
    };
    if ids.is_empty() {
        return Err(AnalyzeError::EmptySubset);
    }
    let degrees: Vec<(String, usize)> = ids
        .iter()
        .map(|&e| {
            let d = match restrict {
                Some(p) => graph.out_edges(e).iter().filter(|(q, _)| *q == p).count(),
                None => graph.out_degree(e),
            };
            (graph.entity_iri(e).to_owned(), d)
        })
        .collect();
    let mut sorted: Vec<usize> = degrees.iter().map(|d| d.1).collect();
    sorted.sort_unstable();
    let n = sorted.len();
    let mean = sorted.iter().sum::<usize>() as f64 / n as f64;
    let median = if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0
    };
    Ok(DegreeStats {
        degrees,
        mean,
        median,
        max: sorted[n - 1],
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryGap {
    pub predicate: String,
    /// Unordered pairs `{x, y}`, `x != y`, with edges in both directions.
    pub bidirectional_pairs: usize,
    /// Edges whose reverse is missing. Self-loops are never counted.
    pub one_directional: usize,
    /// Triples symmetric completion would add; equals `one_directional`.
    pub completion_delta: usize,
}

pub fn symmetry_gap(graph: &Graph, predicate: &str) -> Result<SymmetryGap, AnalyzeError> {
    let p = graph
        .predicate_id(predicate)
        .ok_or_else(|| AnalyzeError::UnknownPredicate(predicate.to_owned()))?;
    let mut bidirectional: HashSet<(EntityId, EntityId)> = HashSet::new();
    let mut one_directional = 0;
    for t in graph.triples().filter(|t| t.predicate == p && t.subject != t.object) {
        if graph.contains(&Triple::new(t.object, p, t.subject)) {
            bidirectional.insert((t.subject.min(t.object), t.subject.max(t.object)));
        } else {
            one_directional += 1;
        }
    }
    Ok(SymmetryGap {
        predicate: predicate.to_owned(),
        bidirectional_pairs: bidirectional.len(),
        one_directional,
        completion_delta: one_directional,
    })
}

/// Per-corpus summary used by [`compare_corpora`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusProfile {
    pub distribution: PropertyDistribution,
    pub containment: BTreeMap<String, u64>,
    pub walks: usize,
}

impl CorpusProfile {
    pub fn from_sequences<S: AsRef<str>>(sequences: &[Vec<S>]) -> Self {
        CorpusProfile {
            distribution: property_distribution(sequences),
            containment: walk_containment(sequences),
            walks: sequences.len(),
        }
    }

    /// Combined token share of the top `k` predicates.
    fn top_share(&self, k: usize) -> f64 {
        top_k(&self.distribution, k).iter().map(|t| t.1).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusComparison {
    pub top_original: Vec<(String, f64)>,
    pub top_enriched: Vec<(String, f64)>,
    pub correlation: f64,
    pub top3_share_original: f64,
    pub top3_share_enriched: f64,
    /// Fraction of walks containing at least one of the corpus's own top-3
    /// predicates.
    pub top3_walk_share_original: f64,
    pub top3_walk_share_enriched: f64,
    /// `(predicate, freq original, freq enriched)` over the key union.
    pub aligned: Vec<(String, f64, f64)>,
}

fn top3_walk_share<S: AsRef<str>>(sequences: &[Vec<S>], profile: &CorpusProfile) -> f64 {
    if sequences.is_empty() {
        return 0.0;
    }
    let top: BTreeSet<String> = top_k(&profile.distribution, 3).into_iter().map(|t| t.0).collect();
    let hits = sequences
        .iter()
        .filter(|s| s.iter().skip(1).step_by(2).any(|p| top.contains(p.as_ref())))
        .count();
    hits as f64 / sequences.len() as f64
}

/// Compares predicate usage between walks over an original and an enriched
/// graph.
pub fn compare_corpora<S: AsRef<str>>(
    original: &[Vec<S>],
    enriched: &[Vec<S>],
    k: usize,
) -> Result<CorpusComparison, AnalyzeError> {
    let po = CorpusProfile::from_sequences(original);
    let pe = CorpusProfile::from_sequences(enriched);
    let correlation = distribution_correlation(&po.distribution, &pe.distribution)?;
    let (keys, a, b) = align(&po.distribution, &pe.distribution);
    Ok(CorpusComparison {
        top_original: top_k(&po.distribution, k),
        top_enriched: top_k(&pe.distribution, k),
        correlation,
        top3_share_original: po.top_share(3),
        top3_share_enriched: pe.top_share(3),
        top3_walk_share_original: top3_walk_share(original, &po),
        top3_walk_share_enriched: top3_walk_share(enriched, &pe),
        aligned: keys.into_iter().zip(a).zip(b).map(|((k, x), y)| (k, x, y)).collect(),
    })
}

impl CorpusComparison {
    pub fn key_values(&self) -> String {
        format!(
            "correlation={}\ntop3_share_original={}\ntop3_share_enriched={}\ntop3_walk_share_original={}\ntop3_walk_share_enriched={}\n",
            self.correlation,
            self.top3_share_original,
            self.top3_share_enriched,
            self.top3_walk_share_original,
            self.top3_walk_share_enriched
        )
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("predicate,freq_original,freq_enriched\n");
        for (p, a, b) in &self.aligned {
            out.push_str(&format!("{p},{a},{b}\n"));
        }
        out
    }
}

impl fmt::Display for CorpusComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .top_original
            .iter()
            .chain(&self.top_enriched)
            .map(|t| t.0.len())
            .max()
            .unwrap_or(9)
            .max(9);
        let rows = self.top_original.len().max(self.top_enriched.len());
        writeln!(f, "{:>4}  {:<width$}  {:>8}  {:<width$}  {:>8}", "rank", "original", "freq", "enriched", "freq")?;
        for i in 0..rows {
            let (po, fo) = self.top_original.get(i).map_or(("", String::new()), |t| (t.0.as_str(), format!("{:.4}", t.1)));
            let (pe, fe) = self.top_enriched.get(i).map_or(("", String::new()), |t| (t.0.as_str(), format!("{:.4}", t.1)));
            writeln!(f, "{:>4}  {po:<width$}  {fo:>8}  {pe:<width$}  {fe:>8}", i + 1)?;
        }
        writeln!(f)?;
        write!(f, "{}", self.key_values())
    }
}
