//! Independent reference implementations and fixture builders shared by the
//! integration tests. Nothing here calls into the rule engine, the
//! correlation code or the document scorer it is compared against.

#![allow(dead_code)]

use std::collections::BTreeSet;

use kglab::graph::{parse_graph_str, parse_tbox_str, Graph, TBox};
use rand::Rng;

pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const SYMMETRIC: &str = "http://www.w3.org/2002/07/owl#SymmetricProperty";
pub const TRANSITIVE: &str = "http://www.w3.org/2002/07/owl#TransitiveProperty";
pub const INVERSE_OF: &str = "http://www.w3.org/2002/07/owl#inverseOf";
pub const SUBPROPERTY_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";

pub type T3 = (usize, usize, usize);

/// Random instance: triples over `n{i}` / `p{j}` plus axiom lists.
#[derive(Debug, Clone)]
pub struct Instance {
    pub triples: Vec<T3>,
    pub symmetric: Vec<usize>,
    pub transitive: Vec<usize>,
    pub inverse: Vec<(usize, usize)>,
    pub subproperty: Vec<(usize, usize)>,
}

pub fn node(i: usize) -> String {
    format!("http://example.org/n{i}")
}

pub fn pred(j: usize) -> String {
    format!("http://example.org/p{j}")
}

impl Instance {
    pub fn random<R: Rng>(rng: &mut R, max_nodes: usize, max_preds: usize, max_triples: usize) -> Self {
        let nodes = rng.gen_range(1..=max_nodes);
        let preds = rng.gen_range(1..=max_preds);
        let m = rng.gen_range(1..=max_triples);
        let triples = (0..m)
            .map(|_| (rng.gen_range(0..nodes), rng.gen_range(0..preds), rng.gen_range(0..nodes)))
            .collect();
        let pick = |rng: &mut R| -> Vec<usize> { (0..preds).filter(|_| rng.gen_bool(0.3)).collect() };
        let symmetric = pick(rng);
        let transitive = pick(rng);
        let pairs = |rng: &mut R, allow_self: bool| -> Vec<(usize, usize)> {
            (0..rng.gen_range(0..=preds))
                .map(|_| (rng.gen_range(0..preds), rng.gen_range(0..preds)))
                .filter(|(a, b)| allow_self || a != b)
                .collect()
        };
        let inverse = pairs(rng, true);
        let subproperty = pairs(rng, false);
        Instance {
            triples,
            symmetric,
            transitive,
            inverse,
            subproperty,
        }
    }

    pub fn graph_text(&self) -> String {
        self.triples
            .iter()
            .map(|&(s, p, o)| format!("<{}> <{}> <{}> .\n", node(s), pred(p), node(o)))
            .collect()
    }

    pub fn tbox_text(&self) -> String {
        let mut t = String::new();
        for &p in &self.symmetric {
            t += &format!("<{}> <{TYPE}> <{SYMMETRIC}> .\n", pred(p));
        }
        for &p in &self.transitive {
            t += &format!("<{}> <{TYPE}> <{TRANSITIVE}> .\n", pred(p));
        }
        for &(p, q) in &self.inverse {
            t += &format!("<{}> <{INVERSE_OF}> <{}> .\n", pred(p), pred(q));
        }
        for &(p, q) in &self.subproperty {
            t += &format!("<{}> <{SUBPROPERTY_OF}> <{}> .\n", pred(p), pred(q));
        }
        t
    }

    pub fn load(&self) -> (Graph, TBox) {
        let mut g = parse_graph_str(&self.graph_text()).expect("generated graph parses");
        let tbox = parse_tbox_str(&self.tbox_text(), &mut g).expect("generated tbox parses");
        (g, tbox)
    }

    /// Exhaustive chase: fire every rule on every triple (and every pair of
    /// triples for transitivity) until nothing changes.
    pub fn chase(&self) -> BTreeSet<T3> {
        let mut facts: BTreeSet<T3> = self.triples.iter().copied().collect();
        loop {
            let mut new = Vec::new();
            for &(s, p, o) in &facts {
                if self.symmetric.contains(&p) {
                    new.push((o, p, s));
                }
                for &(a, b) in &self.inverse {
                    if p == a {
                        new.push((o, b, s));
                    }
                    if p == b {
                        new.push((o, a, s));
                    }
                }
                for &(sub, sup) in &self.subproperty {
                    if p == sub {
                        new.push((s, sup, o));
                    }
                }
                if self.transitive.contains(&p) {
                    for &(s2, p2, o2) in &facts {
                        if p2 == p && s2 == o {
                            new.push((s, p, o2));
                        }
                    }
                }
            }
            let before = facts.len();
            facts.extend(new);
            if facts.len() == before {
                return facts;
            }
        }
    }
}

pub fn iri_set(triples: &BTreeSet<T3>) -> BTreeSet<(String, String, String)> {
    triples.iter().map(|&(s, p, o)| (node(s), pred(p), node(o))).collect()
}

/// Pairs `(x, z)` with a non-empty path from `x` to `z` (Floyd–Warshall).
pub fn reachability(n: usize, edges: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
    let mut r = vec![vec![false; n]; n];
    for &(a, b) in edges {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                let via = r[k].clone();
                for (cell, &reach) in r[i].iter_mut().zip(&via) {
                    *cell |= reach;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for (i, row) in r.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Hand-rolled Spearman: rank by counting strictly smaller and equal
/// values, then the textbook Pearson formula.
pub fn spearman_oracle(x: &[f64], y: &[f64]) -> f64 {
    let rank = |v: &[f64]| -> Vec<f64> {
        v.iter()
            .map(|&a| {
                let less = v.iter().filter(|&&b| b < a).count() as f64;
                let equal = v.iter().filter(|&&b| b == a).count() as f64;
                less + (equal + 1.0) / 2.0
            })
            .collect()
    };
    pearson_oracle(&rank(x), &rank(y))
}

pub fn pearson_oracle(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

fn cos(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        d / (na * nb)
    }
}

/// Max-average document similarity by brute force over index lists.
pub fn docsim_oracle(vectors: &[Vec<f64>], d1: &[usize], d2: &[usize]) -> f64 {
    let mut total = 0.0;
    for &i in d1 {
        total += d2.iter().map(|&j| cos(&vectors[i], &vectors[j])).fold(f64::MIN, f64::max);
    }
    for &j in d2 {
        total += d1.iter().map(|&i| cos(&vectors[j], &vectors[i])).fold(f64::MIN, f64::max);
    }
    total / (d1.len() + d2.len()) as f64
}

/// Graph whose predicate `p` has `pairs` two-way pairs and `one_way`
/// edges without a reverse, all on distinct nodes.
pub fn symmetry_fixture(pairs: usize, one_way: usize) -> String {
    let mut text = String::new();
    let p = "http://example.org/spouse";
    for i in 0..pairs {
        let (a, b) = (format!("http://example.org/a{i}"), format!("http://example.org/b{i}"));
        text += &format!("<{a}> <{p}> <{b}> .\n<{b}> <{p}> <{a}> .\n");
    }
    for i in 0..one_way {
        text += &format!("<http://example.org/c{i}> <{p}> <http://example.org/d{i}> .\n");
    }
    text
}

/// Corpus of short sentences drawn from two disjoint token clusters.
pub fn two_cluster_corpus<R: Rng>(rng: &mut R, per_cluster: usize, sentences: usize, len: usize) -> Vec<Vec<String>> {
    (0..sentences)
        .map(|i| {
            let c = if i % 2 == 0 { "a" } else { "b" };
            (0..len)
                .map(|_| format!("{c}{}", rng.gen_range(0..per_cluster)))
                .collect()
        })
        .collect()
}

pub fn mean_cosines(vectors: &kglab::KeyedVectors, per_cluster: usize) -> (f64, f64) {
    let (mut intra, mut ni, mut inter, mut nx) = (0.0, 0, 0.0, 0);
    let tok = |c: &str, i: usize| format!("{c}{i}");
    for i in 0..per_cluster {
        for j in 0..per_cluster {
            for (c1, c2) in [("a", "a"), ("b", "b"), ("a", "b")] {
                if c1 == c2 && i >= j {
                    continue;
                }
                let v = vectors.cosine(&tok(c1, i), &tok(c2, j)).expect("token trained");
                if c1 == c2 {
                    intra += v;
                    ni += 1;
                } else {
                    inter += v;
                    nx += 1;
                }
            }
        }
    }
    (intra / ni as f64, inter / nx as f64)
}
