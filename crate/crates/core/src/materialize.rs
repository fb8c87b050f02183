//! Forward-chaining A-box materialization under symmetric, transitive,
//! inverse and subproperty axioms.
//!
//! Every iteration evaluates all four rule families against the graph as it
//! stood when the iteration began, then adds the union of their outputs. A
//! triple derived by several rules in one iteration is credited to the first
//! rule in the evaluation order. The loop ends at the first iteration that
//! derives nothing.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::graph::{EntityId, Graph, PredicateId, TBox, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Subproperty,
    Inverse,
    Transitive,
    Symmetric,
}

impl Rule {
    /// The default evaluation (and attribution) order.
    pub const ORDER: [Rule; 4] = [
        Rule::Subproperty,
        Rule::Inverse,
        Rule::Transitive,
        Rule::Symmetric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Subproperty => "subproperty",
            Rule::Inverse => "inverse",
            Rule::Transitive => "transitive",
            Rule::Symmetric => "symmetric",
        }
    }

    fn slot(self) -> usize {
        match self {
            Rule::Subproperty => 0,
            Rule::Inverse => 1,
            Rule::Transitive => 2,
            Rule::Symmetric => 3,
        }
    }
}

/// Per-rule triple counts, indexed by [`Rule`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RuleCounts([usize; 4]);

impl RuleCounts {
    pub fn get(&self, rule: Rule) -> usize {
        self.0[rule.slot()]
    }

    pub fn add(&mut self, rule: Rule, n: usize) {
        self.0[rule.slot()] += n;
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaterializationReport {
    /// Number of iterations that added at least one triple.
    pub iterations: usize,
    pub added_by_rule: RuleCounts,
    pub added_total: usize,
    pub total_before: usize,
    pub total_after: usize,
    pub per_iteration_added: Vec<usize>,
    /// Declared axioms per family.
    pub tbox_axioms: RuleCounts,
}

impl MaterializationReport {
    /// `key=value` lines, one per field.
    pub fn key_values(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("iterations={}\n", self.iterations));
        for rule in Rule::ORDER {
            out.push_str(&format!("tbox_{}={}\n", rule.name(), self.tbox_axioms.get(rule)));
        }
        for rule in Rule::ORDER {
            out.push_str(&format!("added_{}={}\n", rule.name(), self.added_by_rule.get(rule)));
        }
        out.push_str(&format!("added_total={}\n", self.added_total));
        out.push_str(&format!("total_before={}\n", self.total_before));
        out.push_str(&format!("total_after={}\n", self.total_after));
        let per: Vec<String> = self.per_iteration_added.iter().map(|n| n.to_string()).collect();
        out.push_str(&format!("per_iteration_added={}\n", per.join(",")));
        out
    }
}

impl fmt::Display for MaterializationReport {
    /// Table layout with T-box counts on top and A-box counts below.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows_top = [
            ("T-box subproperties", self.tbox_axioms.get(Rule::Subproperty)),
            ("T-box inverse properties", self.tbox_axioms.get(Rule::Inverse)),
            ("T-box transitive properties", self.tbox_axioms.get(Rule::Transitive)),
            ("T-box symmetric properties", self.tbox_axioms.get(Rule::Symmetric)),
        ];
        let rows_bottom = [
            ("A-box subproperties", self.added_by_rule.get(Rule::Subproperty)),
            ("A-box inverse properties", self.added_by_rule.get(Rule::Inverse)),
            ("A-box transitive properties", self.added_by_rule.get(Rule::Transitive)),
            ("A-box symmetric properties", self.added_by_rule.get(Rule::Symmetric)),
        ];
        let rows_total = [
            ("No. of added triples", self.added_total),
            ("No. of total triples", self.total_after),
        ];
        let rule = "-".repeat(42);
        writeln!(f, "{:<30} {:>11}", "", "Materialized")?;
        writeln!(f, "{rule}")?;
        for (label, n) in rows_top {
            writeln!(f, "{label:<30} {n:>11}")?;
        }
        writeln!(f, "{rule}")?;
        for (label, n) in rows_bottom {
            writeln!(f, "{label:<30} {n:>11}")?;
        }
        writeln!(f, "{rule}")?;
        for (label, n) in rows_total {
            writeln!(f, "{label:<30} {n:>11}")?;
        }
        writeln!(f, "{rule}")?;
        writeln!(f, "{:<30} {:>11}", "Iterations", self.iterations)
    }
}

/// Subject → objects for each predicate of a graph snapshot.
struct PredicateIndex {
    forward: HashMap<PredicateId, HashMap<EntityId, Vec<EntityId>>>,
}

impl PredicateIndex {
    fn build(graph: &Graph) -> Self {
        let mut forward: HashMap<PredicateId, HashMap<EntityId, Vec<EntityId>>> = HashMap::new();
        for t in graph.triples() {
            forward
                .entry(t.predicate)
                .or_default()
                .entry(t.subject)
                .or_default()
                .push(t.object);
        }
        PredicateIndex { forward }
    }

    fn edges(&self, p: PredicateId) -> impl Iterator<Item = (EntityId, EntityId)> + '_ {
        self.forward
            .get(&p)
            .into_iter()
            .flat_map(|m| m.iter().flat_map(|(&s, os)| os.iter().map(move |&o| (s, o))))
    }

    fn objects(&self, p: PredicateId, s: EntityId) -> &[EntityId] {
        self.forward
            .get(&p)
            .and_then(|m| m.get(&s))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

fn derive(rule: Rule, graph: &Graph, index: &PredicateIndex, tbox: &TBox) -> BTreeSet<Triple> {
    let mut out = BTreeSet::new();
    let mut emit = |t: Triple| {
        if !graph.contains(&t) {
            out.insert(t);
        }
    };
    match rule {
        Rule::Subproperty => {
            for &(sub, sup) in &tbox.subproperty {
                for (x, y) in index.edges(sub) {
                    emit(Triple::new(x, sup, y));
                }
            }
        }
        Rule::Inverse => {
            for &(p, q) in &tbox.inverse {
                for (x, y) in index.edges(p) {
                    emit(Triple::new(y, q, x));
                }
                for (x, y) in index.edges(q) {
                    emit(Triple::new(y, p, x));
                }
            }
        }
        Rule::Transitive => {
            for &p in &tbox.transitive {
                for (x, y) in index.edges(p) {
                    for &z in index.objects(p, y) {
                        emit(Triple::new(x, p, z));
                    }
                }
            }
        }
        Rule::Symmetric => {
            for &p in &tbox.symmetric {
                for (x, y) in index.edges(p) {
                    emit(Triple::new(y, p, x));
                }
            }
        }
    }
    out
}

/// One application of `rule` to `graph`: the triples it derives that are not
/// yet present.
pub fn apply_rule(rule: Rule, graph: &Graph, tbox: &TBox) -> BTreeSet<Triple> {
    derive(rule, graph, &PredicateIndex::build(graph), tbox)
}

pub fn apply_symmetric(graph: &Graph, tbox: &TBox) -> BTreeSet<Triple> {
    apply_rule(Rule::Symmetric, graph, tbox)
}

/// A single join step; the fixpoint loop completes the closure.
pub fn apply_transitive(graph: &Graph, tbox: &TBox) -> BTreeSet<Triple> {
    apply_rule(Rule::Transitive, graph, tbox)
}

pub fn apply_inverse(graph: &Graph, tbox: &TBox) -> BTreeSet<Triple> {
    apply_rule(Rule::Inverse, graph, tbox)
}

pub fn apply_subproperty(graph: &Graph, tbox: &TBox) -> BTreeSet<Triple> {
    apply_rule(Rule::Subproperty, graph, tbox)
}

/// Saturates `graph` under `tbox` using the default rule order.
pub fn materialize(graph: Graph, tbox: &TBox) -> (Graph, MaterializationReport) {
    materialize_with_order(graph, tbox, Rule::ORDER)
}

/// Same as [`materialize`] with a caller-chosen attribution order. The final
/// triple set does not depend on the order.
pub fn materialize_with_order(
    mut graph: Graph,
    tbox: &TBox,
    order: [Rule; 4],
) -> (Graph, MaterializationReport) {
    let total_before = graph.triple_count();
    let mut added_by_rule = RuleCounts::default();
    let mut per_iteration_added = Vec::new();

    loop {
        let index = PredicateIndex::build(&graph);
        let mut seen: HashSet<Triple> = HashSet::new();
        let mut batch: Vec<Triple> = Vec::new();
        for rule in order {
            let mut credited = 0;
            for t in derive(rule, &graph, &index, tbox) {
                if seen.insert(t) {
                    batch.push(t);
                    credited += 1;
                }
            }
            added_by_rule.add(rule, credited);
        }
        if batch.is_empty() {
            break;
        }
        for t in &batch {
            graph.insert(*t);
        }
        log::debug!(
            "materialization iteration {} added {} triples",
            per_iteration_added.len() + 1,
            batch.len()
        );
        per_iteration_added.push(batch.len());
    }

    let mut tbox_axioms = RuleCounts::default();
    tbox_axioms.add(Rule::Subproperty, tbox.subproperty.len());
    tbox_axioms.add(Rule::Inverse, tbox.inverse.len());
    tbox_axioms.add(Rule::Transitive, tbox.transitive.len());
    tbox_axioms.add(Rule::Symmetric, tbox.symmetric.len());

    let added_total = added_by_rule.total();
    let report = MaterializationReport {
        iterations: per_iteration_added.len(),
        added_by_rule,
        added_total,
        total_before,
        total_after: graph.triple_count(),
        per_iteration_added,
        tbox_axioms,
    };
    (graph, report)
}
