//! Dictionary-encoded triple store and T-box axiom parsing.
//!
//! The input grammar is a strict subset of N-Triples: every non-blank,
//! non-comment line is `<iri> <iri> <iri> .` or `<iri> <iri> "literal" .`.
//! Literal-object triples are kept aside and never enter the adjacency.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};

use sha2::{Digest, Sha256};
use thiserror::Error;

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const OWL_SYMMETRIC: &str = "http://www.w3.org/2002/07/owl#SymmetricProperty";
pub const OWL_TRANSITIVE: &str = "http://www.w3.org/2002/07/owl#TransitiveProperty";
pub const OWL_INVERSE_OF: &str = "http://www.w3.org/2002/07/owl#inverseOf";
pub const RDFS_SUBPROPERTY_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}, column {column}: malformed triple: {reason}")]
    MalformedTriple {
        line: usize,
        column: usize,
        reason: String,
    },
    #[error("line {line}: unrecognized T-box axiom: {reason}")]
    UnrecognizedAxiom { line: usize, reason: String },
    #[error("invalid IRI {0:?}")]
    InvalidIri(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An absolute IRI, stored without angle brackets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(text: impl Into<String>) -> Result<Self, GraphError> {
        let text = text.into();
        if text.is_empty() || text.chars().any(|c| c.is_whitespace() || c == '<' || c == '>') {
            return Err(GraphError::InvalidIri(text));
        }
        Ok(Iri(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Object {
    Iri(Iri),
    Literal(String),
}

/// One syntactically valid line of a triple file.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParsedTriple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Object,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredicateId(pub u32);

impl EntityId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl PredicateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A resource triple in id space. Ordering is (subject, predicate, object).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: EntityId,
    pub predicate: PredicateId,
    pub object: EntityId,
}

impl Triple {
    pub fn new(subject: EntityId, predicate: PredicateId, object: EntityId) -> Self {
        Triple {
            subject,
            predicate,
            object,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LiteralTriple {
    pub subject: Iri,
    pub predicate: Iri,
    pub literal: String,
}

/// Bidirectional string ↔ dense id map.
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    terms: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Dictionary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, term: &str) -> Option<u32> {
        self.ids.get(term).copied()
    }

    pub fn term(&self, id: u32) -> &str {
        &self.terms[id as usize]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    fn intern(&mut self, term: &str) -> u32 {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = u32::try_from(self.terms.len()).expect("dictionary overflow");
        self.terms.push(term.to_owned());
        self.ids.insert(term.to_owned(), id);
        id
    }

    /// Reassigns ids in lexicographic term order; returns old id → new id.
    fn sort(&mut self) -> Vec<u32> {
        let mut order: Vec<u32> = (0..self.terms.len() as u32).collect();
        order.sort_by(|&a, &b| self.terms[a as usize].cmp(&self.terms[b as usize]));
        let mut remap = vec![0u32; order.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let mut terms = std::mem::take(&mut self.terms);
        let mut sorted = vec![String::new(); terms.len()];
        for (old, term) in terms.drain(..).enumerate() {
            sorted[remap[old] as usize] = term;
        }
        self.terms = sorted;
        self.ids = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        remap
    }
}

/// Directed multigraph over interned entities and predicates with set
/// semantics on (s, p, o).
#[derive(Debug, Clone, Default)]
pub struct Graph {
    entities: Dictionary,
    predicates: Dictionary,
    adjacency: Vec<Vec<(PredicateId, EntityId)>>,
    edges: HashSet<Triple>,
    literals: Vec<LiteralTriple>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn predicate_count(&self) -> usize {
        self.predicates.len()
    }

    pub fn triple_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn entities(&self) -> &Dictionary {
        &self.entities
    }

    pub fn predicates(&self) -> &Dictionary {
        &self.predicates
    }

    pub fn entity_id(&self, iri: &str) -> Option<EntityId> {
        self.entities.get(iri).map(EntityId)
    }

    pub fn predicate_id(&self, iri: &str) -> Option<PredicateId> {
        self.predicates.get(iri).map(PredicateId)
    }

    pub fn entity_iri(&self, id: EntityId) -> &str {
        self.entities.term(id.0)
    }

    pub fn predicate_iri(&self, id: PredicateId) -> &str {
        self.predicates.term(id.0)
    }

    pub fn intern_entity(&mut self, iri: &str) -> EntityId {
        let id = EntityId(self.entities.intern(iri));
        if self.adjacency.len() < self.entities.len() {
            self.adjacency.resize_with(self.entities.len(), Vec::new);
        }
        id
    }

    pub fn intern_predicate(&mut self, iri: &str) -> PredicateId {
        PredicateId(self.predicates.intern(iri))
    }

    /// Inserts an id-space triple; returns false if it was already present.
    ///
    /// Panics if an id is outside its dictionary.
    pub fn insert(&mut self, triple: Triple) -> bool {
        assert!(triple.subject.index() < self.entities.len());
        assert!(triple.object.index() < self.entities.len());
        assert!(triple.predicate.index() < self.predicates.len());
        if !self.edges.insert(triple) {
            return false;
        }
        self.adjacency[triple.subject.index()].push((triple.predicate, triple.object));
        true
    }

    pub fn insert_iris(&mut self, subject: &str, predicate: &str, object: &str) -> bool {
        let s = self.intern_entity(subject);
        let p = self.intern_predicate(predicate);
        let o = self.intern_entity(object);
        self.insert(Triple::new(s, p, o))
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.edges.contains(triple)
    }

    pub fn out_edges(&self, entity: EntityId) -> &[(PredicateId, EntityId)] {
        &self.adjacency[entity.index()]
    }

    pub fn out_degree(&self, entity: EntityId) -> usize {
        self.adjacency[entity.index()].len()
    }

    /// All resource triples in adjacency order.
    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(s, edges)| {
            edges
                .iter()
                .map(move |&(p, o)| Triple::new(EntityId(s as u32), p, o))
        })
    }

    pub fn sorted_triples(&self) -> Vec<Triple> {
        let mut all: Vec<Triple> = self.triples().collect();
        all.sort_unstable();
        all
    }

    /// Resource triples as IRI strings, sorted lexicographically.
    pub fn iri_triples(&self) -> BTreeSet<(String, String, String)> {
        self.triples()
            .map(|t| {
                (
                    self.entity_iri(t.subject).to_owned(),
                    self.predicate_iri(t.predicate).to_owned(),
                    self.entity_iri(t.object).to_owned(),
                )
            })
            .collect()
    }

    pub fn literals(&self) -> &[LiteralTriple] {
        &self.literals
    }

    /// SHA-256 hex digest of the sorted resource-triple lines. Independent of
    /// id assignment, so equal triple sets always share a fingerprint.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for (s, p, o) in self.iri_triples() {
            hasher.update(format!("<{s}> <{p}> <{o}> .\n").as_bytes());
        }
        hex::encode(hasher.finalize())
    }

    /// Relabels entities and predicates in IRI order and sorts adjacency
    /// lists, so ids depend only on the triple set.
    fn canonicalize(&mut self) {
        let entity_map = self.entities.sort();
        let predicate_map = self.predicates.sort();
        let mut adjacency = vec![Vec::new(); self.entities.len()];
        for (s, edges) in self.adjacency.drain(..).enumerate() {
            let s = entity_map[s] as usize;
            adjacency[s] = edges
                .into_iter()
                .map(|(p, o)| {
                    (
                        PredicateId(predicate_map[p.index()]),
                        EntityId(entity_map[o.index()]),
                    )
                })
                .collect();
            adjacency[s].sort_unstable();
        }
        self.adjacency = adjacency;
        self.edges = self.triples().collect();
        self.literals.sort();
    }
}

/// The four supported T-box rule families.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TBox {
    pub symmetric: BTreeSet<PredicateId>,
    pub transitive: BTreeSet<PredicateId>,
    /// Unordered pairs stored with the smaller id first.
    pub inverse: BTreeSet<(PredicateId, PredicateId)>,
    /// `(sub, super)`, never with `sub == super`.
    pub subproperty: BTreeSet<(PredicateId, PredicateId)>,
}

impl TBox {
    pub fn is_empty(&self) -> bool {
        self.symmetric.is_empty()
            && self.transitive.is_empty()
            && self.inverse.is_empty()
            && self.subproperty.is_empty()
    }

    pub fn add_inverse(&mut self, p: PredicateId, q: PredicateId) {
        self.inverse.insert((p.min(q), p.max(q)));
    }

    pub fn add_subproperty(&mut self, sub: PredicateId, sup: PredicateId) -> bool {
        if sub == sup {
            return false;
        }
        self.subproperty.insert((sub, sup));
        true
    }
}

fn malformed(line: usize, column: usize, reason: impl Into<String>) -> GraphError {
    GraphError::MalformedTriple {
        line,
        column,
        reason: reason.into(),
    }
}

struct LineCursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> LineCursor<'a> {
    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn error(&self, reason: impl Into<String>) -> GraphError {
        malformed(self.line, self.column(), reason)
    }

    fn skip_ws(&mut self) -> usize {
        let rest = &self.text[self.pos..];
        let trimmed = rest.trim_start();
        let skipped = rest.len() - trimmed.len();
        self.pos += skipped;
        skipped
    }

    fn expect_ws(&mut self) -> Result<(), GraphError> {
        if self.skip_ws() == 0 {
            return Err(self.error("expected whitespace"));
        }
        Ok(())
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn iri(&mut self) -> Result<Iri, GraphError> {
        if self.peek() != Some('<') {
            return Err(self.error("expected '<'"));
        }
        let start = self.pos + 1;
        let Some(len) = self.text[start..].find('>') else {
            return Err(self.error("unterminated IRI"));
        };
        let body = &self.text[start..start + len];
        let iri = Iri::new(body).map_err(|_| self.error(format!("invalid IRI <{body}>")))?;
        self.pos = start + len + 1;
        Ok(iri)
    }

    fn literal(&mut self) -> Result<String, GraphError> {
        let start = self.pos + 1;
        let Some(len) = self.text[start..].find('"') else {
            return Err(self.error("unterminated literal"));
        };
        self.pos = start + len + 1;
        Ok(self.text[start..start + len].to_owned())
    }
}

/// Parses one line. Returns `Ok(None)` for blank and comment lines.
pub fn parse_line(text: &str, line: usize) -> Result<Option<ParsedTriple>, GraphError> {
    let trimmed = text.trim();
    if trimmed.is_empty() || text.starts_with('#') {
        return Ok(None);
    }
    let mut cur = LineCursor { text, pos: 0, line };
    cur.skip_ws();
    let subject = cur.iri()?;
    cur.expect_ws()?;
    let predicate = cur.iri()?;
    cur.expect_ws()?;
    let object = match cur.peek() {
        Some('<') => Object::Iri(cur.iri()?),
        Some('"') => Object::Literal(cur.literal()?),
        _ => return Err(cur.error("expected IRI or literal object")),
    };
    cur.skip_ws();
    if cur.peek() != Some('.') {
        return Err(cur.error("expected terminating '.'"));
    }
    cur.pos += 1;
    cur.skip_ws();
    if cur.pos != text.len() {
        return Err(cur.error("trailing characters after '.'"));
    }
    Ok(Some(ParsedTriple {
        subject,
        predicate,
        object,
    }))
}

/// Iterates the parsed triples of a stream together with their line numbers.
pub fn parse_triples<R: BufRead>(
    input: R,
) -> impl Iterator<Item = Result<(usize, ParsedTriple), GraphError>> {
    input
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Err(e) => Some(Err(GraphError::Io(e))),
            Ok(text) => parse_line(&text, i + 1)
                .transpose()
                .map(|r| r.map(|t| (i + 1, t))),
        })
}

/// Reads a triple file into a graph with canonical (IRI-sorted) ids.
pub fn parse_graph<R: BufRead>(input: R) -> Result<Graph, GraphError> {
    let mut graph = Graph::new();
    let mut literals = HashSet::new();
    for item in parse_triples(input) {
        let (_, triple) = item?;
        match triple.object {
            Object::Iri(o) => {
                graph.insert_iris(triple.subject.as_str(), triple.predicate.as_str(), o.as_str());
            }
            Object::Literal(literal) => {
                let lt = LiteralTriple {
                    subject: triple.subject,
                    predicate: triple.predicate,
                    literal,
                };
                if literals.insert(lt.clone()) {
                    graph.literals.push(lt);
                }
            }
        }
    }
    graph.canonicalize();
    Ok(graph)
}

pub fn parse_graph_str(text: &str) -> Result<Graph, GraphError> {
    parse_graph(text.as_bytes())
}

/// Reads T-box declarations, registering any predicate the graph does not
/// know yet.
pub fn parse_tbox<R: BufRead>(input: R, graph: &mut Graph) -> Result<TBox, GraphError> {
    let mut tbox = TBox::default();
    for item in parse_triples(input) {
        let (line, triple) = item?;
        let object = match &triple.object {
            Object::Iri(o) => o.as_str(),
            Object::Literal(l) => {
                return Err(GraphError::UnrecognizedAxiom {
                    line,
                    reason: format!("literal object \"{l}\""),
                })
            }
        };
        let subject = triple.subject.as_str();
        match triple.predicate.as_str() {
            RDF_TYPE if object == OWL_SYMMETRIC => {
                let p = graph.intern_predicate(subject);
                tbox.symmetric.insert(p);
            }
            RDF_TYPE if object == OWL_TRANSITIVE => {
                let p = graph.intern_predicate(subject);
                tbox.transitive.insert(p);
            }
            OWL_INVERSE_OF => {
                let p = graph.intern_predicate(subject);
                let q = graph.intern_predicate(object);
                tbox.add_inverse(p, q);
            }
            RDFS_SUBPROPERTY_OF => {
                if subject == object {
                    return Err(GraphError::UnrecognizedAxiom {
                        line,
                        reason: format!("<{subject}> declared a subproperty of itself"),
                    });
                }
                let sub = graph.intern_predicate(subject);
                let sup = graph.intern_predicate(object);
                tbox.add_subproperty(sub, sup);
            }
            other => {
                return Err(GraphError::UnrecognizedAxiom {
                    line,
                    reason: format!("<{subject}> <{other}> <{object}>"),
                })
            }
        }
    }
    Ok(tbox)
}

pub fn parse_tbox_str(text: &str, graph: &mut Graph) -> Result<TBox, GraphError> {
    parse_tbox(text.as_bytes(), graph)
}

/// Writes resource triples sorted by (s, p, o) id, then literal triples.
pub fn serialize_graph<W: Write>(graph: &Graph, mut out: W) -> std::io::Result<()> {
    for t in graph.sorted_triples() {
        writeln!(
            out,
            "<{}> <{}> <{}> .",
            graph.entity_iri(t.subject),
            graph.predicate_iri(t.predicate),
            graph.entity_iri(t.object)
        )?;
    }
    for lt in &graph.literals {
        writeln!(out, "{} {} \"{}\" .", lt.subject, lt.predicate, lt.literal)?;
    }
    Ok(())
}

pub fn serialize_graph_string(graph: &Graph) -> String {
    let mut buf = Vec::new();
    serialize_graph(graph, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("graph terms are UTF-8")
}
