//! Evaluation dataset types and their TSV readers.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::BufRead;

use super::EvalError;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub name: String,
    pub records: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionDataset {
    pub name: String,
    pub records: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingGroup {
    pub main: String,
    /// Candidates in gold order, most related first.
    pub candidates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingDataset {
    pub name: String,
    pub groups: Vec<RankingGroup>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocSimDataset {
    pub name: String,
    pub documents: BTreeMap<String, BTreeSet<String>>,
    pub gold: Vec<(String, String, f64)>,
}

fn invalid(reason: impl Into<String>) -> EvalError {
    EvalError::InvalidDataset(reason.into())
}

fn malformed(line: usize, reason: impl Into<String>) -> EvalError {
    EvalError::MalformedDataset {
        line,
        reason: reason.into(),
    }
}

/// Entity IRIs may be written with or without angle brackets.
fn entity(field: &str) -> String {
    let f = field.trim();
    f.strip_prefix('<')
        .and_then(|s| s.strip_suffix('>'))
        .unwrap_or(f)
        .to_owned()
}

fn numbered_lines<R: BufRead>(input: R) -> Result<Vec<(usize, String)>, EvalError> {
    input
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(EvalError::from))
        .collect()
}

fn check_unique<'a>(entities: impl Iterator<Item = &'a String>) -> Result<(), EvalError> {
    let mut seen = HashSet::new();
    for e in entities {
        if !seen.insert(e) {
            return Err(invalid(format!("duplicate entity {e}")));
        }
    }
    Ok(())
}

impl LabeledDataset {
    pub fn new(name: impl Into<String>, records: Vec<(String, String)>) -> Result<Self, EvalError> {
        check_unique(records.iter().map(|r| &r.0))?;
        let labels: BTreeSet<&String> = records.iter().map(|r| &r.1).collect();
        if labels.len() < 2 {
            return Err(invalid("classification needs at least two distinct labels"));
        }
        Ok(LabeledDataset {
            name: name.into(),
            records,
        })
    }

    /// `entity<TAB>label` with a header row.
    pub fn read<R: BufRead>(input: R, name: &str) -> Result<Self, EvalError> {
        let mut records = Vec::new();
        for (line, text) in numbered_lines(input)?.into_iter().skip(1) {
            if text.trim().is_empty() {
                continue;
            }
            let (e, label) = text
                .split_once('\t')
                .ok_or_else(|| malformed(line, "expected entity<TAB>label"))?;
            records.push((entity(e), label.trim().to_owned()));
        }
        Self::new(name, records)
    }
}

impl RegressionDataset {
    pub fn new(name: impl Into<String>, records: Vec<(String, f64)>) -> Result<Self, EvalError> {
        check_unique(records.iter().map(|r| &r.0))?;
        if records.iter().any(|r| !r.1.is_finite()) {
            return Err(invalid("regression targets must be finite"));
        }
        Ok(RegressionDataset {
            name: name.into(),
            records,
        })
    }

    /// `entity<TAB>value` with a header row.
    pub fn read<R: BufRead>(input: R, name: &str) -> Result<Self, EvalError> {
        let mut records = Vec::new();
        for (line, text) in numbered_lines(input)?.into_iter().skip(1) {
            if text.trim().is_empty() {
                continue;
            }
            let (e, value) = text
                .split_once('\t')
                .ok_or_else(|| malformed(line, "expected entity<TAB>value"))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| malformed(line, format!("bad number {value:?}")))?;
            records.push((entity(e), value));
        }
        Self::new(name, records)
    }
}

impl RankingDataset {
    pub fn new(name: impl Into<String>, groups: Vec<RankingGroup>) -> Result<Self, EvalError> {
        for g in &groups {
            if g.candidates.len() < 2 {
                return Err(invalid(format!("group {} has fewer than two candidates", g.main)));
            }
            check_unique(g.candidates.iter())?;
        }
        Ok(RankingDataset {
            name: name.into(),
            groups,
        })
    }

    /// Blocks of `main:<TAB><iri>` followed by candidates in gold order,
    /// separated by blank lines. Lines before the first block are a header.
    pub fn read<R: BufRead>(input: R, name: &str) -> Result<Self, EvalError> {
        let mut groups: Vec<RankingGroup> = Vec::new();
        let mut open = false;
        for (line, text) in numbered_lines(input)? {
            let t = text.trim();
            if t.is_empty() {
                open = false;
                continue;
            }
            if let Some(rest) = t.strip_prefix("main:") {
                groups.push(RankingGroup {
                    main: entity(rest),
                    candidates: Vec::new(),
                });
                open = true;
            } else if open {
                groups.last_mut().expect("open block").candidates.push(entity(t));
            } else if !groups.is_empty() {
                return Err(malformed(line, "candidate outside a main: block"));
            }
        }
        Self::new(name, groups)
    }
}

impl DocSimDataset {
    pub fn new(
        name: impl Into<String>,
        documents: BTreeMap<String, BTreeSet<String>>,
        gold: Vec<(String, String, f64)>,
    ) -> Result<Self, EvalError> {
        if let Some((id, _)) = documents.iter().find(|d| d.1.is_empty()) {
            return Err(invalid(format!("document {id} has no entities")));
        }
        for (a, b, score) in &gold {
            for id in [a, b] {
                if !documents.contains_key(id) {
                    return Err(invalid(format!("gold pair references unknown document {id}")));
                }
            }
            if !score.is_finite() {
                return Err(invalid("gold scores must be finite"));
            }
        }
        Ok(DocSimDataset {
            name: name.into(),
            documents,
            gold,
        })
    }

    /// `doc<TAB><id><TAB><iri>[,<iri>...]` and
    /// `gold<TAB><id1><TAB><id2><TAB><score>` lines; other first lines are a
    /// header.
    pub fn read<R: BufRead>(input: R, name: &str) -> Result<Self, EvalError> {
        let mut documents = BTreeMap::new();
        let mut gold = Vec::new();
        for (line, text) in numbered_lines(input)? {
            if text.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = text.split('\t').collect();
            match fields.as_slice() {
                ["doc", id, entities] => {
                    let set: BTreeSet<String> = entities
                        .split(',')
                        .filter(|e| !e.trim().is_empty())
                        .map(entity)
                        .collect();
                    if documents.insert(id.trim().to_owned(), set).is_some() {
                        return Err(malformed(line, format!("duplicate document {id}")));
                    }
                }
                ["gold", a, b, score] => {
                    let score: f64 = score
                        .trim()
                        .parse()
                        .map_err(|_| malformed(line, format!("bad score {score:?}")))?;
                    gold.push((a.trim().to_owned(), b.trim().to_owned(), score));
                }
                _ if line == 1 => {}
                _ => return Err(malformed(line, "expected a doc or gold line")),
            }
        }
        Self::new(name, documents, gold)
    }
}
