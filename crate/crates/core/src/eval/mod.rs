//! Downstream evaluation of entity embeddings: classification, regression,
//! entity relatedness/similarity ranking and document similarity.

mod datasets;
mod folds;
mod learners;
mod stats;
mod tasks;

use std::fmt;

use thiserror::Error;

pub use datasets::{DocSimDataset, LabeledDataset, RankingDataset, RankingGroup, RegressionDataset};
pub use folds::kfold_split;
pub use learners::{
    gaussian_nb, knn_classify, knn_regress, linreg_fit_predict, nearest, rmse, GaussianNb, LinearRegression,
    NB_VARIANCE_FLOOR,
};
pub use stats::{average_ranks, harmonic_mean, mean, pearson, spearman};
pub use tasks::{
    document_similarity, run_classification, run_docsim, run_entity_ranking, run_regression, KNN_K,
};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("too few records: need at least {needed}, got {got}")]
    TooFewRecords { needed: usize, got: usize },
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("class {0:?} has fewer than two training points")]
    DegenerateClass(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("correlation undefined: one side has zero variance")]
    ZeroVariance,
    #[error("main entity {0:?} is not in the embedding vocabulary")]
    UnknownMainEntity(String),
    #[error("document has no entities in the embedding vocabulary")]
    EmptyDocument,
    #[error("line {line}: malformed dataset: {reason}")]
    MalformedDataset { line: usize, reason: String },
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One cell of a report table. `None` marks a learner that is part of the
/// protocol but not implemented here ("n/a").
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub learner: String,
    pub name: String,
    pub value: Option<f64>,
}

impl Metric {
    pub fn new(learner: &str, name: &str, value: Option<f64>) -> Self {
        Metric {
            learner: learner.to_owned(),
            name: name.to_owned(),
            value,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub task: String,
    pub model: String,
    pub dataset: String,
    pub folds: Option<usize>,
    pub seed: Option<u64>,
    /// Dataset entities (or gold pairs) skipped because the vocabulary lacks them.
    pub dropped: usize,
    pub metrics: Vec<Metric>,
    /// Per-group or per-pair values, e.g. `(main entity, spearman)`.
    pub details: Vec<(String, f64)>,
}

impl EvalReport {
    pub fn metric(&self, learner: &str, name: &str) -> Option<f64> {
        self.metrics
            .iter()
            .find(|m| m.learner == learner && m.name == name)
            .and_then(|m| m.value)
    }

    pub fn key_values(&self) -> String {
        let mut out = format!(
            "task={}\nmodel={}\ndataset={}\ndropped={}\n",
            self.task, self.model, self.dataset, self.dropped
        );
        if let Some(k) = self.folds {
            out.push_str(&format!("folds={k}\n"));
        }
        if let Some(s) = self.seed {
            out.push_str(&format!("seed={s}\n"));
        }
        for m in &self.metrics {
            match m.value {
                Some(v) => out.push_str(&format!("{}_{}={v}\n", m.learner, m.name)),
                None => out.push_str(&format!("{}_{}=n/a\n", m.learner, m.name)),
            }
        }
        out
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} on {} ({})", self.task, self.dataset, self.model)?;
        let width = self
            .metrics
            .iter()
            .map(|m| m.learner.len())
            .chain(self.details.iter().map(|d| d.0.len()))
            .max()
            .unwrap_or(0)
            .max(7);
        writeln!(f, "{:<width$}  {:<12}  {:>10}", "learner", "metric", "value")?;
        for m in &self.metrics {
            let v = m.value.map_or("n/a".to_owned(), |v| format!("{v:.4}"));
            writeln!(f, "{:<width$}  {:<12}  {:>10}", m.learner, m.name, v)?;
        }
        if !self.details.is_empty() {
            writeln!(f)?;
            for (k, v) in &self.details {
                writeln!(f, "{k:<width$}  {v:>10.4}")?;
            }
        }
        Ok(())
    }
}
