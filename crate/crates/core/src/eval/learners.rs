//! k-NN, Gaussian naive Bayes and least-squares regression.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::EvalError;

fn sq_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Indices and Euclidean distances of the `k` nearest rows, nearest first.
/// Equal distances keep row order. `k` is capped at the training size.
pub fn nearest(train: &[&[f64]], query: &[f64], k: usize) -> Result<Vec<(usize, f64)>, EvalError> {
    if train.is_empty() {
        return Err(EvalError::EmptyTrainingSet);
    }
    let mut dists: Vec<(usize, f64)> = train
        .iter()
        .enumerate()
        .map(|(i, row)| (i, sq_distance(row, query)))
        .collect();
    dists.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    dists.truncate(k.max(1).min(train.len()));
    Ok(dists.into_iter().map(|(i, d)| (i, d.sqrt())).collect())
}

/// Majority label of the `k` nearest neighbours. Vote ties go to the label
/// with the smallest summed distance, then to the lexicographically smallest.
pub fn knn_classify<L: AsRef<str>>(
    train: &[&[f64]],
    labels: &[L],
    query: &[f64],
    k: usize,
) -> Result<String, EvalError> {
    let neighbours = nearest(train, query, k)?;
    let mut tally: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
    for (i, d) in neighbours {
        let e = tally.entry(labels[i].as_ref()).or_default();
        e.0 += 1;
        e.1 += d;
    }
    let best = tally
        .into_iter()
        .reduce(|best, cand| {
            let better = cand.1 .0 > best.1 .0 || (cand.1 .0 == best.1 .0 && cand.1 .1 < best.1 .1);
            if better {
                cand
            } else {
                best
            }
        })
        .expect("at least one neighbour");
    Ok(best.0.to_owned())
}

/// Mean target of the `k` nearest neighbours.
pub fn knn_regress(train: &[&[f64]], targets: &[f64], query: &[f64], k: usize) -> Result<f64, EvalError> {
    let neighbours = nearest(train, query, k)?;
    Ok(neighbours.iter().map(|&(i, _)| targets[i]).sum::<f64>() / neighbours.len() as f64)
}

pub const NB_VARIANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone)]
struct ClassModel {
    log_prior: f64,
    means: Vec<f64>,
    variances: Vec<f64>,
}

/// Gaussian naive Bayes with per-class, per-dimension normal densities.
#[derive(Debug, Clone)]
pub struct GaussianNb {
    classes: BTreeMap<String, ClassModel>,
}

impl GaussianNb {
    /// Every class needs at least two training points.
    pub fn fit<L: AsRef<str>>(train: &[&[f64]], labels: &[L]) -> Result<Self, EvalError> {
        if train.is_empty() {
            return Err(EvalError::EmptyTrainingSet);
        }
        let dim = train[0].len();
        let mut rows: BTreeMap<&str, Vec<&[f64]>> = BTreeMap::new();
        for (row, label) in train.iter().zip(labels) {
            rows.entry(label.as_ref()).or_default().push(row);
        }
        let n = train.len() as f64;
        let mut classes = BTreeMap::new();
        for (label, members) in rows {
            if members.len() < 2 {
                return Err(EvalError::DegenerateClass(label.to_owned()));
            }
            let m = members.len() as f64;
            let means: Vec<f64> = (0..dim)
                .map(|j| members.iter().map(|r| r[j]).sum::<f64>() / m)
                .collect();
            let variances = (0..dim)
                .map(|j| {
                    let v = members.iter().map(|r| (r[j] - means[j]).powi(2)).sum::<f64>() / m;
                    v.max(NB_VARIANCE_FLOOR)
                })
                .collect();
            classes.insert(
                label.to_owned(),
                ClassModel {
                    log_prior: (m / n).ln(),
                    means,
                    variances,
                },
            );
        }
        Ok(GaussianNb { classes })
    }

    /// Unnormalized log posterior per class, in label order.
    pub fn log_joint(&self, query: &[f64]) -> Vec<(&str, f64)> {
        let ln_2pi = (2.0 * std::f64::consts::PI).ln();
        self.classes
            .iter()
            .map(|(label, c)| {
                let ll: f64 = query
                    .iter()
                    .zip(c.means.iter().zip(&c.variances))
                    .map(|(x, (mu, var))| -0.5 * (ln_2pi + var.ln() + (x - mu).powi(2) / var))
                    .sum();
                (label.as_str(), c.log_prior + ll)
            })
            .collect()
    }

    pub fn posteriors(&self, query: &[f64]) -> Vec<(&str, f64)> {
        let joint = self.log_joint(query);
        let max = joint.iter().map(|j| j.1).fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = joint.iter().map(|j| (j.1 - max).exp()).sum();
        joint.into_iter().map(|(l, v)| (l, (v - max).exp() / z)).collect()
    }

    /// Highest posterior; exact ties go to the lexicographically smallest
    /// label.
    pub fn predict(&self, query: &[f64]) -> String {
        let joint = self.log_joint(query);
        let mut best = joint[0];
        for cand in &joint[1..] {
            if cand.1 > best.1 {
                best = *cand;
            }
        }
        best.0.to_owned()
    }
}

pub fn gaussian_nb<L: AsRef<str>>(train: &[&[f64]], labels: &[L], query: &[f64]) -> Result<String, EvalError> {
    Ok(GaussianNb::fit(train, labels)?.predict(query))
}

/// Ordinary least squares with intercept, solved through the SVD. Singular
/// directions are dropped, which yields the minimum-norm solution.
#[derive(Debug, Clone)]
pub struct LinearRegression {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
}

impl LinearRegression {
    pub fn fit(train: &[&[f64]], targets: &[f64]) -> Result<Self, EvalError> {
        if train.is_empty() {
            return Err(EvalError::EmptyTrainingSet);
        }
        let n = train.len();
        let p = train[0].len() + 1;
        let design = DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { train[i][j - 1] });
        let y = DVector::from_column_slice(targets);
        let svd = design.svd(true, true);
        let max_sv = svd.singular_values.max();
        let tol = max_sv * n.max(p) as f64 * f64::EPSILON;
        let beta = svd.solve(&y, tol).map_err(|e| EvalError::Numerical(e.to_owned()))?;
        Ok(LinearRegression {
            intercept: beta[0],
            coefficients: beta.iter().skip(1).copied().collect(),
        })
    }

    pub fn predict(&self, query: &[f64]) -> f64 {
        self.intercept + self.coefficients.iter().zip(query).map(|(b, x)| b * x).sum::<f64>()
    }
}

pub fn linreg_fit_predict(train: &[&[f64]], targets: &[f64], queries: &[&[f64]]) -> Result<Vec<f64>, EvalError> {
    let model = LinearRegression::fit(train, targets)?;
    Ok(queries.iter().map(|q| model.predict(q)).collect())
}

pub fn rmse(predicted: &[f64], actual: &[f64]) -> f64 {
    let se: f64 = predicted.iter().zip(actual).map(|(p, a)| (p - a).powi(2)).sum();
    (se / predicted.len() as f64).sqrt()
}
