use std::collections::{BTreeMap, BTreeSet};

use crate::embed::{cosine, KeyedVectors};

use super::learners::{knn_classify, knn_regress, rmse, GaussianNb, LinearRegression};
use super::stats::{harmonic_mean, pearson, spearman};
use super::{kfold_split, DocSimDataset, EvalError, EvalReport, LabeledDataset, Metric, RankingDataset, RegressionDataset};

/// Neighbourhood size of the k-NN learners.
pub const KNN_K: usize = 3;

fn rows<'a>(vectors: &'a KeyedVectors, entities: impl Iterator<Item = &'a str>) -> Vec<&'a [f64]> {
    entities.map(|e| vectors.get(e).expect("filtered to vocabulary")).collect()
}

fn split_fold<T: Copy>(items: &[T], fold: &[usize]) -> (Vec<T>, Vec<T>) {
    let mut in_fold = vec![false; items.len()];
    for &i in fold {
        in_fold[i] = true;
    }
    let mut train = Vec::with_capacity(items.len() - fold.len());
    let mut test = Vec::with_capacity(fold.len());
    for (i, &x) in items.iter().enumerate() {
        if in_fold[i] {
            test.push(x);
        } else {
            train.push(x);
        }
    }
    (train, test)
}

/// Stratified k-fold accuracy of naive Bayes and k-NN (k = 3).
pub fn run_classification(
    vectors: &KeyedVectors,
    model: &str,
    dataset: &LabeledDataset,
    k_folds: usize,
    seed: u64,
) -> Result<EvalReport, EvalError> {
    let kept: Vec<&(String, String)> = dataset.records.iter().filter(|r| vectors.contains(&r.0)).collect();
    let dropped = dataset.records.len() - kept.len();
    if dropped > 0 {
        log::info!("{}: dropped {dropped} entities missing from the vocabulary", dataset.name);
    }
    let mut per_class: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &kept {
        *per_class.entry(r.1.as_str()).or_default() += 1;
    }
    if per_class.len() < 2 {
        return Err(EvalError::InvalidDataset(
            "fewer than two classes left after vocabulary filtering".into(),
        ));
    }
    if let Some((_, &n)) = per_class.iter().find(|c| *c.1 < 2) {
        return Err(EvalError::TooFewRecords { needed: 2, got: n });
    }

    let x = rows(vectors, kept.iter().map(|r| r.0.as_str()));
    let labels: Vec<&str> = kept.iter().map(|r| r.1.as_str()).collect();
    let folds = kfold_split(kept.len(), k_folds, seed, Some(&labels))?;
    let index: Vec<usize> = (0..kept.len()).collect();

    let (mut nb_acc, mut knn_acc) = (0.0, 0.0);
    for fold in &folds {
        let (train, test) = split_fold(&index, fold);
        let tx: Vec<&[f64]> = train.iter().map(|&i| x[i]).collect();
        let ty: Vec<&str> = train.iter().map(|&i| labels[i]).collect();

        // Classes with a single training point cannot be fitted by NB.
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for l in &ty {
            *counts.entry(l).or_default() += 1;
        }
        let (nb_x, nb_y): (Vec<&[f64]>, Vec<&str>) =
            tx.iter().zip(&ty).filter(|(_, l)| counts[*l] >= 2).map(|(r, l)| (*r, *l)).unzip();
        let nb = GaussianNb::fit(&nb_x, &nb_y)?;

        let (mut nb_hits, mut knn_hits) = (0usize, 0usize);
        for &i in &test {
            if nb.predict(x[i]) == labels[i] {
                nb_hits += 1;
            }
            if knn_classify(&tx, &ty, x[i], KNN_K)? == labels[i] {
                knn_hits += 1;
            }
        }
        nb_acc += nb_hits as f64 / test.len() as f64;
        knn_acc += knn_hits as f64 / test.len() as f64;
    }
    let k = folds.len() as f64;
    Ok(EvalReport {
        task: "classification".into(),
        model: model.into(),
        dataset: dataset.name.clone(),
        folds: Some(folds.len()),
        seed: Some(seed),
        dropped,
        metrics: vec![
            Metric::new("naive_bayes", "accuracy", Some(nb_acc / k)),
            Metric::new("knn", "accuracy", Some(knn_acc / k)),
            Metric::new("svm", "accuracy", None),
            Metric::new("c45", "accuracy", None),
        ],
        details: Vec::new(),
    })
}

/// Unstratified k-fold RMSE of linear regression and k-NN (k = 3), averaged
/// over folds.
pub fn run_regression(
    vectors: &KeyedVectors,
    model: &str,
    dataset: &RegressionDataset,
    k_folds: usize,
    seed: u64,
) -> Result<EvalReport, EvalError> {
    let kept: Vec<&(String, f64)> = dataset.records.iter().filter(|r| vectors.contains(&r.0)).collect();
    let dropped = dataset.records.len() - kept.len();
    if dropped > 0 {
        log::info!("{}: dropped {dropped} entities missing from the vocabulary", dataset.name);
    }
    let x = rows(vectors, kept.iter().map(|r| r.0.as_str()));
    let y: Vec<f64> = kept.iter().map(|r| r.1).collect();
    let folds = kfold_split::<u8>(kept.len(), k_folds, seed, None)?;
    let index: Vec<usize> = (0..kept.len()).collect();

    let (mut lr_rmse, mut knn_rmse) = (0.0, 0.0);
    for fold in &folds {
        let (train, test) = split_fold(&index, fold);
        let tx: Vec<&[f64]> = train.iter().map(|&i| x[i]).collect();
        let ty: Vec<f64> = train.iter().map(|&i| y[i]).collect();
        let actual: Vec<f64> = test.iter().map(|&i| y[i]).collect();
        let lr = LinearRegression::fit(&tx, &ty)?;
        let lr_pred: Vec<f64> = test.iter().map(|&i| lr.predict(x[i])).collect();
        let knn_pred = test
            .iter()
            .map(|&i| knn_regress(&tx, &ty, x[i], KNN_K))
            .collect::<Result<Vec<f64>, _>>()?;
        lr_rmse += rmse(&lr_pred, &actual);
        knn_rmse += rmse(&knn_pred, &actual);
    }
    let k = folds.len() as f64;
    Ok(EvalReport {
        task: "regression".into(),
        model: model.into(),
        dataset: dataset.name.clone(),
        folds: Some(folds.len()),
        seed: Some(seed),
        dropped,
        metrics: vec![
            Metric::new("linear_regression", "rmse", Some(lr_rmse / k)),
            Metric::new("knn", "rmse", Some(knn_rmse / k)),
            Metric::new("m5_rules", "rmse", None),
        ],
        details: Vec::new(),
    })
}

/// Ranks each group's candidates by cosine to the main entity and scores
/// the ranking with Spearman's ρ against the gold order. Serves both the
/// relatedness and the similarity task; `task` only labels the report.
pub fn run_entity_ranking(
    vectors: &KeyedVectors,
    model: &str,
    dataset: &RankingDataset,
    task: &str,
) -> Result<EvalReport, EvalError> {
    let mut dropped = 0;
    let mut details = Vec::new();
    for group in &dataset.groups {
        let main = vectors
            .get(&group.main)
            .ok_or_else(|| EvalError::UnknownMainEntity(group.main.clone()))?;
        let mut gold_rank = Vec::new();
        let mut neg_cos = Vec::new();
        for (pos, c) in group.candidates.iter().enumerate() {
            match vectors.get(c) {
                Some(v) => {
                    gold_rank.push((pos + 1) as f64);
                    neg_cos.push(-cosine(main, v));
                }
                None => dropped += 1,
            }
        }
        match spearman(&gold_rank, &neg_cos) {
            Ok(rho) => details.push((group.main.clone(), rho)),
            Err(e) => log::warn!("{}: group {} not scored: {e}", dataset.name, group.main),
        }
    }
    if dropped > 0 {
        log::info!("{}: dropped {dropped} candidates missing from the vocabulary", dataset.name);
    }
    let scored = details.len();
    let macro_avg = (scored > 0).then(|| details.iter().map(|d| d.1).sum::<f64>() / scored as f64);
    Ok(EvalReport {
        task: task.into(),
        model: model.into(),
        dataset: dataset.name.clone(),
        folds: None,
        seed: None,
        dropped,
        metrics: vec![
            Metric::new("cosine", "spearman", macro_avg),
            Metric::new("cosine", "groups_scored", Some(scored as f64)),
        ],
        details,
    })
}

/// Mean over both documents of each entity's best cosine match in the other
/// document. Entities missing from the vocabulary are ignored.
pub fn document_similarity<'a, I, J>(vectors: &KeyedVectors, d1: I, d2: J) -> Result<f64, EvalError>
where
    I: IntoIterator<Item = &'a str>,
    J: IntoIterator<Item = &'a str>,
{
    let filter = |d: BTreeSet<&'a str>| -> Vec<&[f64]> { d.into_iter().filter_map(|e| vectors.get(e)).collect() };
    let a = filter(d1.into_iter().collect());
    let b = filter(d2.into_iter().collect());
    if a.is_empty() || b.is_empty() {
        return Err(EvalError::EmptyDocument);
    }
    let best = |from: &[&[f64]], to: &[&[f64]]| -> f64 {
        from.iter()
            .map(|e| to.iter().map(|f| cosine(e, f)).fold(f64::NEG_INFINITY, f64::max))
            .sum()
    };
    Ok((best(&a, &b) + best(&b, &a)) / (a.len() + b.len()) as f64)
}

/// Pearson, Spearman and their harmonic mean between predicted document
/// similarities and gold scores.
pub fn run_docsim(vectors: &KeyedVectors, model: &str, dataset: &DocSimDataset) -> Result<EvalReport, EvalError> {
    let missing: BTreeSet<&String> = dataset
        .documents
        .values()
        .flatten()
        .filter(|e| !vectors.contains(e))
        .collect();
    let dropped = missing.len();
    if dropped > 0 {
        log::info!("{}: {dropped} document entities missing from the vocabulary", dataset.name);
    }
    let mut predicted = Vec::new();
    let mut gold = Vec::new();
    let mut details = Vec::new();
    for (a, b, score) in &dataset.gold {
        let da = dataset.documents[a].iter().map(String::as_str);
        let db = dataset.documents[b].iter().map(String::as_str);
        match document_similarity(vectors, da, db) {
            Ok(s) => {
                predicted.push(s);
                gold.push(*score);
                details.push((format!("{a}|{b}"), s));
            }
            Err(EvalError::EmptyDocument) => {
                log::warn!("{}: pair {a}/{b} skipped, a document has no known entity", dataset.name)
            }
            Err(e) => return Err(e),
        }
    }
    if predicted.len() < 2 {
        return Err(EvalError::TooFewRecords {
            needed: 2,
            got: predicted.len(),
        });
    }
    let r = pearson(&predicted, &gold)?;
    let rho = spearman(&predicted, &gold)?;
    Ok(EvalReport {
        task: "docsim".into(),
        model: model.into(),
        dataset: dataset.name.clone(),
        folds: None,
        seed: None,
        dropped,
        metrics: vec![
            Metric::new("cosine", "pearson", Some(r)),
            Metric::new("cosine", "spearman", Some(rho)),
            Metric::new("cosine", "harmonic_mean", Some(harmonic_mean(r, rho))),
        ],
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::RankingGroup;

    fn kv(entries: &[(&str, &[f64])]) -> KeyedVectors {
        let dim = entries[0].1.len();
        KeyedVectors::new(
            entries.iter().map(|e| e.0.to_owned()).collect(),
            dim,
            entries.iter().flat_map(|e| e.1.iter().copied()).collect(),
        )
    }

    #[test]
    fn docsim_constant_cosine() {
        let v = kv(&[("a", &[1.0, 0.0]), ("b", &[1.0, 0.0]), ("c", &[0.0, 1.0]), ("d", &[0.0, 2.0])]);
        let s = document_similarity(&v, ["a", "b"], ["c", "d"]).unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn docsim_identical_documents() {
        let v = kv(&[("a", &[1.0, 2.0]), ("b", &[-3.0, 1.0])]);
        let s = document_similarity(&v, ["a", "b"], ["a", "b"]).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn docsim_empty_after_filtering() {
        let v = kv(&[("a", &[1.0, 2.0])]);
        assert!(matches!(
            document_similarity(&v, ["a"], ["zz"]),
            Err(EvalError::EmptyDocument)
        ));
    }

    #[test]
    fn ranking_perfect_and_inverted() {
        let v = kv(&[
            ("m", &[1.0, 0.0]),
            ("close", &[1.0, 0.1]),
            ("mid", &[1.0, 1.0]),
            ("far", &[0.0, 1.0]),
        ]);
        let ds = RankingDataset::new(
            "r",
            vec![
                RankingGroup {
                    main: "m".into(),
                    candidates: vec!["close".into(), "mid".into(), "far".into()],
                },
                RankingGroup {
                    main: "m".into(),
                    candidates: vec!["far".into(), "close".into()],
                },
            ],
        )
        .unwrap();
        let report = run_entity_ranking(&v, "m", &ds, "relatedness").unwrap();
        assert!((report.details[0].1 - 1.0).abs() < 1e-12);
        assert!((report.details[1].1 + 1.0).abs() < 1e-12);
        assert!(report.metric("cosine", "spearman").unwrap().abs() < 1e-12);
    }

    #[test]
    fn ranking_unknown_main() {
        let v = kv(&[("a", &[1.0])]);
        let ds = RankingDataset::new(
            "r",
            vec![RankingGroup {
                main: "zz".into(),
                candidates: vec!["a".into(), "b".into()],
            }],
        )
        .unwrap();
        assert!(matches!(
            run_entity_ranking(&v, "m", &ds, "similarity"),
            Err(EvalError::UnknownMainEntity(_))
        ));
    }

    #[test]
    fn docsim_report_on_gold_equal_predictions() {
        let v = kv(&[("a", &[1.0, 0.0]), ("b", &[0.6, 0.8]), ("c", &[0.0, 1.0])]);
        let mut docs = BTreeMap::new();
        docs.insert("x".to_string(), BTreeSet::from(["a".to_string()]));
        docs.insert("y".to_string(), BTreeSet::from(["b".to_string()]));
        docs.insert("z".to_string(), BTreeSet::from(["c".to_string()]));
        // cos(a,b)=0.6, cos(a,c)=0, cos(b,c)=0.8
        let gold = vec![
            ("x".into(), "y".into(), 0.6),
            ("x".into(), "z".into(), 0.0),
            ("y".into(), "z".into(), 0.8),
        ];
        let ds = DocSimDataset::new("d", docs, gold).unwrap();
        let report = run_docsim(&v, "m", &ds).unwrap();
        for name in ["pearson", "spearman", "harmonic_mean"] {
            assert!((report.metric("cosine", name).unwrap() - 1.0).abs() < 1e-12, "{name}");
        }
    }
}
