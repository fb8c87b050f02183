//! Cross-validation fold assignment.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::EvalError;

/// Splits `0..n` into `k` disjoint folds whose sizes differ by at most one.
///
/// With `labels`, records are dealt label by label onto a single rotating
/// fold pointer, so each label's per-fold counts also differ by at most one.
pub fn kfold_split<L: Ord>(
    n: usize,
    k: usize,
    seed: u64,
    labels: Option<&[L]>,
) -> Result<Vec<Vec<usize>>, EvalError> {
    if k < 2 || n < k {
        return Err(EvalError::TooFewRecords {
            needed: k.max(2),
            got: n,
        });
    }
    if let Some(labels) = labels {
        assert_eq!(labels.len(), n, "one label per record");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups: Vec<Vec<usize>> = match labels {
        None => vec![(0..n).collect()],
        Some(labels) => {
            let mut by_label: BTreeMap<&L, Vec<usize>> = BTreeMap::new();
            for (i, l) in labels.iter().enumerate() {
                by_label.entry(l).or_default().push(i);
            }
            by_label.into_values().collect()
        }
    };
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for mut group in groups {
        group.shuffle(&mut rng);
        for i in group {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}
