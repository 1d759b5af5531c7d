use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::dataset::{ClassCounts, Label};

/// Test-set size as a fraction of the corpus or an absolute count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestSize {
    Fraction(f64),
    Count(usize),
}

impl Default for TestSize {
    fn default() -> Self {
        TestSize::Fraction(0.2)
    }
}

impl TestSize {
    /// Rows in the test split; a fraction rounds down.
    pub fn resolve(self, n: usize) -> Result<usize, EvalError> {
        let test = match self {
            TestSize::Fraction(f) if f > 0.0 && f < 1.0 => (n as f64 * f).floor() as usize,
            TestSize::Fraction(f) => return Err(EvalError::InvalidTestSize(format!("fraction {f} is outside (0, 1)"))),
            TestSize::Count(c) => c,
        };
        if test == 0 || test >= n {
            return Err(EvalError::InvalidTestSize(format!("{test} test rows out of {n}")));
        }
        Ok(test)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitConfig {
    pub test_size: TestSize,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig { test_size: TestSize::default(), seed: 42, stratified: false }
    }
}

/// Row positions of each side, in shuffled order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Seeded shuffle, then the first rows of the permutation become the test
/// split. Stratified mode walks the same permutation and takes
/// `round(test * n_pos / n)` Positive rows and the rest Negative.
pub fn split_indices(labels: &[Label], cfg: &SplitConfig) -> Result<SplitIndices, EvalError> {
    let n = labels.len();
    let counts = ClassCounts::from_labels(labels);
    if !counts.has_both() {
        return Err(EvalError::Classifier(crate::classifiers::ClassifierError::SingleClassTraining));
    }
    let n_test = cfg.test_size.resolve(n)?;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));

    let (train, test) = if cfg.stratified {
        let pos_test = (n_test as f64 * counts.positive as f64 / n as f64).round() as usize;
        let mut quota = [n_test - pos_test, pos_test];
        let mut train = Vec::with_capacity(n - n_test);
        let mut test = Vec::with_capacity(n_test);
        for i in perm {
            let q = &mut quota[labels[i].is_positive() as usize];
            if *q > 0 {
                *q -= 1;
                test.push(i);
            } else {
                train.push(i);
            }
        }
        (train, test)
    } else {
        let train = perm.split_off(n_test);
        (train, perm)
    };
    if !ClassCounts::from_labels(train.iter().map(|&i| &labels[i])).has_both() {
        return Err(EvalError::SingleClassSplit("train"));
    }
    Ok(SplitIndices { train, test })
}

/// Splits any row collection by [`split_indices`].
pub fn train_test_split<T: Clone>(
    items: &[T],
    labels: &[Label],
    cfg: &SplitConfig,
) -> Result<(Vec<T>, Vec<T>), EvalError> {
    let idx = split_indices(labels, cfg)?;
    let pick = |ix: &[usize]| ix.iter().map(|&i| items[i].clone()).collect();
    Ok((pick(&idx.train), pick(&idx.test)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn corpus(pos: usize, neg: usize) -> Vec<Label> {
        let mut v = vec![Label::Positive; pos];
        v.extend(vec![Label::Negative; neg]);
        v
    }

    #[test]
    fn fraction_rounds_down() {
        let labels = corpus(1651, 3211);
        let cfg = SplitConfig::default();
        let s = split_indices(&labels, &cfg).unwrap();
        assert_eq!((s.train.len(), s.test.len()), (3890, 972));
    }

    #[test]
    fn absolute_count_reproduces_3889_973() {
        let labels = corpus(1651, 3211);
        let cfg = SplitConfig { test_size: TestSize::Count(973), ..SplitConfig::default() };
        let s = split_indices(&labels, &cfg).unwrap();
        assert_eq!((s.train.len(), s.test.len()), (3889, 973));
    }

    #[test]
    fn stratified_keeps_class_ratio() {
        let labels = corpus(1651, 3211);
        let cfg = SplitConfig { stratified: true, ..SplitConfig::default() };
        let s = split_indices(&labels, &cfg).unwrap();
        let pos = s.test.iter().filter(|&&i| labels[i].is_positive()).count();
        // round(972 * 1651 / 4862) = 330
        assert_eq!(pos, 330);
        let ratio = pos as f64 / s.test.len() as f64;
        assert!((ratio - 1651.0 / 4862.0).abs() < 0.001);
        assert!(((s.test.len() - pos) as f64 / s.test.len() as f64 - 3211.0 / 4862.0).abs() < 0.001);
    }

    #[test]
    fn same_seed_same_split() {
        let labels = corpus(40, 60);
        let cfg = SplitConfig { seed: 9, ..SplitConfig::default() };
        assert_eq!(split_indices(&labels, &cfg).unwrap(), split_indices(&labels, &cfg).unwrap());
        let other = SplitConfig { seed: 10, ..cfg };
        assert_ne!(split_indices(&labels, &cfg).unwrap(), split_indices(&labels, &other).unwrap());
    }

    #[test]
    fn rejects_bad_sizes_and_lost_classes() {
        let labels = corpus(5, 5);
        for size in [TestSize::Fraction(0.0), TestSize::Fraction(1.0), TestSize::Count(0), TestSize::Count(10)] {
            let cfg = SplitConfig { test_size: size, ..SplitConfig::default() };
            assert!(matches!(split_indices(&labels, &cfg), Err(EvalError::InvalidTestSize(_))));
        }
        // one Positive row; any split that puts it in test leaves train single-class
        let labels = corpus(1, 3);
        let lost = (0..50u64).any(|seed| {
            let cfg = SplitConfig { test_size: TestSize::Count(1), seed, stratified: false };
            matches!(split_indices(&labels, &cfg), Err(EvalError::SingleClassSplit("train")))
        });
        assert!(lost);
    }

    proptest! {
        #[test]
        fn split_partitions_rows(pos in 2usize..40, neg in 2usize..40, seed in any::<u64>(), stratified in any::<bool>()) {
            let labels = corpus(pos, neg);
            let cfg = SplitConfig { test_size: TestSize::Fraction(0.25), seed, stratified };
            if let Ok(s) = split_indices(&labels, &cfg) {
                let mut all: Vec<usize> = s.train.iter().chain(&s.test).copied().collect();
                all.sort_unstable();
                prop_assert_eq!(all, (0..pos + neg).collect::<Vec<_>>());
                prop_assert_eq!(s.test.len(), ((pos + neg) as f64 * 0.25).floor() as usize);
            }
        }
    }
}
