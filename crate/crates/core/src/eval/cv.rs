use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{confusion, ConfusionMatrix, MetricSet};
use super::EvalError;
use crate::classifiers::{self, ClassifierSpec};
use crate::dataset::Label;
use crate::features::{FeatureKind, Vectorizer};
use crate::textprep::CleanDocument;

/// Fits the vectorizer and classifier on `train` and scores `test`.
pub fn evaluate_holdout(
    spec: &ClassifierSpec,
    features: FeatureKind,
    train: &[&CleanDocument],
    test: &[&CleanDocument],
) -> Result<ConfusionMatrix, EvalError> {
    let vectorizer = Vectorizer::fit(features, train)?;
    let x_train = vectorizer.transform_all(train);
    let y_train: Vec<Label> = train.iter().map(|d| d.label).collect();
    let model = classifiers::fit(spec, &x_train, &y_train)?;
    let predicted = model.predict(&vectorizer.transform_all(test))?;
    let actual: Vec<Label> = test.iter().map(|d| d.label).collect();
    confusion(&predicted, &actual)
}

/// Fold id per row. Rows are shuffled, then each class is dealt round-robin,
/// Negative continuing where Positive stopped so fold sizes differ by at
/// most one.
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Result<Vec<usize>, EvalError> {
    let n = labels.len();
    if k < 2 || k > n {
        return Err(EvalError::TooFewSamples { folds: k, samples: n });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_pos = labels.iter().filter(|l| l.is_positive()).count();
    let (mut seen_pos, mut seen_neg) = (0, 0);
    let mut folds = vec![0; n];
    for i in perm {
        folds[i] = if labels[i].is_positive() {
            seen_pos += 1;
            (seen_pos - 1) % k
        } else {
            seen_neg += 1;
            (n_pos + seen_neg - 1) % k
        };
    }
    Ok(folds)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub confusion: ConfusionMatrix,
    pub metrics: MetricSet,
}

/// Mean and population standard deviation over the folds where the metric
/// is defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub defined_folds: usize,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = Option<f64>>) -> Option<Summary> {
        let v: Vec<f64> = values.into_iter().flatten().collect();
        if v.is_empty() {
            return None;
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        Some(Summary { mean, std: var.sqrt(), defined_folds: v.len() })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub k: usize,
    pub folds: Vec<FoldResult>,
    pub accuracy: Summary,
    pub precision: Option<Summary>,
    pub recall: Option<Summary>,
}

impl CvResult {
    /// Fold means as a metric set.
    pub fn mean_metrics(&self) -> MetricSet {
        MetricSet {
            accuracy: self.accuracy.mean,
            precision: self.precision.map(|s| s.mean),
            recall: self.recall.map(|s| s.mean),
        }
    }
}

/// Stratified k-fold cross-validation; the vectorizer and classifier are
/// refitted on each fold's training rows.
pub fn cross_validate(
    spec: &ClassifierSpec,
    features: FeatureKind,
    docs: &[CleanDocument],
    k: usize,
    seed: u64,
) -> Result<CvResult, EvalError> {
    let labels: Vec<Label> = docs.iter().map(|d| d.label).collect();
    let assignment = stratified_folds(&labels, k, seed)?;
    let folds = (0..k)
        .into_par_iter()
        .map(|fold| {
            let mut train = Vec::new();
            let mut test = Vec::new();
            for (doc, &f) in docs.iter().zip(&assignment) {
                if f == fold { test.push(doc) } else { train.push(doc) }
            }
            let m = evaluate_holdout(spec, features, &train, &test)?;
            Ok(FoldResult { fold, train_size: train.len(), test_size: test.len(), confusion: m, metrics: m.metric_set()? })
        })
        .collect::<Result<Vec<_>, EvalError>>()?;
    let accuracy = Summary::of(folds.iter().map(|f| Some(f.metrics.accuracy))).expect("k >= 2 folds");
    let precision = Summary::of(folds.iter().map(|f| f.metrics.precision));
    let recall = Summary::of(folds.iter().map(|f| f.metrics.recall));
    Ok(CvResult { k, folds, accuracy, precision, recall })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::{ClassifierKind, Hyperparameters, KnnParams};
    use crate::textprep::EmotionAnnotation;
    use std::collections::BTreeMap;

    fn doc(id: usize, text: &str, positive: bool) -> CleanDocument {
        CleanDocument {
            id,
            tokens: text.split_whitespace().map(str::to_owned).collect(),
            clean_text: text.to_owned(),
            annotations: EmotionAnnotation::default(),
            label: Label::from_positive(positive),
        }
    }

    fn toy() -> Vec<CleanDocument> {
        vec![
            doc(0, "syukur rezeki rezeki", true),
            doc(1, "syukur sehat", true),
            doc(2, "takut pajak pajak naik", false),
            doc(3, "rezeki lancar syukur", true),
            doc(4, "pajak takut", false),
            doc(5, "naik harga sehat", false),
        ]
    }

    // 1-NN over raw counts restricted to the training vocabulary.
    fn loo_oracle(docs: &[CleanDocument]) -> f64 {
        fn counts(d: &CleanDocument) -> BTreeMap<&str, f64> {
            let mut m = BTreeMap::new();
            for t in &d.tokens {
                *m.entry(t.as_str()).or_insert(0.0) += 1.0;
            }
            m
        }
        let mut correct = 0;
        for i in 0..docs.len() {
            let train: Vec<usize> = (0..docs.len()).filter(|&j| j != i).collect();
            let vocab: std::collections::BTreeSet<&str> =
                train.iter().flat_map(|&j| docs[j].tokens.iter().map(String::as_str)).collect();
            let q: BTreeMap<&str, f64> = counts(&docs[i]).into_iter().filter(|(t, _)| vocab.contains(t)).collect();
            let mut best = (f64::INFINITY, usize::MAX);
            for &j in &train {
                let r = counts(&docs[j]);
                let d: f64 = vocab
                    .iter()
                    .map(|t| (q.get(t).copied().unwrap_or(0.0) - r.get(t).copied().unwrap_or(0.0)).powi(2))
                    .sum();
                if d < best.0 {
                    best = (d, j);
                }
            }
            if docs[best.1].label == docs[i].label {
                correct += 1;
            }
        }
        correct as f64 / docs.len() as f64
    }

    #[test]
    fn leave_one_out_matches_oracle() {
        let docs = toy();
        let spec = ClassifierSpec::new(Hyperparameters::Knn(KnnParams { k: 1 }), 0);
        let cv = cross_validate(&spec, FeatureKind::Counts, &docs, docs.len(), 3).unwrap();
        assert_eq!(cv.folds.len(), 6);
        for f in &cv.folds {
            assert_eq!(f.test_size, 1);
            assert!(f.metrics.accuracy == 0.0 || f.metrics.accuracy == 1.0);
        }
        assert!((cv.accuracy.mean - loo_oracle(&docs)).abs() < 1e-12);
    }

    #[test]
    fn folds_partition_rows_and_repeat() {
        let labels: Vec<Label> = (0..23).map(|i| Label::from_positive(i % 3 == 0)).collect();
        let folds = stratified_folds(&labels, 4, 11).unwrap();
        assert_eq!(folds, stratified_folds(&labels, 4, 11).unwrap());
        let mut sizes = [0usize; 4];
        let mut pos = [0usize; 4];
        for (f, l) in folds.iter().zip(&labels) {
            sizes[*f] += 1;
            pos[*f] += l.is_positive() as usize;
        }
        assert_eq!(sizes.iter().sum::<usize>(), 23);
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        assert!(pos.iter().max().unwrap() - pos.iter().min().unwrap() <= 1);
    }

    #[test]
    fn two_fold_runs_repeat() {
        let docs = toy();
        let spec = ClassifierSpec::default_for(ClassifierKind::BernoulliNb, 0);
        let a = cross_validate(&spec, FeatureKind::TfIdf, &docs, 2, 5).unwrap();
        let b = cross_validate(&spec, FeatureKind::TfIdf, &docs, 2, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fold_count_is_checked() {
        let docs = toy();
        let spec = ClassifierSpec::default_for(ClassifierKind::Knn, 0);
        for k in [0, 1, 7] {
            assert!(matches!(
                cross_validate(&spec, FeatureKind::Counts, &docs, k, 0),
                Err(EvalError::TooFewSamples { .. })
            ));
        }
    }

    #[test]
    fn summary_uses_population_std() {
        let s = Summary::of([Some(1.0), None, Some(3.0)]).unwrap();
        assert_eq!((s.mean, s.std, s.defined_folds), (2.0, 1.0, 2));
        assert_eq!(Summary::of([None, None]), None);
    }
}
