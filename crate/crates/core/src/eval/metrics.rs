use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::dataset::Label;

/// Counts with Positive as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub fp: u64,
    pub tn: u64,
}

/// Tallies (predicted, actual) pairs.
pub fn confusion(predicted: &[Label], actual: &[Label]) -> Result<ConfusionMatrix, EvalError> {
    if predicted.len() != actual.len() {
        return Err(EvalError::LengthMismatch { predicted: predicted.len(), actual: actual.len() });
    }
    if predicted.is_empty() {
        return Err(EvalError::EmptyMatrix);
    }
    let mut m = ConfusionMatrix::default();
    for (&p, &a) in predicted.iter().zip(actual) {
        match (p, a) {
            (Label::Positive, Label::Positive) => m.tp += 1,
            (Label::Positive, Label::Negative) => m.fp += 1,
            (Label::Negative, Label::Positive) => m.fn_ += 1,
            (Label::Negative, Label::Negative) => m.tn += 1,
        }
    }
    Ok(m)
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fn_: u64, fp: u64, tn: u64) -> Self {
        ConfusionMatrix { tp, fn_, fp, tn }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fn_ + self.fp + self.tn
    }

    pub fn accuracy(&self) -> Result<f64, EvalError> {
        ratio(self.tp + self.tn, self.total()).ok_or(EvalError::EmptyMatrix)
    }

    /// `tp / (tp + fp)`, `None` when nothing was predicted Positive.
    pub fn precision(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fp)
    }

    /// `tp / (tp + fn)`, `None` when no row is actually Positive.
    pub fn recall(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fn_)
    }

    /// The matrix obtained by swapping predicted and actual.
    pub fn transposed(&self) -> Self {
        ConfusionMatrix { tp: self.tp, fn_: self.fp, fp: self.fn_, tn: self.tn }
    }

    /// The same counts with `label` as the positive class.
    pub fn oriented(&self, label: Label) -> Self {
        match label {
            Label::Positive => *self,
            Label::Negative => ConfusionMatrix { tp: self.tn, fn_: self.fp, fp: self.fn_, tn: self.tp },
        }
    }

    pub fn class_metrics(&self, label: Label) -> ClassMetrics {
        let m = self.oriented(label);
        ClassMetrics { label, precision: m.precision(), recall: m.recall() }
    }

    /// Negative first, then Positive.
    pub fn per_class(&self) -> [ClassMetrics; 2] {
        [self.class_metrics(Label::Negative), self.class_metrics(Label::Positive)]
    }

    pub fn metric_set(&self) -> Result<MetricSet, EvalError> {
        Ok(MetricSet { accuracy: self.accuracy()?, precision: self.precision(), recall: self.recall() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: Label,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

/// Accuracy with Positive-class precision and recall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub accuracy: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}
