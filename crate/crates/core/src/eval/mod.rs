//! Hold-out splits, confusion-matrix metrics, k-fold cross-validation and
//! the classifier by feature-extraction benchmark grid.

pub mod benchmark;
pub mod cv;
pub mod metrics;
pub mod report;
pub mod split;

use thiserror::Error;

use crate::classifiers::ClassifierError;
use crate::features::FeatureError;

pub use benchmark::{evaluate_cell, run_benchmark, BenchmarkConfig, BenchmarkMetadata, BenchmarkPayload, BenchmarkReport, CellResult, EvalMode};
pub use cv::{cross_validate, stratified_folds, CvResult, FoldResult, Summary};
pub use metrics::{confusion, ClassMetrics, ConfusionMatrix, MetricSet};
pub use split::{split_indices, train_test_split, SplitConfig, SplitIndices, TestSize};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{predicted} predictions but {actual} labels")]
    LengthMismatch { predicted: usize, actual: usize },
    #[error("no samples to evaluate")]
    EmptyMatrix,
    #[error("invalid test size: {0}")]
    InvalidTestSize(String),
    #[error("the {0} split lost a class")]
    SingleClassSplit(&'static str),
    #[error("cannot make {folds} folds from {samples} samples")]
    TooFewSamples { folds: usize, samples: usize },
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}
