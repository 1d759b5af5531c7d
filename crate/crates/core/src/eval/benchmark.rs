use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cv::{cross_validate, evaluate_holdout, Summary};
use super::metrics::{ClassMetrics, ConfusionMatrix, MetricSet};
use super::split::{split_indices, SplitConfig};
use super::EvalError;
use crate::classifiers::{ClassifierKind, ClassifierSpec};
use crate::dataset::Label;
use crate::features::FeatureKind;
use crate::textprep::CleanDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    /// One train/test split shared by every cell.
    #[default]
    Holdout,
    /// Stratified k-fold cross-validation per cell.
    Kfold(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub split: SplitConfig,
    pub mode: EvalMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSizes {
    pub train: usize,
    pub test: usize,
}

/// Fold standard deviations in k-fold mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSpread {
    pub accuracy: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

/// One (classifier, feature extraction) cell. A failed cell carries only
/// `error`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub classifier: ClassifierKind,
    pub features: FeatureKind,
    pub metrics: Option<MetricSet>,
    pub confusion: Option<ConfusionMatrix>,
    pub per_class: Option<[ClassMetrics; 2]>,
    pub spread: Option<MetricSpread>,
    pub error: Option<String>,
}

impl CellResult {
    fn failed(classifier: ClassifierKind, features: FeatureKind, err: EvalError) -> Self {
        CellResult {
            classifier,
            features,
            metrics: None,
            confusion: None,
            per_class: None,
            spread: None,
            error: Some(err.to_string()),
        }
    }
}

/// Everything that must be reproducible for a fixed configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkPayload {
    pub seed: u64,
    pub mode: EvalMode,
    pub stratified: bool,
    pub documents: usize,
    pub split: Option<SplitSizes>,
    pub classifiers: Vec<ClassifierKind>,
    pub features: Vec<FeatureKind>,
    pub cells: Vec<CellResult>,
}

impl BenchmarkPayload {
    pub fn cell(&self, classifier: ClassifierKind, features: FeatureKind) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.classifier == classifier && c.features == features)
    }

    /// Highest-accuracy cell; the first in grid order wins a tie.
    pub fn best(&self) -> Option<&CellResult> {
        self.cells.iter().filter(|c| c.metrics.is_some()).fold(None, |best: Option<&CellResult>, c| match best {
            Some(b) if b.metrics.unwrap().accuracy >= c.metrics.unwrap().accuracy => Some(b),
            _ => Some(c),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellTiming {
    pub classifier: ClassifierKind,
    pub features: FeatureKind,
    pub millis: f64,
}

/// Run-dependent values kept apart from the payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkMetadata {
    pub generated_at_unix: u64,
    pub total_millis: f64,
    pub timings: Vec<CellTiming>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub payload: BenchmarkPayload,
    pub metadata: BenchmarkMetadata,
}

fn run_cell(
    spec: &ClassifierSpec,
    features: FeatureKind,
    docs: &[CleanDocument],
    split: Option<&DocSplit<'_>>,
    cfg: &BenchmarkConfig,
) -> Result<CellResult, EvalError> {
    let kind = spec.kind();
    match (cfg.mode, split) {
        (EvalMode::Holdout, Some((train, test))) => {
            let m = evaluate_holdout(spec, features, train, test)?;
            Ok(CellResult {
                classifier: kind,
                features,
                metrics: Some(m.metric_set()?),
                confusion: Some(m),
                per_class: Some(m.per_class()),
                spread: None,
                error: None,
            })
        }
        (EvalMode::Kfold(k), _) => {
            let cv = cross_validate(spec, features, docs, k, cfg.split.seed)?;
            let std = |s: Option<Summary>| s.map(|s| s.std);
            Ok(CellResult {
                classifier: kind,
                features,
                metrics: Some(cv.mean_metrics()),
                confusion: None,
                per_class: None,
                spread: Some(MetricSpread { accuracy: cv.accuracy.std, precision: std(cv.precision), recall: std(cv.recall) }),
                error: None,
            })
        }
        (EvalMode::Holdout, None) => unreachable!("hold-out split is computed up front"),
    }
}

/// Evaluates a single cell, returning its error instead of recording it.
pub fn evaluate_cell(
    docs: &[CleanDocument],
    spec: &ClassifierSpec,
    features: FeatureKind,
    cfg: &BenchmarkConfig,
) -> Result<CellResult, EvalError> {
    let split = holdout_split(docs, cfg)?;
    run_cell(spec, features, docs, split.as_ref(), cfg)
}

type DocSplit<'a> = (Vec<&'a CleanDocument>, Vec<&'a CleanDocument>);

fn holdout_split<'a>(docs: &'a [CleanDocument], cfg: &BenchmarkConfig) -> Result<Option<DocSplit<'a>>, EvalError> {
    match cfg.mode {
        EvalMode::Holdout => {
            let labels: Vec<Label> = docs.iter().map(|d| d.label).collect();
            let idx = split_indices(&labels, &cfg.split)?;
            let pick = |ix: &[usize]| ix.iter().map(|&i| &docs[i]).collect::<Vec<_>>();
            Ok(Some((pick(&idx.train), pick(&idx.test))))
        }
        EvalMode::Kfold(_) => Ok(None),
    }
}

/// Evaluates every (spec, feature kind) pair in grid order. A failing cell
/// is recorded with its error; only an invalid split aborts the run.
pub fn run_benchmark(
    docs: &[CleanDocument],
    specs: &[ClassifierSpec],
    features: &[FeatureKind],
    cfg: &BenchmarkConfig,
) -> Result<BenchmarkReport, EvalError> {
    let started = Instant::now();
    let split = holdout_split(docs, cfg)?;

    let grid: Vec<(&ClassifierSpec, FeatureKind)> =
        specs.iter().flat_map(|s| features.iter().map(move |&f| (s, f))).collect();
    let outcomes: Vec<(CellResult, f64)> = grid
        .par_iter()
        .map(|&(spec, f)| {
            let t = Instant::now();
            let cell = run_cell(spec, f, docs, split.as_ref(), cfg).unwrap_or_else(|e| {
                log::warn!("{} / {}: {e}", spec.kind(), f);
                CellResult::failed(spec.kind(), f, e)
            });
            (cell, t.elapsed().as_secs_f64() * 1000.0)
        })
        .collect();

    let timings = outcomes
        .iter()
        .map(|(c, ms)| CellTiming { classifier: c.classifier, features: c.features, millis: *ms })
        .collect();
    let payload = BenchmarkPayload {
        seed: cfg.split.seed,
        mode: cfg.mode,
        stratified: cfg.split.stratified,
        documents: docs.len(),
        split: split.as_ref().map(|(tr, te)| SplitSizes { train: tr.len(), test: te.len() }),
        classifiers: specs.iter().map(|s| s.kind()).collect(),
        features: features.to_vec(),
        cells: outcomes.into_iter().map(|(c, _)| c).collect(),
    };
    let generated_at_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let metadata = BenchmarkMetadata { generated_at_unix, total_millis: started.elapsed().as_secs_f64() * 1000.0, timings };
    Ok(BenchmarkReport { payload, metadata })
}
