//! Six binary classifiers behind one fit/predict interface.
//!
//! Every model produces a real-valued score per row. Scores are either
//! log-odds or margins (Positive above 0), or Positive vote fractions
//! (Positive above 0.5). A score exactly at the threshold predicts Negative.

pub mod boost;
pub mod decision_tree;
pub mod forest;
pub mod knn;
pub mod naive_bayes;
pub mod svm;
pub mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::Label;
use crate::features::DocTermMatrix;

pub use boost::{BoostParams, GradBoostModel};
pub use decision_tree::{DecisionTreeModel, TreeParams};
pub use forest::{ForestParams, MaxFeatures, RandomForestModel};
pub use knn::{KnnModel, KnnParams};
pub use naive_bayes::{BernoulliNbModel, NbParams};
pub use svm::{SvmModel, SvmParams};

/// Version stamped on serialized models.
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ClassifierError {
    #[error("training labels contain a single class")]
    SingleClassTraining,
    #[error("need at least 2 training rows, got {0}")]
    TooFewRows(usize),
    #[error("feature dimension mismatch: model expects {expected} columns, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{rows} feature rows but {labels} labels")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),
    #[error("unknown classifier '{0}'")]
    UnknownKind(String),
    #[error("model file version {found} is not supported (expected {expected})")]
    UnsupportedVersion { expected: u32, found: u32 },
    #[error("model JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Validated training rows with boolean Positive labels.
#[derive(Debug, Clone)]
pub struct TrainingSet<'a> {
    pub x: &'a DocTermMatrix,
    pub positive: Vec<bool>,
}

impl<'a> TrainingSet<'a> {
    pub fn new(x: &'a DocTermMatrix, y: &[Label]) -> Result<Self, ClassifierError> {
        if x.rows.len() != y.len() {
            return Err(ClassifierError::LengthMismatch { rows: x.rows.len(), labels: y.len() });
        }
        if y.len() < 2 {
            return Err(ClassifierError::TooFewRows(y.len()));
        }
        let positive: Vec<bool> = y.iter().map(|l| l.is_positive()).collect();
        if positive.iter().all(|&p| p) || positive.iter().all(|&p| !p) {
            return Err(ClassifierError::SingleClassTraining);
        }
        Ok(TrainingSet { x, positive })
    }

    pub fn len(&self) -> usize {
        self.positive.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positive.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassifierKind {
    Knn,
    BernoulliNb,
    DecisionTree,
    Svm,
    RandomForest,
    GradBoost,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 6] = [
        ClassifierKind::Knn,
        ClassifierKind::BernoulliNb,
        ClassifierKind::DecisionTree,
        ClassifierKind::Svm,
        ClassifierKind::RandomForest,
        ClassifierKind::GradBoost,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::Knn => "knn",
            ClassifierKind::BernoulliNb => "bernoulli-nb",
            ClassifierKind::DecisionTree => "decision-tree",
            ClassifierKind::Svm => "svm",
            ClassifierKind::RandomForest => "random-forest",
            ClassifierKind::GradBoost => "grad-boost",
        }
    }

    /// Row label used in benchmark tables.
    pub fn display_name(self) -> &'static str {
        match self {
            ClassifierKind::Knn => "K-NN",
            ClassifierKind::BernoulliNb => "Bernoulli",
            ClassifierKind::DecisionTree => "Decision Tree",
            ClassifierKind::Svm => "Support Vector Classifier",
            ClassifierKind::RandomForest => "Random Forest",
            ClassifierKind::GradBoost => "XG-Boost",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassifierKind {
    type Err = ClassifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Ok(match key.as_str() {
            "knn" | "k-nn" => ClassifierKind::Knn,
            "bernoulli-nb" | "bernoulli" | "nb" | "naive-bayes" => ClassifierKind::BernoulliNb,
            "decision-tree" | "tree" | "dt" => ClassifierKind::DecisionTree,
            "svm" | "svc" => ClassifierKind::Svm,
            "random-forest" | "forest" | "rf" => ClassifierKind::RandomForest,
            "grad-boost" | "gradboost" | "xgboost" | "xg-boost" | "xgb" | "gb" => ClassifierKind::GradBoost,
            _ => return Err(ClassifierError::UnknownKind(s.to_string())),
        })
    }
}

/// How a model's scores map to labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScoreKind {
    /// Log-odds or signed margin; Positive above 0.
    Margin,
    /// Fraction of Positive votes; Positive above 0.5.
    VoteFraction,
}

impl ScoreKind {
    pub fn threshold(self) -> f64 {
        match self {
            ScoreKind::Margin => 0.0,
            ScoreKind::VoteFraction => 0.5,
        }
    }

    pub fn label(self, score: f64) -> Label {
        Label::from_positive(score > self.threshold())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Hyperparameters {
    Knn(KnnParams),
    BernoulliNb(NbParams),
    DecisionTree(TreeParams),
    Svm(SvmParams),
    RandomForest(ForestParams),
    GradBoost(BoostParams),
}

impl Hyperparameters {
    pub fn default_for(kind: ClassifierKind) -> Self {
        match kind {
            ClassifierKind::Knn => Hyperparameters::Knn(KnnParams::default()),
            ClassifierKind::BernoulliNb => Hyperparameters::BernoulliNb(NbParams::default()),
            ClassifierKind::DecisionTree => Hyperparameters::DecisionTree(TreeParams::default()),
            ClassifierKind::Svm => Hyperparameters::Svm(SvmParams::default()),
            ClassifierKind::RandomForest => Hyperparameters::RandomForest(ForestParams::default()),
            ClassifierKind::GradBoost => Hyperparameters::GradBoost(BoostParams::default()),
        }
    }

    pub fn kind(&self) -> ClassifierKind {
        match self {
            Hyperparameters::Knn(_) => ClassifierKind::Knn,
            Hyperparameters::BernoulliNb(_) => ClassifierKind::BernoulliNb,
            Hyperparameters::DecisionTree(_) => ClassifierKind::DecisionTree,
            Hyperparameters::Svm(_) => ClassifierKind::Svm,
            Hyperparameters::RandomForest(_) => ClassifierKind::RandomForest,
            Hyperparameters::GradBoost(_) => ClassifierKind::GradBoost,
        }
    }
}

/// A classifier kind with its hyperparameters and seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSpec {
    pub params: Hyperparameters,
    pub seed: u64,
}

impl ClassifierSpec {
    pub fn new(params: Hyperparameters, seed: u64) -> Self {
        ClassifierSpec { params, seed }
    }

    pub fn default_for(kind: ClassifierKind, seed: u64) -> Self {
        ClassifierSpec { params: Hyperparameters::default_for(kind), seed }
    }

    pub fn kind(&self) -> ClassifierKind {
        self.params.kind()
    }

    /// Checks hyperparameter ranges without training.
    pub fn validate(&self) -> Result<(), ClassifierError> {
        let bad = |msg: &str| Err(ClassifierError::InvalidHyperparameter(msg.to_string()));
        match &self.params {
            Hyperparameters::Knn(p) if p.k == 0 => bad("k must be >= 1"),
            Hyperparameters::BernoulliNb(p) if p.alpha.is_nan() || p.alpha <= 0.0 => bad("alpha must be > 0"),
            Hyperparameters::DecisionTree(p) => p.validate(),
            Hyperparameters::Svm(p) if p.lambda.is_nan() || p.lambda <= 0.0 => bad("lambda must be > 0"),
            Hyperparameters::Svm(p) if p.epochs == 0 => bad("epochs must be >= 1"),
            Hyperparameters::RandomForest(p) if p.n_trees == 0 => bad("n_trees must be >= 1"),
            Hyperparameters::RandomForest(p) => p.tree.validate(),
            Hyperparameters::GradBoost(p) if !(p.learning_rate > 0.0 && p.learning_rate <= 1.0) => {
                bad("learning_rate must be in (0, 1]")
            }
            Hyperparameters::GradBoost(p) if p.max_depth == 0 => bad("max_depth must be >= 1"),
            Hyperparameters::GradBoost(p) if p.lambda.is_nan() || p.lambda <= 0.0 => bad("lambda must be > 0"),
            Hyperparameters::GradBoost(p) if p.min_child_weight.is_nan() || p.min_child_weight < 0.0 => bad("min_child_weight must be >= 0"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TrainedModel {
    Knn(KnnModel),
    BernoulliNb(BernoulliNbModel),
    DecisionTree(DecisionTreeModel),
    Svm(SvmModel),
    RandomForest(RandomForestModel),
    GradBoost(GradBoostModel),
}

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    format_version: u32,
    model: TrainedModel,
}

/// Trains the classifier described by `spec`.
pub fn fit(spec: &ClassifierSpec, x: &DocTermMatrix, y: &[Label]) -> Result<TrainedModel, ClassifierError> {
    spec.validate()?;
    let data = TrainingSet::new(x, y)?;
    Ok(match &spec.params {
        Hyperparameters::Knn(p) => TrainedModel::Knn(KnnModel::fit(p, &data)?),
        Hyperparameters::BernoulliNb(p) => TrainedModel::BernoulliNb(BernoulliNbModel::fit(p, &data)?),
        Hyperparameters::DecisionTree(p) => TrainedModel::DecisionTree(DecisionTreeModel::fit(p, &data)?),
        Hyperparameters::Svm(p) => TrainedModel::Svm(SvmModel::fit(p, &data, spec.seed)?),
        Hyperparameters::RandomForest(p) => TrainedModel::RandomForest(RandomForestModel::fit(p, &data, spec.seed)?),
        Hyperparameters::GradBoost(p) => TrainedModel::GradBoost(GradBoostModel::fit(p, &data)?),
    })
}

impl TrainedModel {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            TrainedModel::Knn(_) => ClassifierKind::Knn,
            TrainedModel::BernoulliNb(_) => ClassifierKind::BernoulliNb,
            TrainedModel::DecisionTree(_) => ClassifierKind::DecisionTree,
            TrainedModel::Svm(_) => ClassifierKind::Svm,
            TrainedModel::RandomForest(_) => ClassifierKind::RandomForest,
            TrainedModel::GradBoost(_) => ClassifierKind::GradBoost,
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            TrainedModel::Knn(m) => m.n_features,
            TrainedModel::BernoulliNb(m) => m.n_features,
            TrainedModel::DecisionTree(m) => m.n_features,
            TrainedModel::Svm(m) => m.n_features,
            TrainedModel::RandomForest(m) => m.n_features,
            TrainedModel::GradBoost(m) => m.n_features,
        }
    }

    pub fn score_kind(&self) -> ScoreKind {
        match self {
            TrainedModel::Knn(_) | TrainedModel::DecisionTree(_) | TrainedModel::RandomForest(_) => {
                ScoreKind::VoteFraction
            }
            TrainedModel::BernoulliNb(_) | TrainedModel::Svm(_) | TrainedModel::GradBoost(_) => ScoreKind::Margin,
        }
    }

    pub fn predict_score(&self, x: &DocTermMatrix) -> Result<Vec<f64>, ClassifierError> {
        if x.n_cols != self.n_features() {
            return Err(ClassifierError::DimensionMismatch { expected: self.n_features(), found: x.n_cols });
        }
        Ok(match self {
            TrainedModel::Knn(m) => m.scores(x),
            TrainedModel::BernoulliNb(m) => m.scores(x),
            TrainedModel::DecisionTree(m) => m.scores(x),
            TrainedModel::Svm(m) => m.scores(x),
            TrainedModel::RandomForest(m) => m.scores(x),
            TrainedModel::GradBoost(m) => m.scores(x),
        })
    }

    pub fn predict(&self, x: &DocTermMatrix) -> Result<Vec<Label>, ClassifierError> {
        let kind = self.score_kind();
        Ok(self.predict_score(x)?.into_iter().map(|s| kind.label(s)).collect())
    }

    /// Versioned JSON document.
    pub fn to_json(&self) -> Result<String, ClassifierError> {
        let doc = ModelDocument { format_version: MODEL_FORMAT_VERSION, model: self.clone() };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(json: &str) -> Result<Self, ClassifierError> {
        #[derive(Deserialize)]
        struct Header {
            format_version: u32,
        }
        let header: Header = serde_json::from_str(json)?;
        if header.format_version != MODEL_FORMAT_VERSION {
            return Err(ClassifierError::UnsupportedVersion { expected: MODEL_FORMAT_VERSION, found: header.format_version });
        }
        let doc: ModelDocument = serde_json::from_str(json)?;
        Ok(doc.model)
    }
}

#[cfg(test)]
mod tests;
