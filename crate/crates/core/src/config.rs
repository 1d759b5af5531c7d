//! Run configuration shared by the CLI commands.
//!
//! A JSON file supplies any subset of the keys below; missing keys take the
//! defaults and every command-line flag overrides its key.
//!
//! ```json
//! {
//!   "input": "comments.csv",
//!   "lexicons": "lexicons/",
//!   "model": "model.json",
//!   "out": "reports/",
//!   "text_column": "text",
//!   "label_column": "category",
//!   "seed": 42,
//!   "test_size": {"fraction": 0.2},
//!   "stratified": false,
//!   "classifiers": ["knn", "bernoulli-nb", "decision-tree", "svm", "random-forest", "grad-boost"],
//!   "hyperparameters": [{"kind": "knn", "k": 3}],
//!   "features": ["counts", "tfidf"],
//!   "evaluation": "holdout",
//!   "format": "md"
//! }
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classifiers::{ClassifierKind, ClassifierSpec, Hyperparameters};
use crate::dataset::{DEFAULT_LABEL_COLUMN, DEFAULT_TEXT_COLUMN};
use crate::error::{Error, Result};
use crate::eval::report::ReportFormat;
use crate::eval::{BenchmarkConfig, EvalMode, SplitConfig, TestSize};
use crate::features::FeatureKind;
use crate::textprep::Lexicons;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub lexicons: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub text_column: String,
    pub label_column: String,
    pub seed: u64,
    pub test_size: TestSize,
    pub stratified: bool,
    pub classifiers: Vec<ClassifierKind>,
    /// Overrides for the default hyperparameters of matching kinds.
    pub hyperparameters: Vec<Hyperparameters>,
    pub features: Vec<FeatureKind>,
    pub evaluation: EvalMode,
    pub format: ReportFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: None,
            lexicons: None,
            model: None,
            out: None,
            text_column: DEFAULT_TEXT_COLUMN.to_owned(),
            label_column: DEFAULT_LABEL_COLUMN.to_owned(),
            seed: DEFAULT_SEED,
            test_size: TestSize::default(),
            stratified: false,
            classifiers: ClassifierKind::ALL.to_vec(),
            hyperparameters: Vec::new(),
            features: vec![FeatureKind::Counts, FeatureKind::TfIdf],
            evaluation: EvalMode::Holdout,
            format: ReportFormat::Md,
        }
    }
}

impl RunConfig {
    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let json = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&json).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is serializable")
    }

    /// One spec per configured classifier, in order, seeded with `seed`.
    pub fn specs(&self) -> Result<Vec<ClassifierSpec>> {
        if self.classifiers.is_empty() {
            return Err(Error::Config("no classifiers selected".into()));
        }
        self.classifiers.iter().map(|&k| self.spec_for(k)).collect()
    }

    pub fn spec_for(&self, kind: ClassifierKind) -> Result<ClassifierSpec> {
        let params = self
            .hyperparameters
            .iter()
            .rev()
            .find(|h| h.kind() == kind)
            .copied()
            .unwrap_or_else(|| Hyperparameters::default_for(kind));
        let spec = ClassifierSpec::new(params, self.seed);
        spec.validate()?;
        Ok(spec)
    }

    pub fn split(&self) -> SplitConfig {
        SplitConfig { test_size: self.test_size, seed: self.seed, stratified: self.stratified }
    }

    pub fn benchmark(&self) -> BenchmarkConfig {
        BenchmarkConfig { split: self.split(), mode: self.evaluation }
    }

    pub fn features(&self) -> Result<Vec<FeatureKind>> {
        if self.features.is_empty() {
            return Err(Error::Config("no feature extraction selected".into()));
        }
        Ok(self.features.clone())
    }

    /// The configured input path, which must exist.
    pub fn require_input(&self) -> Result<&Path> {
        let path = self.input.as_deref().ok_or_else(|| Error::Config("missing --input".into()))?;
        require_file(path)?;
        Ok(path)
    }

    pub fn require_model(&self) -> Result<&Path> {
        let path = self.model.as_deref().ok_or_else(|| Error::Config("missing --model".into()))?;
        Ok(path)
    }

    /// The configured lexicon directory, or the built-in lexicons.
    pub fn lexicons(&self) -> Result<Lexicons> {
        match &self.lexicons {
            Some(dir) => {
                if !dir.is_dir() {
                    return Err(Error::io(dir, std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory")));
                }
                Ok(Lexicons::load_dir(dir)?)
            }
            None => Ok(Lexicons::builtin()),
        }
    }
}

pub fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::io(path, std::io::Error::new(std::io::ErrorKind::NotFound, "file not found")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::KnnParams;

    #[test]
    fn defaults_fill_missing_keys() {
        let cfg = RunConfig::from_json(r#"{"seed": 7, "classifiers": ["rf"]}"#);
        // aliases are CLI conveniences; the file uses canonical names
        assert!(cfg.is_err());
        let cfg = RunConfig::from_json(r#"{"seed": 7, "classifiers": ["random-forest"]}"#).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.text_column, "text");
        assert_eq!(cfg.features.len(), 2);
        assert_eq!(cfg.specs().unwrap()[0].seed, 7);
    }

    #[test]
    fn hyperparameter_overrides_apply_by_kind() {
        let cfg = RunConfig::from_json(r#"{"classifiers": ["knn", "svm"], "hyperparameters": [{"kind": "knn", "k": 3}]}"#)
            .unwrap();
        let specs = cfg.specs().unwrap();
        assert_eq!(specs[0].params, Hyperparameters::Knn(KnnParams { k: 3 }));
        assert_eq!(specs[1].params, Hyperparameters::default_for(ClassifierKind::Svm));
        let bad = RunConfig::from_json(r#"{"hyperparameters": [{"kind": "knn", "k": 0}]}"#).unwrap();
        assert_eq!(bad.specs().unwrap_err().exit_code(), 3);
    }

    #[test]
    fn round_trips_and_rejects_unknown_keys() {
        let cfg = RunConfig { test_size: TestSize::Count(973), evaluation: EvalMode::Kfold(5), ..RunConfig::default() };
        assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
        assert!(RunConfig::from_json(r#"{"sed": 1}"#).is_err());
    }
}
