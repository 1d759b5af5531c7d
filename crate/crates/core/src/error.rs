use thiserror::Error;

use crate::classifiers::ClassifierError;
use crate::dataset::DatasetError;
use crate::eval::EvalError;
use crate::features::FeatureError;
use crate::textprep::{LexiconError, TextPrepError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    TextPrep(#[from] TextPrepError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, mapped to process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Config,
    Runtime,
}

impl Error {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io { path: path.as_ref().display().to_string(), source }
    }

    pub fn json(path: impl AsRef<std::path::Path>, source: serde_json::Error) -> Self {
        Error::Json { path: path.as_ref().display().to_string(), source }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dataset(DatasetError::MissingColumn(_)) => "missing-column",
            Error::Dataset(DatasetError::BadLabel { .. }) => "bad-label",
            Error::Dataset(DatasetError::EmptyCorpus) => "empty-corpus",
            Error::Dataset(DatasetError::Encoding { .. }) => "encoding",
            Error::Dataset(DatasetError::Io { .. }) | Error::Io { .. } => "io",
            Error::Dataset(_) => "dataset",
            Error::Lexicon(_) => "lexicon",
            Error::TextPrep(_) => "empty-after-cleaning",
            Error::Feature(_) => "features",
            Error::Classifier(ClassifierError::DimensionMismatch { .. }) => "dimension-mismatch",
            Error::Classifier(ClassifierError::UnsupportedVersion { .. }) => "version-mismatch",
            Error::Classifier(ClassifierError::SingleClassTraining)
            | Error::Eval(EvalError::Classifier(ClassifierError::SingleClassTraining))
            | Error::Eval(EvalError::SingleClassSplit(_)) => "single-class",
            Error::Classifier(ClassifierError::InvalidHyperparameter(_) | ClassifierError::UnknownKind(_)) => "config",
            Error::Classifier(_) => "classifier",
            Error::Eval(EvalError::InvalidTestSize(_) | EvalError::TooFewSamples { .. }) => "config",
            Error::Eval(_) => "eval",
            Error::Config(_) => "config",
            Error::Json { .. } => "json",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self.code() {
            "config" => ErrorClass::Config,
            "missing-column" | "bad-label" | "empty-corpus" | "encoding" | "io" | "dataset" | "lexicon" | "json"
            | "version-mismatch" => ErrorClass::Input,
            _ => ErrorClass::Runtime,
        }
    }

    /// 2 for bad input, 3 for bad configuration, 4 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Input => 2,
            ErrorClass::Config => 3,
            ErrorClass::Runtime => 4,
        }
    }
}
