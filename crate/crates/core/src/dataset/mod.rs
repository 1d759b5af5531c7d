//! Labeled comment corpora: CSV ingestion, class balance and synthetic
//! generation.

mod io;
mod synthetic;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{load_csv, load_texts, read_csv, read_texts, write_csv, write_csv_path, DEFAULT_LABEL_COLUMN, DEFAULT_TEXT_COLUMN};
pub use synthetic::{
    generate_synthetic, generate_synthetic_with_stats, GenerationStats, VocabSpec, WeightedToken,
};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("column '{0}' not found in CSV header")]
    MissingColumn(String),
    #[error("row {row}: label '{label}' is neither Positive nor Negative")]
    BadLabel { row: usize, label: String },
    #[error("corpus contains no usable rows")]
    EmptyCorpus,
    #[error("row {row}: invalid UTF-8")]
    Encoding { row: usize },
    #[error("comment {index}: text is empty")]
    EmptyText { index: usize },
    #[error("noise ratio {0} is outside [0, 1]")]
    InvalidNoise(f64),
    #[error("positive prior {0} is outside (0, 1)")]
    InvalidPrior(f64),
    #[error("vocabulary spec has no tokens for the {0} class")]
    EmptyVocabSpec(Label),
    #[error("invalid synthetic request: {0}")]
    InvalidSynthetic(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
}

/// Binary sentiment label. Negative stands for anxiety, Positive for hope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Positive, Label::Negative];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "Positive",
            Label::Negative => "Negative",
        }
    }

    /// Case-insensitive parse; surrounding whitespace is ignored.
    pub fn parse(s: &str) -> Option<Label> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("positive") {
            Some(Label::Positive)
        } else if s.eq_ignore_ascii_case("negative") {
            Some(Label::Negative)
        } else {
            None
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }

    pub fn from_positive(positive: bool) -> Label {
        if positive {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn other(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Label::parse(s).ok_or_else(|| format!("unknown label '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawComment {
    pub id: usize,
    pub text: String,
    pub label: Label,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub positive: usize,
    pub negative: usize,
}

impl ClassCounts {
    pub fn from_labels<'a>(labels: impl IntoIterator<Item = &'a Label>) -> Self {
        let mut counts = ClassCounts::default();
        for label in labels {
            counts.add(*label);
        }
        counts
    }

    pub fn add(&mut self, label: Label) {
        match label {
            Label::Positive => self.positive += 1,
            Label::Negative => self.negative += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.positive + self.negative
    }

    pub fn get(&self, label: Label) -> usize {
        match label {
            Label::Positive => self.positive,
            Label::Negative => self.negative,
        }
    }

    pub fn has_both(&self) -> bool {
        self.positive > 0 && self.negative > 0
    }

    /// Larger class; ties go to Negative.
    pub fn majority(&self) -> Label {
        Label::from_positive(self.positive > self.negative)
    }
}

/// Ordered, immutable list of labeled comments with dense ids `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    comments: Vec<RawComment>,
    counts: ClassCounts,
}

impl Corpus {
    /// Builds a corpus, assigning ids in iteration order.
    pub fn from_labeled<S, I>(items: I) -> Result<Self, DatasetError>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, Label)>,
    {
        let mut comments = Vec::new();
        let mut counts = ClassCounts::default();
        for (index, (text, label)) in items.into_iter().enumerate() {
            let text = text.into();
            if text.trim().is_empty() {
                return Err(DatasetError::EmptyText { index });
            }
            counts.add(label);
            comments.push(RawComment { id: index, text, label });
        }
        Ok(Corpus { comments, counts })
    }

    pub fn comments(&self) -> &[RawComment] {
        &self.comments
    }

    pub fn counts(&self) -> ClassCounts {
        self.counts
    }

    pub fn len(&self) -> usize {
        self.comments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comments.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.comments.iter().map(|c| c.label).collect()
    }

    /// New corpus from the given positions, re-numbered densely in the order given.
    pub fn subset(&self, indices: &[usize]) -> Corpus {
        let mut counts = ClassCounts::default();
        let comments = indices
            .iter()
            .enumerate()
            .map(|(id, &i)| {
                let c = &self.comments[i];
                counts.add(c.label);
                RawComment { id, text: c.text.clone(), label: c.label }
            })
            .collect();
        Corpus { comments, counts }
    }
}

/// Fraction of each class in a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassBalance {
    pub positive: f64,
    pub negative: f64,
    pub total: usize,
}

impl ClassBalance {
    pub fn from_counts(counts: ClassCounts) -> Result<Self, DatasetError> {
        let total = counts.total();
        if total == 0 {
            return Err(DatasetError::EmptyCorpus);
        }
        let positive = counts.positive as f64 / total as f64;
        Ok(ClassBalance { positive, negative: 1.0 - positive, total })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("balance serializes")
    }
}

impl fmt::Display for ClassBalance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "total:    {}", self.total)?;
        writeln!(f, "positive: {:.2}%", self.positive * 100.0)?;
        write!(f, "negative: {:.2}%", self.negative * 100.0)
    }
}

pub fn class_balance(corpus: &Corpus) -> Result<ClassBalance, DatasetError> {
    ClassBalance::from_counts(corpus.counts())
}
