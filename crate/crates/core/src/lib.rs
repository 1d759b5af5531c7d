//! Anxiety (negative) vs. hope (positive) sentiment classification for short
//! Indonesian social-media comments.
//!
//! The crate covers the whole pipeline: CSV ingestion ([`dataset`]), text
//! cleaning ([`textprep`]), count and TF-IDF features ([`features`]), six
//! native classifiers ([`classifiers`]) and confusion-matrix evaluation with a
//! benchmark grid ([`eval`]). [`pipeline`] bundles a fitted vectorizer with a
//! trained model; [`cli`] wires everything into the `anxiety` binary.

pub mod classifiers;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod features;
pub mod pipeline;
pub mod textprep;

pub use classifiers::{ClassifierKind, ClassifierSpec, TrainedModel};
pub use dataset::{Corpus, Label, RawComment};
pub use error::{Error, Result};
pub use features::{DocTermMatrix, FeatureKind, SparseVec, Vectorizer, Vocabulary};
pub use pipeline::Pipeline;
pub use textprep::{CleanDocument, EmotionAnnotation, Lexicons};
