//! A fitted vectorizer and classifier persisted together.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{self, ClassifierError, ClassifierSpec, TrainedModel};
use crate::dataset::{Corpus, Label};
use crate::error::{Error, Result};
use crate::features::{DocTermMatrix, FeatureKind, Vectorizer};
use crate::textprep::{clean_text, preprocess_corpus, EmptyPolicy, LexiconChecksums, Lexicons};

/// Version stamped on saved pipelines.
pub const PIPELINE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: Label,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pipeline {
    pub format_version: u32,
    pub spec: ClassifierSpec,
    pub vectorizer: Vectorizer,
    pub model: TrainedModel,
    /// Lexicons used while cleaning the training text.
    pub lexicon_checksums: LexiconChecksums,
}

/// Cleaned tokens as the vectorizer sees them; empty comments map to the
/// sentinel token.
pub fn model_tokens(text: &str, lex: &Lexicons) -> Vec<String> {
    clean_text(text, lex).sentinel_tokens()
}

impl Pipeline {
    /// Cleans the corpus, fits the vectorizer on it and trains the model.
    pub fn train(corpus: &Corpus, lex: &Lexicons, features: FeatureKind, spec: &ClassifierSpec) -> Result<Self> {
        let pre = preprocess_corpus(corpus, lex, EmptyPolicy::Sentinel);
        let vectorizer = Vectorizer::fit(features, &pre.docs)?;
        let x = vectorizer.transform_all(&pre.docs);
        let model = classifiers::fit(spec, &x, &pre.labels())?;
        Ok(Pipeline {
            format_version: PIPELINE_FORMAT_VERSION,
            spec: *spec,
            vectorizer,
            model,
            lexicon_checksums: lex.checksums().clone(),
        })
    }

    pub fn checksums_match(&self, lex: &Lexicons) -> bool {
        &self.lexicon_checksums == lex.checksums()
    }

    pub fn featurize<S: AsRef<str> + Sync>(&self, texts: &[S], lex: &Lexicons) -> DocTermMatrix {
        let docs: Vec<Vec<String>> = texts.par_iter().map(|t| model_tokens(t.as_ref(), lex)).collect();
        self.vectorizer.transform_all(&docs)
    }

    /// Label and score per text. Warns when `lex` differs from the training
    /// lexicons.
    pub fn predict<S: AsRef<str> + Sync>(&self, texts: &[S], lex: &Lexicons) -> Result<Vec<Prediction>> {
        if !self.checksums_match(lex) {
            log::warn!("lexicons differ from the ones used at training time; vocabulary lookups may drift");
        }
        let x = self.featurize(texts, lex);
        let scores = self.model.predict_score(&x)?;
        let kind = self.model.score_kind();
        Ok(scores.into_iter().map(|score| Prediction { label: kind.label(score), score }).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pipeline is serializable")
    }

    pub fn from_json(json: &str) -> std::result::Result<Self, ClassifierError> {
        #[derive(Deserialize)]
        struct Header {
            format_version: u32,
        }
        let header: Header = serde_json::from_str(json)?;
        if header.format_version != PIPELINE_FORMAT_VERSION {
            return Err(ClassifierError::UnsupportedVersion {
                expected: PIPELINE_FORMAT_VERSION,
                found: header.format_version,
            });
        }
        Ok(serde_json::from_str(json)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let json = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        match Self::from_json(&json) {
            Ok(p) => Ok(p),
            Err(ClassifierError::Json(e)) => Err(Error::json(path, e)),
            Err(e) => Err(e.into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::ClassifierKind;

    fn corpus() -> Corpus {
        Corpus::from_labeled(vec![
            ("alhamdulillah rezeki lancar", Label::Positive),
            ("syukur sehat selalu", Label::Positive),
            ("semoga rezeki lancar", Label::Positive),
            ("pajak naik takut", Label::Negative),
            ("harga naik susah", Label::Negative),
            ("takut susah bayar pajak", Label::Negative),
        ])
        .unwrap()
    }

    #[test]
    fn round_trip_reproduces_predictions() {
        let lex = Lexicons::builtin();
        let spec = ClassifierSpec::default_for(ClassifierKind::DecisionTree, 42);
        let p = Pipeline::train(&corpus(), &lex, FeatureKind::TfIdf, &spec).unwrap();
        let texts: Vec<String> = corpus().comments().iter().map(|c| c.text.clone()).collect();
        let before = p.predict(&texts, &lex).unwrap();
        let labels: Vec<Label> = before.iter().map(|x| x.label).collect();
        assert_eq!(labels, corpus().labels());
        let back = Pipeline::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.predict(&texts, &lex).unwrap(), before);
    }

    #[test]
    fn blank_text_still_predicts() {
        let lex = Lexicons::builtin();
        let spec = ClassifierSpec::default_for(ClassifierKind::BernoulliNb, 42);
        let p = Pipeline::train(&corpus(), &lex, FeatureKind::Counts, &spec).unwrap();
        assert_eq!(p.predict(&["", "!!!"], &lex).unwrap().len(), 2);
    }

    #[test]
    fn version_is_checked() {
        let lex = Lexicons::builtin();
        let spec = ClassifierSpec::default_for(ClassifierKind::Knn, 42);
        let json = Pipeline::train(&corpus(), &lex, FeatureKind::Counts, &spec).unwrap().to_json();
        let json = json.replacen("\"format_version\":1", "\"format_version\":2", 1);
        assert!(matches!(Pipeline::from_json(&json), Err(ClassifierError::UnsupportedVersion { found: 2, .. })));
    }
}
