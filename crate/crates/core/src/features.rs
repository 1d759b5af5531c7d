//! Vocabulary fitting and sparse document-term features.
//!
//! Both vectorizers index terms lexicographically. TF-IDF uses the smoothed
//! inverse document frequency `ln((1 + N) / (1 + df)) + 1` on raw counts,
//! followed by L2 row normalization.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FeatureError {
    #[error("no non-empty training documents")]
    EmptyTrainingSet,
    #[error("invalid vectorizer document: {0}")]
    InvalidVectorizer(String),
    #[error("sparse entries must have strictly increasing indices and non-zero values")]
    InvalidSparse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Counts,
    TfIdf,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 2] = [FeatureKind::Counts, FeatureKind::TfIdf];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureKind::Counts => "counts",
            FeatureKind::TfIdf => "tfidf",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            FeatureKind::Counts => "Count-Vectorization",
            FeatureKind::TfIdf => "TF-IDF",
        }
    }
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "counts" | "count" | "count-vectorization" | "cvec" | "bow" => Ok(FeatureKind::Counts),
            "tfidf" | "tf-idf" | "tvec" => Ok(FeatureKind::TfIdf),
            other => Err(format!("unknown feature extraction '{other}' (expected counts or tfidf)")),
        }
    }
}

/// Sparse row: `(column, value)` pairs, columns strictly increasing, no zeros.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVec {
    entries: Vec<(usize, f64)>,
}

impl SparseVec {
    pub fn new(entries: Vec<(usize, f64)>) -> Result<Self, FeatureError> {
        let ordered = entries.windows(2).all(|w| w[0].0 < w[1].0);
        if !ordered || entries.iter().any(|&(_, v)| v == 0.0 || !v.is_finite()) {
            return Err(FeatureError::InvalidSparse);
        }
        Ok(SparseVec { entries })
    }

    pub fn from_dense(values: &[f64]) -> Self {
        SparseVec {
            entries: values.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, v)| (i, *v)).collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> f64 {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn densify(&self, n_cols: usize) -> Vec<f64> {
        let mut dense = vec![0.0; n_cols];
        for &(i, v) in &self.entries {
            dense[i] = v;
        }
        dense
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.1 * e.1).sum::<f64>().sqrt()
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| v * dense[i]).sum()
    }

    /// Squared Euclidean distance by sorted merge.
    pub fn squared_distance(&self, other: &SparseVec) -> f64 {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut acc = 0.0;
        while i < a.len() && j < b.len() {
            let (ia, va) = a[i];
            let (ib, vb) = b[j];
            if ia == ib {
                acc += (va - vb) * (va - vb);
                i += 1;
                j += 1;
            } else if ia < ib {
                acc += va * va;
                i += 1;
            } else {
                acc += vb * vb;
                j += 1;
            }
        }
        acc += a[i..].iter().map(|e| e.1 * e.1).sum::<f64>();
        acc += b[j..].iter().map(|e| e.1 * e.1).sum::<f64>();
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocTermMatrix {
    pub rows: Vec<SparseVec>,
    pub n_cols: usize,
    pub weighting: FeatureKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixStats {
    pub rows: usize,
    pub n_cols: usize,
    pub nnz: usize,
    pub density: f64,
}

impl DocTermMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn stats(&self) -> MatrixStats {
        let nnz = self.rows.iter().map(SparseVec::nnz).sum();
        let cells = self.rows.len() * self.n_cols;
        MatrixStats {
            rows: self.rows.len(),
            n_cols: self.n_cols,
            nnz,
            density: if cells == 0 { 0.0 } else { nnz as f64 / cells as f64 },
        }
    }

    pub fn select_rows(&self, indices: &[usize]) -> DocTermMatrix {
        DocTermMatrix {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            n_cols: self.n_cols,
            weighting: self.weighting,
        }
    }
}

/// Term to column map over a training split, with document frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    document_frequency: Vec<usize>,
    n_docs: usize,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn document_frequency(&self) -> &[usize] {
        &self.document_frequency
    }

    pub fn df(&self, term: &str) -> Option<usize> {
        self.index_of(term).map(|i| self.document_frequency[i])
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    fn from_parts(terms: Vec<String>, document_frequency: Vec<usize>, n_docs: usize) -> Self {
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Vocabulary { terms, index, document_frequency, n_docs }
    }
}

/// Indexes every term of the training documents, in lexicographic order.
pub fn fit_vocabulary<D: AsRef<[String]>>(docs: &[D]) -> Result<Vocabulary, FeatureError> {
    if docs.iter().all(|d| d.as_ref().is_empty()) {
        return Err(FeatureError::EmptyTrainingSet);
    }
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in docs {
        let mut seen: Vec<&str> = doc.as_ref().iter().map(String::as_str).collect();
        seen.sort_unstable();
        seen.dedup();
        for t in seen {
            *df.entry(t).or_default() += 1;
        }
    }
    let (terms, freqs) = df.into_iter().map(|(t, n)| (t.to_owned(), n)).unzip();
    Ok(Vocabulary::from_parts(terms, freqs, docs.len()))
}

fn term_counts(doc: &[String], vocab: &Vocabulary) -> Vec<(usize, f64)> {
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for t in doc {
        if let Some(i) = vocab.index_of(t) {
            *counts.entry(i).or_default() += 1.0;
        }
    }
    counts.into_iter().collect()
}

/// Occurrence counts of in-vocabulary tokens.
pub fn transform_counts(doc: &[String], vocab: &Vocabulary) -> SparseVec {
    SparseVec { entries: term_counts(doc, vocab) }
}

pub fn smoothed_idf(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

pub fn fit_tfidf<D: AsRef<[String]>>(docs: &[D]) -> Result<(Vocabulary, Vec<f64>), FeatureError> {
    let vocab = fit_vocabulary(docs)?;
    let idf = vocab.document_frequency.iter().map(|&df| smoothed_idf(vocab.n_docs, df)).collect();
    Ok((vocab, idf))
}

pub fn transform_tfidf(doc: &[String], vocab: &Vocabulary, idf: &[f64]) -> SparseVec {
    let mut entries = term_counts(doc, vocab);
    for (i, v) in entries.iter_mut() {
        *v *= idf[*i];
    }
    let norm = entries.iter().map(|e| e.1 * e.1).sum::<f64>().sqrt();
    if norm > 0.0 {
        for e in entries.iter_mut() {
            e.1 /= norm;
        }
    }
    SparseVec { entries }
}

/// A fitted count or TF-IDF transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorizerDocument", into = "VectorizerDocument")]
pub enum Vectorizer {
    Counts { vocabulary: Vocabulary },
    TfIdf { vocabulary: Vocabulary, idf: Vec<f64> },
}

impl Vectorizer {
    pub fn fit<D: AsRef<[String]>>(kind: FeatureKind, docs: &[D]) -> Result<Self, FeatureError> {
        Ok(match kind {
            FeatureKind::Counts => Vectorizer::Counts { vocabulary: fit_vocabulary(docs)? },
            FeatureKind::TfIdf => {
                let (vocabulary, idf) = fit_tfidf(docs)?;
                Vectorizer::TfIdf { vocabulary, idf }
            }
        })
    }

    pub fn kind(&self) -> FeatureKind {
        match self {
            Vectorizer::Counts { .. } => FeatureKind::Counts,
            Vectorizer::TfIdf { .. } => FeatureKind::TfIdf,
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        match self {
            Vectorizer::Counts { vocabulary } | Vectorizer::TfIdf { vocabulary, .. } => vocabulary,
        }
    }

    pub fn idf(&self) -> Option<&[f64]> {
        match self {
            Vectorizer::Counts { .. } => None,
            Vectorizer::TfIdf { idf, .. } => Some(idf),
        }
    }

    pub fn n_features(&self) -> usize {
        self.vocabulary().len()
    }

    pub fn transform(&self, doc: &[String]) -> SparseVec {
        match self {
            Vectorizer::Counts { vocabulary } => transform_counts(doc, vocabulary),
            Vectorizer::TfIdf { vocabulary, idf } => transform_tfidf(doc, vocabulary, idf),
        }
    }

    pub fn transform_all<D: AsRef<[String]> + Sync>(&self, docs: &[D]) -> DocTermMatrix {
        DocTermMatrix {
            rows: docs.par_iter().map(|d| self.transform(d.as_ref())).collect(),
            n_cols: self.n_features(),
            weighting: self.kind(),
        }
    }
}

/// JSON form: `{"terms": {...}, "idf": [...], "df": [...], "n_docs": N, "weighting": "..."}`.
#[derive(Serialize, Deserialize)]
struct VectorizerDocument {
    terms: BTreeMap<String, usize>,
    idf: Vec<f64>,
    df: Vec<usize>,
    n_docs: usize,
    weighting: FeatureKind,
}

impl From<Vectorizer> for VectorizerDocument {
    fn from(v: Vectorizer) -> Self {
        let weighting = v.kind();
        let idf = v.idf().map(<[f64]>::to_vec).unwrap_or_default();
        let vocab = v.vocabulary();
        VectorizerDocument {
            terms: vocab.terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect(),
            idf,
            df: vocab.document_frequency.clone(),
            n_docs: vocab.n_docs,
            weighting,
        }
    }
}

impl TryFrom<VectorizerDocument> for Vectorizer {
    type Error = FeatureError;

    fn try_from(doc: VectorizerDocument) -> Result<Self, Self::Error> {
        let n = doc.terms.len();
        let mut terms = vec![String::new(); n];
        for (term, i) in doc.terms {
            if i >= n || !terms[i].is_empty() {
                return Err(FeatureError::InvalidVectorizer(format!("index {i} of '{term}' is not dense")));
            }
            terms[i] = term;
        }
        if doc.df.len() != n || doc.df.iter().any(|&d| d == 0 || d > doc.n_docs) {
            return Err(FeatureError::InvalidVectorizer("document frequencies do not match terms".into()));
        }
        let vocabulary = Vocabulary::from_parts(terms, doc.df, doc.n_docs);
        match doc.weighting {
            FeatureKind::Counts => Ok(Vectorizer::Counts { vocabulary }),
            FeatureKind::TfIdf if doc.idf.len() == n => Ok(Vectorizer::TfIdf { vocabulary, idf: doc.idf }),
            FeatureKind::TfIdf => Err(FeatureError::InvalidVectorizer("idf length does not match terms".into())),
        }
    }
}
