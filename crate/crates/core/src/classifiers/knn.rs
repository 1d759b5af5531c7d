use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ClassifierError, TrainingSet};
use crate::features::{DocTermMatrix, SparseVec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        KnnParams { k: 5 }
    }
}

/// Stores the training rows; prediction is a majority vote of the `k`
/// nearest rows by Euclidean distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub n_features: usize,
    pub rows: Vec<SparseVec>,
    pub positive: Vec<bool>,
}

impl KnnModel {
    pub fn fit(params: &KnnParams, data: &TrainingSet<'_>) -> Result<Self, ClassifierError> {
        if params.k == 0 {
            return Err(ClassifierError::InvalidHyperparameter("k must be >= 1".into()));
        }
        Ok(KnnModel {
            k: params.k,
            n_features: data.x.n_cols,
            rows: data.x.rows.clone(),
            positive: data.positive.clone(),
        })
    }

    /// Training rows nearest to `query`; distance ties go to the lower row index.
    pub fn neighbors(&self, query: &SparseVec) -> Vec<usize> {
        let mut dist: Vec<(f64, usize)> =
            self.rows.iter().enumerate().map(|(i, r)| (query.squared_distance(r), i)).collect();
        let k = self.k.min(dist.len());
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < dist.len() {
            dist.select_nth_unstable_by(k - 1, cmp);
            dist.truncate(k);
        }
        dist.sort_by(cmp);
        dist.into_iter().map(|(_, i)| i).collect()
    }

    /// Fraction of Positive votes among the neighbors.
    pub fn scores(&self, x: &DocTermMatrix) -> Vec<f64> {
        x.rows
            .par_iter()
            .map(|q| {
                let nn = self.neighbors(q);
                nn.iter().filter(|&&i| self.positive[i]).count() as f64 / nn.len() as f64
            })
            .collect()
    }
}
