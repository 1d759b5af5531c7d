use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ClassifierError, TrainingSet};
use crate::features::{DocTermMatrix, SparseVec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NbParams {
    /// Additive smoothing.
    pub alpha: f64,
}

impl Default for NbParams {
    fn default() -> Self {
        NbParams { alpha: 1.0 }
    }
}

/// Per-class log-likelihoods of each term being present or absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassLikelihood {
    pub log_prior: f64,
    pub log_present: Vec<f64>,
    pub log_absent: Vec<f64>,
}

impl ClassLikelihood {
    fn fit(rows: &[&SparseVec], n_features: usize, n_total: usize, alpha: f64) -> Self {
        let mut present = vec![0usize; n_features];
        for r in rows {
            for &(j, v) in r.entries() {
                if v > 0.0 {
                    present[j] += 1;
                }
            }
        }
        let n = rows.len() as f64;
        let (log_present, log_absent) = present
            .iter()
            .map(|&c| {
                let p = (c as f64 + alpha) / (n + 2.0 * alpha);
                (p.ln(), (1.0 - p).ln())
            })
            .unzip();
        ClassLikelihood { log_prior: (n / n_total as f64).ln(), log_present, log_absent }
    }

    /// `log P(c) + log P(x | c)` for the binarized row.
    pub fn joint_log_likelihood(&self, row: &SparseVec) -> f64 {
        let mut ll = self.log_prior + self.log_absent.iter().sum::<f64>();
        for &(j, v) in row.entries() {
            if v > 0.0 {
                ll += self.log_present[j] - self.log_absent[j];
            }
        }
        ll
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernoulliNbModel {
    pub n_features: usize,
    pub positive: ClassLikelihood,
    pub negative: ClassLikelihood,
}

impl BernoulliNbModel {
    pub fn fit(params: &NbParams, data: &TrainingSet<'_>) -> Result<Self, ClassifierError> {
        if params.alpha.is_nan() || params.alpha <= 0.0 {
            return Err(ClassifierError::InvalidHyperparameter("alpha must be > 0".into()));
        }
        let n_features = data.x.n_cols;
        let n = data.x.rows.len();
        let split = |want: bool| -> Vec<&SparseVec> {
            data.x.rows.iter().zip(&data.positive).filter(|(_, &p)| p == want).map(|(r, _)| r).collect()
        };
        Ok(BernoulliNbModel {
            n_features,
            positive: ClassLikelihood::fit(&split(true), n_features, n, params.alpha),
            negative: ClassLikelihood::fit(&split(false), n_features, n, params.alpha),
        })
    }

    /// `log P(Positive | x) - log P(Negative | x)`.
    pub fn log_odds(&self, row: &SparseVec) -> f64 {
        self.positive.joint_log_likelihood(row) - self.negative.joint_log_likelihood(row)
    }

    /// `(P(Positive | x), P(Negative | x))`.
    pub fn posteriors(&self, row: &SparseVec) -> (f64, f64) {
        let pos = 1.0 / (1.0 + (-self.log_odds(row)).exp());
        (pos, 1.0 - pos)
    }

    pub fn scores(&self, x: &DocTermMatrix) -> Vec<f64> {
        x.rows.par_iter().map(|r| self.log_odds(r)).collect()
    }
}
