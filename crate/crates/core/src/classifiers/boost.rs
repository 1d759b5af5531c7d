use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{grow, FeatureSampling, GrowOptions, Newton, Tree};
use super::{ClassifierError, TrainingSet};
use crate::features::{DocTermMatrix, SparseVec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostParams {
    pub rounds: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub lambda: f64,
    pub min_child_weight: f64,
}

impl Default for BoostParams {
    fn default() -> Self {
        BoostParams { rounds: 100, learning_rate: 0.3, max_depth: 6, lambda: 1.0, min_child_weight: 1.0 }
    }
}

/// Gradient-boosted regression trees on the logistic loss. Scores are
/// log-odds of Positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradBoostModel {
    pub n_features: usize,
    pub base_score: f64,
    pub learning_rate: f64,
    pub trees: Vec<Tree<f64>>,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Mean logistic loss of log-odds `f` against the labels.
pub fn logistic_loss(f: &[f64], positive: &[bool]) -> f64 {
    let total: f64 = f
        .iter()
        .zip(positive)
        .map(|(&z, &p)| {
            let m = if p { z } else { -z };
            // ln(1 + e^-m), stable for large |m|
            if m > 0.0 { (-m).exp().ln_1p() } else { -m + m.exp().ln_1p() }
        })
        .sum();
    total / f.len() as f64
}

impl GradBoostModel {
    pub fn fit(params: &BoostParams, data: &TrainingSet<'_>) -> Result<Self, ClassifierError> {
        Self::train_with_history(params, data).map(|(m, _)| m)
    }

    /// Also returns the training logistic loss after each round.
    pub fn train_with_history(
        params: &BoostParams,
        data: &TrainingSet<'_>,
    ) -> Result<(Self, Vec<f64>), ClassifierError> {
        if !(params.learning_rate > 0.0 && params.learning_rate <= 1.0) {
            return Err(ClassifierError::InvalidHyperparameter("learning_rate must be in (0, 1]".into()));
        }
        if params.max_depth == 0 {
            return Err(ClassifierError::InvalidHyperparameter("max_depth must be >= 1".into()));
        }
        if params.lambda.is_nan() || params.lambda <= 0.0 {
            return Err(ClassifierError::InvalidHyperparameter("lambda must be > 0".into()));
        }
        if params.min_child_weight.is_nan() || params.min_child_weight < 0.0 {
            return Err(ClassifierError::InvalidHyperparameter("min_child_weight must be >= 0".into()));
        }
        let n = data.len();
        let n_pos = data.positive.iter().filter(|&&p| p).count() as f64;
        let prior = n_pos / n as f64;
        let base_score = (prior / (1.0 - prior)).ln();

        let mut f = vec![base_score; n];
        let mut trees = Vec::with_capacity(params.rounds);
        let mut history = Vec::with_capacity(params.rounds);
        let opts = GrowOptions { max_depth: Some(params.max_depth), sampling: FeatureSampling::All };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..params.rounds {
            let (grad, hess): (Vec<f64>, Vec<f64>) = f
                .iter()
                .zip(&data.positive)
                .map(|(&z, &p)| {
                    let q = sigmoid(z);
                    (q - if p { 1.0 } else { 0.0 }, q * (1.0 - q))
                })
                .unzip();
            let newton = Newton { grad: &grad, hess: &hess, lambda: params.lambda, min_child_weight: params.min_child_weight };
            let tree = grow(data.x, (0..n).collect(), &newton, &opts, &mut rng);
            for (fi, row) in f.iter_mut().zip(&data.x.rows) {
                *fi += params.learning_rate * tree.leaf_for(row);
            }
            trees.push(tree);
            history.push(logistic_loss(&f, &data.positive));
        }
        Ok((GradBoostModel { n_features: data.x.n_cols, base_score, learning_rate: params.learning_rate, trees }, history))
    }

    pub fn log_odds(&self, row: &SparseVec) -> f64 {
        self.base_score + self.learning_rate * self.trees.iter().map(|t| t.leaf_for(row)).sum::<f64>()
    }

    pub fn scores(&self, x: &DocTermMatrix) -> Vec<f64> {
        x.rows.par_iter().map(|r| self.log_odds(r)).collect()
    }
}
