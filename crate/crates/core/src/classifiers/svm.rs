use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ClassifierError, TrainingSet};
use crate::features::{DocTermMatrix, SparseVec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub lambda: f64,
    pub epochs: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams { lambda: 1e-4, epochs: 20 }
    }
}

/// Linear max-margin separator trained by stochastic subgradient descent
/// on the regularized hinge loss.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub n_features: usize,
    pub weights: Vec<f64>,
    pub bias: f64,
}

/// Weights stored as `scale * v` so the shrink step is O(1).
struct ScaledWeights {
    v: Vec<f64>,
    bias: f64,
    scale: f64,
}

impl ScaledWeights {
    fn margin(&self, row: &SparseVec) -> f64 {
        self.scale * (row.dot_dense(&self.v) + self.bias)
    }

    fn shrink(&mut self, factor: f64) {
        if factor <= 0.0 {
            self.v.fill(0.0);
            self.bias = 0.0;
            self.scale = 1.0;
            return;
        }
        self.scale *= factor;
        if self.scale < 1e-9 {
            self.v.iter_mut().for_each(|w| *w *= self.scale);
            self.bias *= self.scale;
            self.scale = 1.0;
        }
    }

    fn add(&mut self, row: &SparseVec, step: f64) {
        let s = step / self.scale;
        for &(j, x) in row.entries() {
            self.v[j] += s * x;
        }
        self.bias += s;
    }

    fn finish(self) -> (Vec<f64>, f64) {
        let scale = self.scale;
        (self.v.into_iter().map(|w| w * scale).collect(), self.bias * scale)
    }

    fn squared_norm(&self) -> f64 {
        let s2 = self.scale * self.scale;
        s2 * (self.v.iter().map(|w| w * w).sum::<f64>() + self.bias * self.bias)
    }
}

fn objective(w: &ScaledWeights, data: &TrainingSet<'_>, lambda: f64) -> f64 {
    let hinge: f64 = data
        .x
        .rows
        .iter()
        .zip(&data.positive)
        .map(|(r, &p)| {
            let y = if p { 1.0 } else { -1.0 };
            (1.0 - y * w.margin(r)).max(0.0)
        })
        .sum();
    lambda / 2.0 * w.squared_norm() + hinge / data.len() as f64
}

impl SvmModel {
    pub fn fit(params: &SvmParams, data: &TrainingSet<'_>, seed: u64) -> Result<Self, ClassifierError> {
        Self::train_with_history(params, data, seed).map(|(m, _)| m)
    }

    /// Also returns the regularized hinge objective after each epoch.
    pub fn train_with_history(
        params: &SvmParams,
        data: &TrainingSet<'_>,
        seed: u64,
    ) -> Result<(Self, Vec<f64>), ClassifierError> {
        if params.lambda.is_nan() || params.lambda <= 0.0 {
            return Err(ClassifierError::InvalidHyperparameter("lambda must be > 0".into()));
        }
        if params.epochs == 0 {
            return Err(ClassifierError::InvalidHyperparameter("epochs must be >= 1".into()));
        }
        let n_features = data.x.n_cols;
        let mut w = ScaledWeights { v: vec![0.0; n_features], bias: 0.0, scale: 1.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..data.len()).collect();
        let mut history = Vec::with_capacity(params.epochs);
        let mut t = 0u64;
        for _ in 0..params.epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                t += 1;
                let eta = 1.0 / (params.lambda * t as f64);
                let row = &data.x.rows[i];
                let y = if data.positive[i] { 1.0 } else { -1.0 };
                let violated = y * w.margin(row) < 1.0;
                w.shrink(1.0 - eta * params.lambda);
                if violated {
                    w.add(row, eta * y);
                }
            }
            history.push(objective(&w, data, params.lambda));
        }
        let (weights, bias) = w.finish();
        Ok((SvmModel { n_features, weights, bias }, history))
    }

    pub fn margin(&self, row: &SparseVec) -> f64 {
        row.dot_dense(&self.weights) + self.bias
    }

    pub fn scores(&self, x: &DocTermMatrix) -> Vec<f64> {
        x.rows.par_iter().map(|r| self.margin(r)).collect()
    }
}
