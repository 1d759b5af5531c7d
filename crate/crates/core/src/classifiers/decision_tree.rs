use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{grow, ClassTally, FeatureSampling, Gini, GrowOptions, Tree};
use super::{ClassifierError, TrainingSet};
use crate::features::DocTermMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    /// `None` grows until leaves are pure.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { max_depth: None, min_samples_split: 2 }
    }
}

impl TreeParams {
    pub(crate) fn validate(&self) -> Result<(), ClassifierError> {
        if self.max_depth == Some(0) {
            return Err(ClassifierError::InvalidHyperparameter("max_depth must be >= 1".into()));
        }
        if self.min_samples_split < 2 {
            return Err(ClassifierError::InvalidHyperparameter("min_samples_split must be >= 2".into()));
        }
        Ok(())
    }
}

/// CART classification tree; leaves keep their weighted class tallies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTreeModel {
    pub n_features: usize,
    pub tree: Tree<ClassTally>,
}

impl DecisionTreeModel {
    pub fn fit(params: &TreeParams, data: &TrainingSet<'_>) -> Result<Self, ClassifierError> {
        params.validate()?;
        let weights = vec![1.0; data.len()];
        Ok(Self::grow_weighted(params, data, &weights, FeatureSampling::All, 0))
    }

    /// Grows on rows with positive weight.
    pub(crate) fn grow_weighted(
        params: &TreeParams,
        data: &TrainingSet<'_>,
        weights: &[f64],
        sampling: FeatureSampling,
        seed: u64,
    ) -> Self {
        let gini = Gini { positive: &data.positive, weights, min_samples_split: params.min_samples_split };
        let rows: Vec<usize> = (0..data.len()).filter(|&i| weights[i] > 0.0).collect();
        let opts = GrowOptions { max_depth: params.max_depth, sampling };
        let tree = grow(data.x, rows, &gini, &opts, &mut ChaCha8Rng::seed_from_u64(seed));
        DecisionTreeModel { n_features: data.x.n_cols, tree }
    }

    /// Leaf majority; an even leaf predicts Negative.
    pub fn predict_positive(&self, row: &crate::features::SparseVec) -> bool {
        let leaf = self.tree.leaf_for(row);
        leaf.positive > leaf.negative
    }

    /// Positive fraction of the leaf reached.
    pub fn scores(&self, x: &DocTermMatrix) -> Vec<f64> {
        x.rows.par_iter().map(|r| self.tree.leaf_for(r).positive_fraction()).collect()
    }
}
