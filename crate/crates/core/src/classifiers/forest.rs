use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decision_tree::{DecisionTreeModel, TreeParams};
use super::tree::FeatureSampling;
use super::{ClassifierError, TrainingSet};
use crate::features::DocTermMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeatures {
    /// `ceil(sqrt(V))` features per split.
    Sqrt,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub bootstrap: bool,
    pub max_features: MaxFeatures,
    pub tree: TreeParams,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams { n_trees: 100, bootstrap: true, max_features: MaxFeatures::Sqrt, tree: TreeParams::default() }
    }
}

/// Bagged CART trees with per-split feature sampling; majority vote.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForestModel {
    pub n_features: usize,
    pub trees: Vec<DecisionTreeModel>,
}

impl RandomForestModel {
    pub fn fit(params: &ForestParams, data: &TrainingSet<'_>, seed: u64) -> Result<Self, ClassifierError> {
        if params.n_trees == 0 {
            return Err(ClassifierError::InvalidHyperparameter("n_trees must be >= 1".into()));
        }
        params.tree.validate()?;
        let n = data.len();
        let sampling = match params.max_features {
            MaxFeatures::All => FeatureSampling::All,
            MaxFeatures::Sqrt => FeatureSampling::Random(((data.x.n_cols as f64).sqrt().ceil() as usize).max(1)),
        };
        let mut master = ChaCha8Rng::seed_from_u64(seed);
        let tree_seeds: Vec<u64> = (0..params.n_trees).map(|_| master.random()).collect();

        let trees = tree_seeds
            .par_iter()
            .map(|&tree_seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(tree_seed);
                let weights = if params.bootstrap {
                    let mut w = vec![0.0; n];
                    for _ in 0..n {
                        w[rng.random_range(0..n)] += 1.0;
                    }
                    w
                } else {
                    vec![1.0; n]
                };
                DecisionTreeModel::grow_weighted(&params.tree, data, &weights, sampling, rng.random())
            })
            .collect();
        Ok(RandomForestModel { n_features: data.x.n_cols, trees })
    }

    /// Fraction of trees voting Positive.
    pub fn scores(&self, x: &DocTermMatrix) -> Vec<f64> {
        x.rows
            .par_iter()
            .map(|r| {
                let votes = self.trees.iter().filter(|t| t.predict_positive(r)).count();
                votes as f64 / self.trees.len() as f64
            })
            .collect()
    }
}
