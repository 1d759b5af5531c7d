use proptest::prelude::*;

use super::tree::{ClassTally, Node, Tree};
use super::*;
use crate::features::{FeatureKind, SparseVec};

fn matrix(rows: &[Vec<f64>]) -> DocTermMatrix {
    DocTermMatrix {
        rows: rows.iter().map(|r| SparseVec::from_dense(r)).collect(),
        n_cols: rows.first().map_or(0, |r| r.len()),
        weighting: FeatureKind::Counts,
    }
}

fn labels(bits: &[bool]) -> Vec<Label> {
    bits.iter().map(|&p| Label::from_positive(p)).collect()
}

fn spec(params: Hyperparameters) -> ClassifierSpec {
    ClassifierSpec::new(params, 42)
}

fn accuracy(pred: &[Label], y: &[Label]) -> f64 {
    pred.iter().zip(y).filter(|(a, b)| a == b).count() as f64 / y.len() as f64
}

/// Two well-separated blobs on disjoint features.
fn separable() -> (DocTermMatrix, Vec<Label>) {
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for i in 0..20 {
        let a = 1.0 + (i % 3) as f64;
        let b = 1.0 + (i % 2) as f64;
        if i % 2 == 0 {
            rows.push(vec![a, b, 0.0, 0.0]);
            y.push(Label::Positive);
        } else {
            rows.push(vec![0.0, 0.0, a, b]);
            y.push(Label::Negative);
        }
    }
    (matrix(&rows), y)
}

/// Nine rows whose feature 0 carries the label most of the time.
fn noisy() -> (DocTermMatrix, Vec<Label>) {
    let rows = vec![
        vec![1.0, 0.0, 1.0],
        vec![1.0, 1.0, 0.0],
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 1.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![1.0, 1.0, 1.0],
        vec![0.0, 0.0, 0.0],
        vec![1.0, 0.0, 1.0],
    ];
    let y = labels(&[true, true, true, false, false, false, false, true, false]);
    (matrix(&rows), y)
}

// Bayes rule by direct products over a binary training table.
fn brute_force_posterior(train: &[Vec<bool>], y: &[bool], query: &[bool]) -> (f64, f64) {
    let joint = |class: bool| {
        let members: Vec<&Vec<bool>> = train.iter().zip(y).filter(|(_, &c)| c == class).map(|(r, _)| r).collect();
        let n_c = members.len() as f64;
        let mut p = n_c / train.len() as f64;
        for (j, &q) in query.iter().enumerate() {
            let present = members.iter().filter(|r| r[j]).count() as f64;
            let theta = (present + 1.0) / (n_c + 2.0);
            p *= if q { theta } else { 1.0 - theta };
        }
        p
    };
    let (pos, neg) = (joint(true), joint(false));
    (pos / (pos + neg), neg / (pos + neg))
}

fn bits_to_row(bits: &[bool]) -> Vec<f64> {
    bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
}

#[test]
fn nb_matches_exhaustive_bayes_rule_on_four_terms() {
    let train: Vec<Vec<bool>> = vec![
        vec![true, false, true, false],
        vec![true, true, false, false],
        vec![false, false, true, true],
        vec![false, true, false, true],
        vec![true, false, false, true],
        vec![false, false, false, false],
        vec![true, true, true, false],
    ];
    let y = [true, true, false, false, true, false, false];
    let x = matrix(&train.iter().map(|r| bits_to_row(r)).collect::<Vec<_>>());
    let model = fit(&ClassifierSpec::default_for(ClassifierKind::BernoulliNb, 0), &x, &labels(&y)).unwrap();
    let TrainedModel::BernoulliNb(nb) = &model else { panic!("wrong kind") };
    for code in 0..16u32 {
        let q: Vec<bool> = (0..4).map(|j| code >> j & 1 == 1).collect();
        let (want_pos, want_neg) = brute_force_posterior(&train, &y, &q);
        let (pos, neg) = nb.posteriors(&SparseVec::from_dense(&bits_to_row(&q)));
        assert!((pos - want_pos).abs() < 1e-9, "{q:?}: {pos} vs {want_pos}");
        assert!((neg - want_neg).abs() < 1e-9);
        assert!((pos + neg - 1.0).abs() < 1e-9);
    }
}

#[test]
fn nb_score_is_log_posterior_ratio_on_three_terms() {
    let train: Vec<Vec<bool>> =
        vec![vec![true, false, false], vec![true, true, false], vec![false, false, true], vec![false, true, true]];
    let y = [true, true, false, false];
    let x = matrix(&train.iter().map(|r| bits_to_row(r)).collect::<Vec<_>>());
    let model = fit(&ClassifierSpec::default_for(ClassifierKind::BernoulliNb, 0), &x, &labels(&y)).unwrap();
    let q = [true, false, true];
    let (pos, neg) = brute_force_posterior(&train, &y, &q);
    let score = model.predict_score(&matrix(&[bits_to_row(&q)])).unwrap()[0];
    assert!((score - (pos.ln() - neg.ln())).abs() < 1e-9);
}

#[test]
fn nb_reads_counts_as_presence() {
    let x = matrix(&[vec![3.0, 0.0], vec![0.0, 1.0]]);
    let y = labels(&[true, false]);
    let model = fit(&ClassifierSpec::default_for(ClassifierKind::BernoulliNb, 0), &x, &y).unwrap();
    let a = model.predict_score(&matrix(&[vec![1.0, 0.0]])).unwrap();
    let b = model.predict_score(&matrix(&[vec![7.5, 0.0]])).unwrap();
    assert_eq!(a, b);
}

#[test]
fn nb_empty_row_follows_prior_and_absence() {
    // 3 Negative, 1 Positive, and every term appears in the Positive row
    let x = matrix(&[vec![1.0, 1.0], vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.0]]);
    let y = labels(&[true, false, false, false]);
    let model = fit(&ClassifierSpec::default_for(ClassifierKind::BernoulliNb, 0), &x, &y).unwrap();
    let empty = DocTermMatrix { rows: vec![SparseVec::default()], n_cols: 2, weighting: FeatureKind::Counts };
    // Pos: 1/4 * (1/3)(1/3) = 1/36; Neg: 3/4 * (3/5)(4/5) = 9/25
    let score = model.predict_score(&empty).unwrap()[0];
    assert!((score - ((1.0f64 / 36.0).ln() - (9.0f64 / 25.0).ln())).abs() < 1e-12);
    assert_eq!(model.predict(&empty).unwrap(), vec![Label::Negative]);
}

#[test]
fn knn_one_neighbor_memorizes_two_points() {
    let x = matrix(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
    let y = labels(&[true, false]);
    let model = fit(&spec(Hyperparameters::Knn(KnnParams { k: 1 })), &x, &y).unwrap();
    assert_eq!(model.predict(&x).unwrap(), y);
}

#[test]
fn knn_vote_tie_goes_negative() {
    let x = matrix(&[vec![1.0], vec![3.0]]);
    let y = labels(&[true, false]);
    let model = fit(&spec(Hyperparameters::Knn(KnnParams { k: 2 })), &x, &y).unwrap();
    let q = matrix(&[vec![2.0]]);
    assert_eq!(model.predict_score(&q).unwrap(), vec![0.5]);
    assert_eq!(model.predict(&q).unwrap(), vec![Label::Negative]);
}

#[test]
fn knn_distance_tie_prefers_lower_index() {
    let x = matrix(&[vec![1.0], vec![3.0], vec![10.0]]);
    let y = labels(&[false, true, true]);
    let TrainedModel::Knn(knn) = fit(&spec(Hyperparameters::Knn(KnnParams { k: 1 })), &x, &y).unwrap() else {
        unreachable!()
    };
    assert_eq!(knn.neighbors(&SparseVec::from_dense(&[2.0])), vec![0]);
}

#[test]
fn unlimited_tree_memorizes_training_data() {
    let (x, y) = noisy();
    // rows 0 and 8 are identical with conflicting labels; drop row 8
    let keep: Vec<usize> = (0..8).collect();
    let x = x.select_rows(&keep);
    let y: Vec<Label> = keep.iter().map(|&i| y[i]).collect();
    let model = fit(&ClassifierSpec::default_for(ClassifierKind::DecisionTree, 0), &x, &y).unwrap();
    assert_eq!(model.predict(&x).unwrap(), y);
}

#[test]
fn depth_one_tree_has_one_split() {
    let (x, y) = noisy();
    let p = TreeParams { max_depth: Some(1), ..TreeParams::default() };
    let TrainedModel::DecisionTree(m) = fit(&spec(Hyperparameters::DecisionTree(p)), &x, &y).unwrap() else {
        unreachable!()
    };
    assert_eq!(m.tree.depth(), 1);
}

#[test]
fn forest_vote_fraction_counts_trees() {
    let leaf = |positive: bool| DecisionTreeModel {
        n_features: 1,
        tree: Tree {
            nodes: vec![Node::Leaf {
                value: if positive {
                    ClassTally { positive: 1.0, negative: 0.0 }
                } else {
                    ClassTally { positive: 0.0, negative: 1.0 }
                },
            }],
        },
    };
    let forest = TrainedModel::RandomForest(RandomForestModel {
        n_features: 1,
        trees: vec![leaf(true), leaf(false), leaf(true), leaf(false), leaf(true)],
    });
    let q = matrix(&[vec![0.0]]);
    assert_eq!(forest.predict_score(&q).unwrap(), vec![0.6]);
    assert_eq!(forest.predict(&q).unwrap(), vec![Label::Positive]);
}

#[test]
fn svm_zero_margin_is_negative() {
    let model = TrainedModel::Svm(SvmModel { n_features: 2, weights: vec![0.0, 0.0], bias: 0.0 });
    let q = matrix(&[vec![1.0, 2.0]]);
    assert_eq!(model.predict_score(&q).unwrap(), vec![0.0]);
    assert_eq!(model.predict(&q).unwrap(), vec![Label::Negative]);
}

#[test]
fn svm_objective_falls_on_separable_data() {
    let (x, y) = separable();
    let data = TrainingSet::new(&x, &y).unwrap();
    let (_, history) = SvmModel::train_with_history(&SvmParams::default(), &data, 42).unwrap();
    assert_eq!(history.len(), 20);
    assert!(history.last().unwrap() < &history[0], "{history:?}");
}

#[test]
fn svm_sign_survives_duplicated_training_set() {
    let (x, y) = separable();
    let doubled_idx: Vec<usize> = (0..x.n_rows()).chain(0..x.n_rows()).collect();
    let x2 = x.select_rows(&doubled_idx);
    let y2: Vec<Label> = doubled_idx.iter().map(|&i| y[i]).collect();
    let s = ClassifierSpec::default_for(ClassifierKind::Svm, 42);
    let a = fit(&s, &x, &y).unwrap().predict(&x).unwrap();
    let b = fit(&s, &x2, &y2).unwrap().predict(&x).unwrap();
    assert_eq!(a, b);
}

#[test]
fn boost_without_rounds_predicts_majority() {
    let (x, y) = noisy();
    let p = BoostParams { rounds: 0, ..BoostParams::default() };
    let model = fit(&spec(Hyperparameters::GradBoost(p)), &x, &y).unwrap();
    // 4 Positive of 9 gives negative prior log-odds
    let scores = model.predict_score(&x).unwrap();
    assert!(scores.iter().all(|&s| (s - (4.0f64 / 5.0).ln()).abs() < 1e-12));
    assert!(model.predict(&x).unwrap().iter().all(|&l| l == Label::Negative));
}

#[test]
fn boost_loss_never_increases() {
    let (x, y) = noisy();
    let data = TrainingSet::new(&x, &y).unwrap();
    let (model, history) = GradBoostModel::train_with_history(&BoostParams::default(), &data).unwrap();
    assert_eq!(model.trees.len(), 100);
    for w in history.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{} then {}", w[0], w[1]);
    }
}

#[test]
fn every_kind_separates_separable_data() {
    let (x, y) = separable();
    for kind in ClassifierKind::ALL {
        let model = fit(&ClassifierSpec::default_for(kind, 42), &x, &y).unwrap();
        assert_eq!(accuracy(&model.predict(&x).unwrap(), &y), 1.0, "{kind}");
    }
}

#[test]
fn refit_serializes_identically_and_round_trips() {
    let (x, y) = noisy();
    for kind in ClassifierKind::ALL {
        let s = ClassifierSpec::default_for(kind, 7);
        let a = fit(&s, &x, &y).unwrap();
        let b = fit(&s, &x, &y).unwrap();
        let json = a.to_json().unwrap();
        assert_eq!(json, b.to_json().unwrap(), "{kind}");
        let back = TrainedModel::from_json(&json).unwrap();
        assert_eq!(back.predict_score(&x).unwrap(), a.predict_score(&x).unwrap(), "{kind}");
    }
}

#[test]
fn rejects_wrong_version() {
    let (x, y) = noisy();
    let json = fit(&ClassifierSpec::default_for(ClassifierKind::Knn, 0), &x, &y).unwrap().to_json().unwrap();
    let bumped = json.replacen("\"format_version\":1", "\"format_version\":99", 1);
    assert!(matches!(TrainedModel::from_json(&bumped), Err(ClassifierError::UnsupportedVersion { found: 99, .. })));
}

#[test]
fn training_preconditions() {
    let x = matrix(&[vec![1.0], vec![2.0]]);
    let s = ClassifierSpec::default_for(ClassifierKind::Knn, 0);
    assert!(matches!(fit(&s, &x, &labels(&[true, true])), Err(ClassifierError::SingleClassTraining)));
    assert!(matches!(fit(&s, &x, &labels(&[true])), Err(ClassifierError::LengthMismatch { .. })));
    let model = fit(&s, &x, &labels(&[true, false])).unwrap();
    let wide = matrix(&[vec![1.0, 2.0]]);
    assert!(matches!(model.predict(&wide), Err(ClassifierError::DimensionMismatch { expected: 1, found: 2 })));
}

#[test]
fn hyperparameter_ranges_are_checked() {
    let bad = [
        Hyperparameters::Knn(KnnParams { k: 0 }),
        Hyperparameters::BernoulliNb(NbParams { alpha: 0.0 }),
        Hyperparameters::DecisionTree(TreeParams { max_depth: Some(0), min_samples_split: 2 }),
        Hyperparameters::Svm(SvmParams { lambda: 0.0, epochs: 20 }),
        Hyperparameters::RandomForest(ForestParams { n_trees: 0, ..ForestParams::default() }),
        Hyperparameters::GradBoost(BoostParams { learning_rate: 1.5, ..BoostParams::default() }),
    ];
    for params in bad {
        assert!(matches!(spec(params).validate(), Err(ClassifierError::InvalidHyperparameter(_))), "{params:?}");
    }
    for kind in ClassifierKind::ALL {
        ClassifierSpec::default_for(kind, 0).validate().unwrap();
    }
}

#[test]
fn kind_names_parse_back() {
    for kind in ClassifierKind::ALL {
        assert_eq!(kind.as_str().parse::<ClassifierKind>().unwrap(), kind);
        let json = serde_json::to_string(&kind).unwrap();
        assert_eq!(json, format!("\"{}\"", kind.as_str()));
    }
    assert_eq!("XGBoost".parse::<ClassifierKind>().unwrap(), ClassifierKind::GradBoost);
    assert!("perceptron".parse::<ClassifierKind>().is_err());
}

fn small_corpus() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<bool>)> {
    (4usize..14, 1usize..6).prop_flat_map(|(n, d)| {
        (
            prop::collection::vec(prop::collection::vec(prop::sample::select(vec![0.0, 0.0, 1.0, 2.0, 0.5]), d), n),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_filter("both classes", |(_, y)| y.iter().any(|&p| p) && y.iter().any(|&p| !p))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_full_tree_forest_equals_decision_tree((rows, y) in small_corpus(), seed in any::<u64>()) {
        let x = matrix(&rows);
        let y = labels(&y);
        let tree = fit(&ClassifierSpec::default_for(ClassifierKind::DecisionTree, seed), &x, &y).unwrap();
        let forest_params = ForestParams { n_trees: 1, bootstrap: false, max_features: MaxFeatures::All, tree: TreeParams::default() };
        let forest = fit(&ClassifierSpec::new(Hyperparameters::RandomForest(forest_params), seed), &x, &y).unwrap();
        prop_assert_eq!(tree.predict(&x).unwrap(), forest.predict(&x).unwrap());
    }

    #[test]
    fn knn_and_nb_ignore_row_order(
        rows in prop::collection::vec(prop::collection::vec(0.0f64..5.0, 3), 6..12),
        flips in prop::collection::vec(any::<bool>(), 12),
        perm_seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let n = rows.len();
        let mut y: Vec<bool> = flips[..n].to_vec();
        y[0] = true;
        y[1] = false;
        let x = matrix(&rows);
        let labels_a = labels(&y);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
        let xp = x.select_rows(&perm);
        let yp: Vec<Label> = perm.iter().map(|&i| labels_a[i]).collect();
        for kind in [ClassifierKind::Knn, ClassifierKind::BernoulliNb] {
            let s = ClassifierSpec::default_for(kind, 0);
            let a = fit(&s, &x, &labels_a).unwrap().predict(&x).unwrap();
            let b = fit(&s, &xp, &yp).unwrap().predict(&x).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn predictions_agree_with_scores((rows, y) in small_corpus()) {
        let x = matrix(&rows);
        let y = labels(&y);
        for kind in ClassifierKind::ALL {
            let mut s = ClassifierSpec::default_for(kind, 3);
            if let Hyperparameters::RandomForest(p) = &mut s.params {
                p.n_trees = 5;
            }
            if let Hyperparameters::GradBoost(p) = &mut s.params {
                p.rounds = 5;
            }
            let m = fit(&s, &x, &y).unwrap();
            let scores = m.predict_score(&x).unwrap();
            let pred = m.predict(&x).unwrap();
            for (score, label) in scores.iter().zip(&pred) {
                prop_assert_eq!(label.is_positive(), *score > m.score_kind().threshold());
            }
        }
    }
}
