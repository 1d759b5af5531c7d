//! Binary split trees over sparse rows.
//!
//! A row goes left when its value at `feature` is `<= threshold`; absent
//! entries read as zero. Split search sorts a node's non-zero entries by
//! `(feature, value, row)`, treats the node's zeros as one extra value group,
//! and evaluates the midpoints between consecutive distinct values.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::features::{DocTermMatrix, SparseVec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum Node<L> {
    Split { feature: usize, threshold: f64, left: usize, right: usize },
    Leaf { value: L },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree<L> {
    pub nodes: Vec<Node<L>>,
}

impl<L> Tree<L> {
    pub fn leaf_for(&self, row: &SparseVec) -> &L {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { value } => return value,
                Node::Split { feature, threshold, left, right } => {
                    at = if row.get(*feature) <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk<L>(nodes: &[Node<L>], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn max_feature(&self) -> Option<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Split { feature, .. } => Some(*feature),
                Node::Leaf { .. } => None,
            })
            .max()
    }
}

/// Additive per-row statistic aggregated over a node.
pub(crate) trait NodeStats: Copy + Default {
    fn add(&mut self, other: &Self);
    fn sub(&mut self, other: &Self);
}

pub(crate) trait Criterion {
    type Stats: NodeStats;
    type Leaf;

    fn row_stats(&self, row: usize) -> Self::Stats;
    /// Split quality (higher is better), or `None` when the split is not allowed.
    fn split_score(&self, left: &Self::Stats, right: &Self::Stats, parent: &Self::Stats) -> Option<f64>;
    /// Node must become a leaf regardless of depth.
    fn is_terminal(&self, stats: &Self::Stats, n_rows: usize) -> bool;
    fn leaf(&self, stats: &Self::Stats) -> Self::Leaf;
}

/// How many non-constant features a node inspects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum FeatureSampling {
    /// Every feature, in column order.
    All,
    /// A random subset of this many non-constant features.
    Random(usize),
}

pub(crate) struct GrowOptions {
    pub max_depth: Option<usize>,
    pub sampling: FeatureSampling,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    score: f64,
}

/// One feature's candidate values within a node, ascending.
struct FeatureGroups<S> {
    feature: usize,
    values: Vec<(f64, S)>,
}

fn feature_groups<C: Criterion>(
    rows: &[usize],
    x: &DocTermMatrix,
    criterion: &C,
    parent: &C::Stats,
) -> Vec<FeatureGroups<C::Stats>> {
    let mut entries: Vec<(usize, f64, usize)> = Vec::new();
    for &r in rows {
        entries.extend(x.rows[r].entries().iter().map(|&(f, v)| (f, v, r)));
    }
    entries.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut out = Vec::new();
    let mut start = 0;
    while start < entries.len() {
        let feature = entries[start].0;
        let end = start + entries[start..].iter().take_while(|e| e.0 == feature).count();
        let mut values: Vec<(f64, C::Stats)> = Vec::new();
        let mut nonzero = C::Stats::default();
        for &(_, v, r) in &entries[start..end] {
            let s = criterion.row_stats(r);
            nonzero.add(&s);
            match values.last_mut() {
                Some((last, acc)) if *last == v => acc.add(&s),
                _ => values.push((v, s)),
            }
        }
        let zero_rows = rows.len() - (end - start);
        if zero_rows > 0 {
            let mut zeros = *parent;
            zeros.sub(&nonzero);
            let pos = values.partition_point(|(v, _)| *v < 0.0);
            values.insert(pos, (0.0, zeros));
        }
        if values.len() > 1 {
            out.push(FeatureGroups { feature, values });
        }
        start = end;
    }
    out
}

fn best_split<C: Criterion>(
    groups: &[FeatureGroups<C::Stats>],
    criterion: &C,
    parent: &C::Stats,
) -> Option<BestSplit> {
    let mut best: Option<BestSplit> = None;
    for g in groups {
        let mut left = C::Stats::default();
        for w in g.values.windows(2) {
            left.add(&w[0].1);
            let mut right = *parent;
            right.sub(&left);
            let Some(score) = criterion.split_score(&left, &right, parent) else { continue };
            if best.as_ref().is_none_or(|b| score > b.score) {
                best = Some(BestSplit { feature: g.feature, threshold: (w[0].0 + w[1].0) / 2.0, score });
            }
        }
    }
    best
}

/// Grows a tree over `rows` (positions in `x`), depth-first, left child first.
pub(crate) fn grow<C: Criterion>(
    x: &DocTermMatrix,
    rows: Vec<usize>,
    criterion: &C,
    opts: &GrowOptions,
    rng: &mut ChaCha8Rng,
) -> Tree<C::Leaf> {
    enum Slot<L> {
        Pending,
        Done(Node<L>),
    }
    let mut slots: Vec<Slot<C::Leaf>> = vec![Slot::Pending];
    let mut stack = vec![(0usize, rows, 0usize)];

    while let Some((slot, rows, depth)) = stack.pop() {
        let mut stats = C::Stats::default();
        for &r in &rows {
            stats.add(&criterion.row_stats(r));
        }
        let depth_reached = opts.max_depth.is_some_and(|d| depth >= d);
        let split = if depth_reached || criterion.is_terminal(&stats, rows.len()) {
            None
        } else {
            let mut groups = feature_groups(&rows, x, criterion, &stats);
            if let FeatureSampling::Random(k) = opts.sampling {
                groups.shuffle(rng);
                groups.truncate(k.max(1));
                groups.sort_by_key(|g| g.feature);
            }
            best_split(&groups, criterion, &stats)
        };
        match split {
            None => slots[slot] = Slot::Done(Node::Leaf { value: criterion.leaf(&stats) }),
            Some(s) => {
                let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
                    rows.iter().partition(|&&r| x.rows[r].get(s.feature) <= s.threshold);
                let left = slots.len();
                slots.push(Slot::Pending);
                slots.push(Slot::Pending);
                slots[slot] = Slot::Done(Node::Split { feature: s.feature, threshold: s.threshold, left, right: left + 1 });
                // right pushed first so the left subtree is built first
                stack.push((left + 1, right_rows, depth + 1));
                stack.push((left, left_rows, depth + 1));
            }
        }
    }
    let nodes = slots
        .into_iter()
        .map(|s| match s {
            Slot::Done(n) => n,
            Slot::Pending => unreachable!("every slot is filled"),
        })
        .collect();
    Tree { nodes }
}

/// Weighted class tallies for Gini splits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassTally {
    pub positive: f64,
    pub negative: f64,
}

impl ClassTally {
    pub fn total(&self) -> f64 {
        self.positive + self.negative
    }

    pub fn gini(&self) -> f64 {
        let n = self.total();
        if n == 0.0 {
            return 0.0;
        }
        let p = self.positive / n;
        let q = self.negative / n;
        1.0 - p * p - q * q
    }

    /// Fraction of Positive weight.
    pub fn positive_fraction(&self) -> f64 {
        let n = self.total();
        if n == 0.0 {
            0.0
        } else {
            self.positive / n
        }
    }
}

impl NodeStats for ClassTally {
    fn add(&mut self, o: &Self) {
        self.positive += o.positive;
        self.negative += o.negative;
    }

    fn sub(&mut self, o: &Self) {
        self.positive -= o.positive;
        self.negative -= o.negative;
    }
}

/// Gini impurity over weighted, labeled rows.
pub(crate) struct Gini<'a> {
    pub positive: &'a [bool],
    pub weights: &'a [f64],
    pub min_samples_split: usize,
}

impl Criterion for Gini<'_> {
    type Stats = ClassTally;
    type Leaf = ClassTally;

    fn row_stats(&self, row: usize) -> ClassTally {
        let w = self.weights[row];
        if self.positive[row] {
            ClassTally { positive: w, negative: 0.0 }
        } else {
            ClassTally { positive: 0.0, negative: w }
        }
    }

    fn split_score(&self, l: &ClassTally, r: &ClassTally, _parent: &ClassTally) -> Option<f64> {
        if l.total() <= 0.0 || r.total() <= 0.0 {
            return None;
        }
        Some(-(l.total() * l.gini() + r.total() * r.gini()))
    }

    fn is_terminal(&self, s: &ClassTally, n_rows: usize) -> bool {
        s.positive == 0.0 || s.negative == 0.0 || n_rows < self.min_samples_split
    }

    fn leaf(&self, s: &ClassTally) -> ClassTally {
        *s
    }
}

/// Gradient/hessian sums for second-order boosting splits.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct GradStats {
    pub grad: f64,
    pub hess: f64,
}

impl NodeStats for GradStats {
    fn add(&mut self, o: &Self) {
        self.grad += o.grad;
        self.hess += o.hess;
    }

    fn sub(&mut self, o: &Self) {
        self.grad -= o.grad;
        self.hess -= o.hess;
    }
}

pub(crate) struct Newton<'a> {
    pub grad: &'a [f64],
    pub hess: &'a [f64],
    pub lambda: f64,
    pub min_child_weight: f64,
}

impl Newton<'_> {
    fn objective(&self, s: &GradStats) -> f64 {
        s.grad * s.grad / (s.hess + self.lambda)
    }
}

impl Criterion for Newton<'_> {
    type Stats = GradStats;
    type Leaf = f64;

    fn row_stats(&self, row: usize) -> GradStats {
        GradStats { grad: self.grad[row], hess: self.hess[row] }
    }

    fn split_score(&self, l: &GradStats, r: &GradStats, parent: &GradStats) -> Option<f64> {
        if l.hess < self.min_child_weight || r.hess < self.min_child_weight {
            return None;
        }
        let gain = self.objective(l) + self.objective(r) - self.objective(parent);
        (gain > 1e-12).then_some(gain)
    }

    fn is_terminal(&self, s: &GradStats, n_rows: usize) -> bool {
        n_rows < 2 || s.hess < 2.0 * self.min_child_weight
    }

    fn leaf(&self, s: &GradStats) -> f64 {
        -s.grad / (s.hess + self.lambda)
    }
}
