use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Corpus, DatasetError, Label};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedToken {
    pub token: String,
    pub weight: f64,
}

/// Per-class token distributions for [`generate_synthetic`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VocabSpec {
    pub positive: Vec<WeightedToken>,
    pub negative: Vec<WeightedToken>,
    /// Inclusive token-count range per document.
    pub doc_len: (usize, usize),
    /// Fraction of Positive documents; `None` balances the classes.
    pub positive_prior: Option<f64>,
}

impl VocabSpec {
    /// Two disjoint uniform vocabularies of `per_class` pseudo-words each.
    ///
    /// Words are `q??o` (Positive) and `x??o` (Negative): lowercase letters
    /// only, no Indonesian affixes, so they pass through preprocessing intact.
    pub fn disjoint(per_class: usize) -> Self {
        let words = |lead: char| {
            (0..per_class)
                .map(|i| WeightedToken { token: pseudo_word(lead, i), weight: 1.0 })
                .collect()
        };
        VocabSpec { positive: words('q'), negative: words('x'), doc_len: (6, 12), positive_prior: None }
    }

    pub fn with_prior(mut self, positive_prior: f64) -> Self {
        self.positive_prior = Some(positive_prior);
        self
    }

    pub fn class_tokens(&self, label: Label) -> &[WeightedToken] {
        match label {
            Label::Positive => &self.positive,
            Label::Negative => &self.negative,
        }
    }
}

fn pseudo_word(lead: char, mut i: usize) -> String {
    let mut s = String::from(lead);
    // two base-26 letters cover 676 words; longer indices add letters
    let mut body = Vec::new();
    loop {
        body.push((b'a' + (i % 26) as u8) as char);
        i /= 26;
        if i == 0 && body.len() >= 2 {
            break;
        }
    }
    s.extend(body.iter().rev());
    s.push('o');
    s
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenerationStats {
    pub tokens: usize,
    pub substitutions: usize,
}

impl GenerationStats {
    pub fn substitution_rate(&self) -> f64 {
        if self.tokens == 0 {
            0.0
        } else {
            self.substitutions as f64 / self.tokens as f64
        }
    }
}

pub fn generate_synthetic(
    n_docs: usize,
    spec: &VocabSpec,
    noise: f64,
    seed: u64,
) -> Result<Corpus, DatasetError> {
    generate_synthetic_with_stats(n_docs, spec, noise, seed).map(|(c, _)| c)
}

/// Deterministic corpus: each token comes from the document's own class
/// distribution, or with probability `noise` from the other class.
pub fn generate_synthetic_with_stats(
    n_docs: usize,
    spec: &VocabSpec,
    noise: f64,
    seed: u64,
) -> Result<(Corpus, GenerationStats), DatasetError> {
    if n_docs < 2 {
        return Err(DatasetError::InvalidSynthetic(format!("n_docs must be >= 2, got {n_docs}")));
    }
    if !(0.0..=1.0).contains(&noise) {
        return Err(DatasetError::InvalidNoise(noise));
    }
    let (min_len, max_len) = spec.doc_len;
    if min_len == 0 || min_len > max_len {
        return Err(DatasetError::InvalidSynthetic(format!(
            "document length range {min_len}..={max_len} is invalid"
        )));
    }
    let sampler = |label: Label| -> Result<WeightedIndex<f64>, DatasetError> {
        let tokens = spec.class_tokens(label);
        if tokens.is_empty() {
            return Err(DatasetError::EmptyVocabSpec(label));
        }
        WeightedIndex::new(tokens.iter().map(|t| t.weight))
            .map_err(|e| DatasetError::InvalidSynthetic(format!("{label} weights: {e}")))
    };
    let pos_sampler = sampler(Label::Positive)?;
    let neg_sampler = sampler(Label::Negative)?;

    let n_pos = match spec.positive_prior {
        Some(p) if !(p > 0.0 && p < 1.0) => return Err(DatasetError::InvalidPrior(p)),
        Some(p) => ((n_docs as f64 * p).round() as usize).clamp(1, n_docs - 1),
        None => n_docs / 2,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<Label> = std::iter::repeat_n(Label::Positive, n_pos)
        .chain(std::iter::repeat_n(Label::Negative, n_docs - n_pos))
        .collect();
    labels.shuffle(&mut rng);

    let mut stats = GenerationStats::default();
    let mut rows = Vec::with_capacity(n_docs);
    for label in labels {
        let len = rng.random_range(min_len..=max_len);
        let mut words = Vec::with_capacity(len);
        for _ in 0..len {
            let source = if rng.random::<f64>() < noise {
                stats.substitutions += 1;
                label.other()
            } else {
                label
            };
            let dist = if source.is_positive() { &pos_sampler } else { &neg_sampler };
            words.push(spec.class_tokens(source)[dist.sample(&mut rng)].token.as_str());
        }
        stats.tokens += len;
        rows.push((words.join(" "), label));
    }
    Ok((Corpus::from_labeled(rows)?, stats))
}
