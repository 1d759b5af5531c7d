//! Comment cleaning: emoji conversion, tokenizing, slang/number/stopword
//! filtering, stemming, duplicate removal and the heuristic emotion rules.

mod emoji;
mod filter;
mod lexicon;
mod rules;
mod stem;
mod tokenize;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{Corpus, Label, RawComment};

pub use emoji::{convert_emoticons, is_emoji_char, is_emoji_component, Converted, EmojiMap, UNKNOWN_EMOJI};
pub use filter::{normalize_slang, remove_duplicates, remove_numbers, remove_stopwords, MIN_TOKEN_LEN};
pub use lexicon::{LexiconChecksums, LexiconError, Lexicons};
pub use rules::{
    apply_heuristic_rules, evaluate_rules, is_figure_token, EmotionAnnotation, RuleOutcome, ANGRY_TOKEN,
    SUPPORT_TOKEN, TRUST_TOKEN,
};
pub use stem::stem;
pub use tokenize::{tokenize, tokenize_with_evidence, TextEvidence};

/// Stands in for a comment that lost every token during cleaning.
pub const EMPTY_DOC_TOKEN: &str = "empty_doc";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TextPrepError {
    #[error("comment {id}: no tokens left after cleaning")]
    EmptyAfterCleaning { id: usize, annotation: EmotionAnnotation },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanDocument {
    pub id: usize,
    pub tokens: Vec<String>,
    pub clean_text: String,
    pub annotations: EmotionAnnotation,
    pub label: Label,
}

impl CleanDocument {
    fn new(id: usize, tokens: Vec<String>, annotations: EmotionAnnotation, label: Label) -> Self {
        let clean_text = tokens.join(" ");
        CleanDocument { id, tokens, clean_text, annotations, label }
    }
}

impl AsRef<[String]> for CleanDocument {
    fn as_ref(&self) -> &[String] {
        &self.tokens
    }
}

/// Tokens touched by each cleaning stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub emoji_converted: usize,
    pub unknown_emoji: usize,
    pub slang_replaced: usize,
    pub numbers_dropped: usize,
    pub stopwords_dropped: usize,
    pub stems_changed: usize,
    pub duplicates_dropped: usize,
}

impl std::ops::AddAssign for StageCounts {
    fn add_assign(&mut self, o: Self) {
        self.emoji_converted += o.emoji_converted;
        self.unknown_emoji += o.unknown_emoji;
        self.slang_replaced += o.slang_replaced;
        self.numbers_dropped += o.numbers_dropped;
        self.stopwords_dropped += o.stopwords_dropped;
        self.stems_changed += o.stems_changed;
        self.duplicates_dropped += o.duplicates_dropped;
    }
}

/// Result of cleaning one string, before it is tied to a comment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cleaned {
    pub tokens: Vec<String>,
    pub annotation: EmotionAnnotation,
    pub converted_text: String,
    pub counts: StageCounts,
    /// No content token survived; `tokens` holds only pseudo-tokens.
    pub empty: bool,
}

impl Cleaned {
    /// Tokens fed to a vectorizer: empty documents get [`EMPTY_DOC_TOKEN`]
    /// ahead of their pseudo-tokens.
    pub fn sentinel_tokens(&self) -> Vec<String> {
        if !self.empty {
            return self.tokens.clone();
        }
        let mut tokens = vec![EMPTY_DOC_TOKEN.to_owned()];
        tokens.extend(self.annotation.pseudo_tokens().map(str::to_owned));
        tokens
    }
}

/// Stems each token, re-applying slang until stable, and drops any stem
/// that is a stopword or too short.
fn stem_tokens(tokens: Vec<String>, lex: &Lexicons, counts: &mut StageCounts) -> Vec<String> {
    tokens
        .into_iter()
        .filter_map(|t| {
            let mut current = t.clone();
            for _ in 0..4 {
                let stemmed = stem(&current, lex.roots());
                let next = lex.slang_map().get(&stemmed).cloned().unwrap_or(stemmed);
                if next == current {
                    break;
                }
                current = next;
            }
            if current != t {
                counts.stems_changed += 1;
            }
            if lex.stopwords().contains(&current) || current.chars().count() < MIN_TOKEN_LEN {
                counts.stopwords_dropped += 1;
                None
            } else {
                Some(current)
            }
        })
        .collect()
}

/// Runs the full cleaning pipeline over one string.
///
/// Stages: emoji conversion, rule evaluation on the raw text, tokenizing,
/// slang normalization, number removal, stopword removal, stemming, duplicate
/// removal. `support` and the annotation pseudo-tokens are appended last.
/// Pseudo-tokens already present in the input are carried into the
/// annotation, which makes cleaning idempotent.
pub fn clean_text(raw: &str, lex: &Lexicons) -> Cleaned {
    let mut counts = StageCounts::default();
    let converted = convert_emoticons(raw, lex.emoji_map());
    counts.emoji_converted = converted.names.len();
    counts.unknown_emoji = converted.unknown;

    let mut carried = EmotionAnnotation::default();
    let tokens: Vec<String> = tokenize(&converted.text)
        .into_iter()
        .filter(|t| match t.as_str() {
            TRUST_TOKEN => {
                carried.trust = (carried.trust + 1).min(2);
                false
            }
            ANGRY_TOKEN => {
                carried.angry = (carried.angry + 1).min(2);
                false
            }
            _ => true,
        })
        .collect();
    let outcome = evaluate_rules(raw, &tokens, lex.emoji_map());
    let mut annotation = outcome.annotation.merge(carried);

    let before = tokens.clone();
    let tokens = normalize_slang(tokens, lex.slang_map());
    counts.slang_replaced = before.iter().zip(&tokens).filter(|(a, b)| a != b).count();

    let n = tokens.len();
    let tokens = remove_numbers(tokens);
    counts.numbers_dropped = n - tokens.len();

    let n = tokens.len();
    let tokens = remove_stopwords(tokens, lex.stopwords());
    counts.stopwords_dropped = n - tokens.len();

    let tokens = stem_tokens(tokens, lex, &mut counts);

    let n = tokens.len();
    let mut tokens = remove_duplicates(tokens);
    counts.duplicates_dropped = n - tokens.len();

    // a comment that cleans down to one figure word counts as a lone figure too
    let mut content = tokens.iter().filter(|t| t.as_str() != SUPPORT_TOKEN);
    let lone_figure = matches!((content.next(), content.next()), (Some(t), None) if is_figure_token(t, lex.emoji_map()));
    if lone_figure {
        annotation.trust = annotation.trust.max(1);
    }
    if (outcome.support || lone_figure) && !tokens.iter().any(|t| t == SUPPORT_TOKEN) {
        tokens.push(SUPPORT_TOKEN.to_owned());
    }
    let empty = tokens.is_empty();
    tokens.extend(annotation.pseudo_tokens().map(str::to_owned));

    Cleaned { tokens, annotation, converted_text: converted.text, counts, empty }
}

pub fn preprocess(comment: &RawComment, lex: &Lexicons) -> Result<CleanDocument, TextPrepError> {
    let cleaned = clean_text(&comment.text, lex);
    if cleaned.empty {
        return Err(TextPrepError::EmptyAfterCleaning { id: comment.id, annotation: cleaned.annotation });
    }
    Ok(CleanDocument::new(comment.id, cleaned.tokens, cleaned.annotation, comment.label))
}

/// What to do with comments that clean down to nothing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmptyPolicy {
    Drop,
    /// Keep the comment with the single token [`EMPTY_DOC_TOKEN`].
    #[default]
    Sentinel,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessStats {
    pub documents: usize,
    pub empty: usize,
    pub stages: StageCounts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessedCorpus {
    pub docs: Vec<CleanDocument>,
    /// Ids of comments removed under [`EmptyPolicy::Drop`].
    pub dropped: Vec<usize>,
    pub stats: PreprocessStats,
}

impl PreprocessedCorpus {
    pub fn labels(&self) -> Vec<Label> {
        self.docs.iter().map(|d| d.label).collect()
    }
}

/// Cleans every comment (in parallel, order preserved).
pub fn preprocess_corpus(corpus: &Corpus, lex: &Lexicons, policy: EmptyPolicy) -> PreprocessedCorpus {
    let cleaned: Vec<Cleaned> = corpus.comments().par_iter().map(|c| clean_text(&c.text, lex)).collect();
    let mut stats = PreprocessStats { documents: corpus.len(), ..Default::default() };
    let mut docs = Vec::with_capacity(corpus.len());
    let mut dropped = Vec::new();
    for (comment, cleaned) in corpus.comments().iter().zip(cleaned) {
        stats.stages += cleaned.counts;
        if cleaned.empty {
            stats.empty += 1;
            match policy {
                EmptyPolicy::Drop => {
                    dropped.push(comment.id);
                    continue;
                }
                EmptyPolicy::Sentinel => {
                    let tokens = cleaned.sentinel_tokens();
                    docs.push(CleanDocument::new(comment.id, tokens, cleaned.annotation, comment.label));
                    continue;
                }
            }
        }
        docs.push(CleanDocument::new(comment.id, cleaned.tokens, cleaned.annotation, comment.label));
    }
    PreprocessedCorpus { docs, dropped, stats }
}
