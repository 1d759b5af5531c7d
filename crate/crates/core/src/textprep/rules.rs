use serde::{Deserialize, Serialize};

use super::emoji::{is_emoji_char, EmojiMap};
use super::tokenize::TextEvidence;

pub const SUPPORT_TOKEN: &str = "support";
pub const TRUST_TOKEN: &str = "trust_emotion";
pub const ANGRY_TOKEN: &str = "angry_emotion";

/// Heuristic emotion scores, each in `0..=2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmotionAnnotation {
    pub trust: u8,
    pub angry: u8,
}

impl EmotionAnnotation {
    pub fn merge(self, other: EmotionAnnotation) -> EmotionAnnotation {
        EmotionAnnotation { trust: self.trust.max(other.trust), angry: self.angry.max(other.angry) }
    }

    /// Pseudo-tokens: `trust_emotion` repeated `trust` times, then `angry_emotion`.
    pub fn pseudo_tokens(&self) -> impl Iterator<Item = &'static str> {
        std::iter::repeat_n(TRUST_TOKEN, self.trust as usize)
            .chain(std::iter::repeat_n(ANGRY_TOKEN, self.angry as usize))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RuleOutcome {
    pub annotation: EmotionAnnotation,
    /// The message was a lone figure word: `support` is added and the
    /// comment leans positive.
    pub support: bool,
}

/// A figure word is an emoji (raw or converted to its short name) or a number.
pub fn is_figure_token(token: &str, emoji: &EmojiMap) -> bool {
    emoji.is_short_name(token)
        || token.chars().any(is_emoji_char)
        || (!token.is_empty() && token.bytes().all(|b| b.is_ascii_digit()))
}

/// Evaluates the four emotion rules.
///
/// 1. a message whose only word is a figure word gets `support`, trust = 1;
/// 2. an exclamation mark sets trust = 2;
/// 3. capital-dominated text sets angry = 1;
/// 4. capital-dominated text with an exclamation mark sets angry = 2.
pub fn evaluate_rules(raw_text: &str, tokens: &[String], emoji: &EmojiMap) -> RuleOutcome {
    let evidence = TextEvidence::scan(raw_text);
    let mut out = RuleOutcome::default();

    let mut content = tokens.iter().filter(|t| t.as_str() != TRUST_TOKEN && t.as_str() != ANGRY_TOKEN);
    if let Some(first) = content.next() {
        if content.all(|t| t == first) && is_figure_token(first, emoji) {
            out.support = true;
            out.annotation.trust = 1;
        }
    }
    if evidence.exclamation {
        out.annotation.trust = 2;
    }
    if evidence.capital_dominant() {
        out.annotation.angry = if evidence.exclamation { 2 } else { 1 };
    }
    out
}

/// Applies the rules and appends their tokens: `support` (once, if rule 1
/// fired) followed by the annotation pseudo-tokens.
pub fn apply_heuristic_rules(
    raw_text: &str,
    mut tokens: Vec<String>,
    emoji: &EmojiMap,
) -> (EmotionAnnotation, Vec<String>) {
    let outcome = evaluate_rules(raw_text, &tokens, emoji);
    if outcome.support && !tokens.iter().any(|t| t == SUPPORT_TOKEN) {
        tokens.push(SUPPORT_TOKEN.to_owned());
    }
    tokens.extend(outcome.annotation.pseudo_tokens().map(str::to_owned));
    (outcome.annotation, tokens)
}
