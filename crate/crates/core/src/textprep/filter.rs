use std::collections::{HashMap, HashSet};

/// Tokens shorter than this are dropped once digits are stripped.
pub const MIN_TOKEN_LEN: usize = 2;

pub fn normalize_slang(tokens: Vec<String>, slang: &HashMap<String, String>) -> Vec<String> {
    tokens
        .into_iter()
        .map(|t| match slang.get(&t) {
            Some(v) => v.clone(),
            None => t,
        })
        .collect()
}

/// Strips digits; drops tokens left shorter than [`MIN_TOKEN_LEN`] or without letters.
pub fn remove_numbers(tokens: Vec<String>) -> Vec<String> {
    tokens
        .into_iter()
        .filter_map(|t| {
            let stripped: String = if t.bytes().any(|b| b.is_ascii_digit()) {
                t.chars().filter(|c| !c.is_ascii_digit()).collect()
            } else {
                t
            };
            let stripped = stripped.trim_matches('_');
            (stripped.chars().count() >= MIN_TOKEN_LEN && stripped.chars().any(|c| c.is_alphabetic()))
                .then(|| stripped.to_owned())
        })
        .collect()
}

pub fn remove_stopwords(tokens: Vec<String>, stopwords: &HashSet<String>) -> Vec<String> {
    tokens.into_iter().filter(|t| !stopwords.contains(t)).collect()
}

/// Keeps the first occurrence of each token.
pub fn remove_duplicates(tokens: Vec<String>) -> Vec<String> {
    let mut seen = HashSet::new();
    tokens.into_iter().filter(|t| seen.insert(t.clone())).collect()
}
