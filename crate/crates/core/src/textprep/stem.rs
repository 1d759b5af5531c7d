//! Light rule-based Indonesian stemmer.
//!
//! One pass strips at most one suffix (inflectional `-lah -kah -nya -ku -mu`,
//! otherwise derivational `-kan -an -i`) and at most one derivational prefix
//! (`di- ke- se-`, `me-`/`pe-` with nasal recoding, `ber-`, `ter-`). Passes
//! repeat until the token stops changing, so `stem(stem(w)) == stem(w)`.
//! Known roots are never stripped, and among the candidate strips of a pass a
//! known root wins. No result is shorter than three characters.

use std::collections::HashSet;

const MIN_STEM_CHARS: usize = 3;

const INFLECTIONAL: [&str; 5] = ["lah", "kah", "nya", "ku", "mu"];
const DERIVATIONAL: [&str; 3] = ["kan", "an", "i"];

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

/// Bases left after removing one suffix: the inflectional one if any,
/// then every matching derivational one (`-kan` also tries `-an`).
fn suffix_bases(word: &str) -> Vec<&str> {
    let strip = |s: &&str| word.strip_suffix(*s).filter(|rest| rest.len() >= MIN_STEM_CHARS);
    let mut bases: Vec<&str> = INFLECTIONAL.iter().find_map(strip).into_iter().collect();
    bases.extend(DERIVATIONAL.iter().filter_map(strip));
    bases
}

/// Candidate roots after removing one prefix, most likely first.
fn prefix_variants(word: &str) -> Vec<String> {
    let mut out = Vec::new();
    let first = |s: &str| s.chars().next();
    for nasal in ["me", "pe"] {
        let Some(rest) = word.strip_prefix(nasal) else { continue };
        if let Some(r) = rest.strip_prefix("ny") {
            if first(r).is_some_and(is_vowel) {
                out.push(format!("s{r}"));
            }
        } else if let Some(r) = rest.strip_prefix("ng") {
            out.push(r.to_owned());
            if first(r).is_some_and(is_vowel) {
                out.push(format!("k{r}"));
            }
        } else if let Some(r) = rest.strip_prefix('m') {
            match first(r) {
                Some(c) if is_vowel(c) => {
                    out.push(format!("p{r}"));
                    out.push(format!("m{r}"));
                }
                Some('b' | 'p' | 'f') => out.push(r.to_owned()),
                _ => {}
            }
        } else if let Some(r) = rest.strip_prefix('n') {
            match first(r) {
                Some(c) if is_vowel(c) => {
                    out.push(format!("t{r}"));
                    out.push(format!("n{r}"));
                }
                Some('d' | 'c' | 'j' | 't' | 's' | 'z') => out.push(r.to_owned()),
                _ => {}
            }
        } else if first(rest).is_some_and(|c| matches!(c, 'l' | 'r' | 'w' | 'y')) {
            out.push(rest.to_owned());
        }
    }
    for plain in ["di", "ke", "se", "ber", "ter"] {
        if let Some(rest) = word.strip_prefix(plain) {
            out.push(rest.to_owned());
        }
    }
    if let Some(rest) = word.strip_prefix("be").filter(|r| r.starts_with('k')) {
        out.push(rest.to_owned());
    }
    out.retain(|v| v.chars().count() >= MIN_STEM_CHARS);
    out
}

fn stem_once(word: &str, roots: &HashSet<String>) -> String {
    if roots.contains(word) {
        return word.to_owned();
    }
    let mut candidates = Vec::new();
    for base in suffix_bases(word).into_iter().chain(std::iter::once(word)) {
        candidates.extend(prefix_variants(base));
        if base != word {
            candidates.push(base.to_owned());
        }
    }
    candidates
        .iter()
        .find(|c| roots.contains(*c))
        .or(candidates.first())
        .cloned()
        .unwrap_or_else(|| word.to_owned())
}

/// Stems a clean lowercase token. Compound tokens containing `_` (lexicon
/// outputs such as emoji names) are returned unchanged.
pub fn stem(token: &str, roots: &HashSet<String>) -> String {
    if token.contains('_') || !token.is_ascii() {
        return token.to_owned();
    }
    // every change shortens the token, so this terminates
    let mut current = token.to_owned();
    loop {
        let next = stem_once(&current, roots);
        if next == current {
            return current;
        }
        current = next;
    }
}
