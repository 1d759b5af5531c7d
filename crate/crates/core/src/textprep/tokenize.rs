use super::emoji::{is_emoji_char, is_emoji_component};

/// Punctuation and casing evidence taken from the raw comment.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TextEvidence {
    pub exclamation: bool,
    pub alphabetic: usize,
    pub uppercase: usize,
}

pub const CAPITAL_MIN_LETTERS: usize = 5;
pub const CAPITAL_MIN_RATIO: f64 = 0.7;

impl TextEvidence {
    pub fn scan(text: &str) -> Self {
        let mut ev = TextEvidence::default();
        for c in text.chars() {
            if c == '!' || c == '\u{FF01}' {
                ev.exclamation = true;
            }
            if c.is_alphabetic() {
                ev.alphabetic += 1;
                if c.is_uppercase() {
                    ev.uppercase += 1;
                }
            }
        }
        ev
    }

    /// At least 70% of at least five letters are uppercase.
    pub fn capital_dominant(&self) -> bool {
        self.alphabetic >= CAPITAL_MIN_LETTERS
            && self.uppercase as f64 >= CAPITAL_MIN_RATIO * self.alphabetic as f64
    }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Lowercases and splits on every character that is not `[a-z0-9_]`.
///
/// Each pictograph becomes its own token; joiners and variation selectors are
/// dropped. Leading and trailing underscores are trimmed.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let flush = |current: &mut String, tokens: &mut Vec<String>| {
        let t = current.trim_matches('_');
        if !t.is_empty() {
            tokens.push(t.to_owned());
        }
        current.clear();
    };
    for c in text.chars() {
        if is_word_char(c) {
            current.push(c.to_ascii_lowercase());
        } else {
            flush(&mut current, &mut tokens);
            if is_emoji_char(c) && !is_emoji_component(c) {
                tokens.push(c.to_string());
            }
        }
    }
    flush(&mut current, &mut tokens);
    tokens
}

pub fn tokenize_with_evidence(text: &str) -> (Vec<String>, TextEvidence) {
    (tokenize(text), TextEvidence::scan(text))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn splits_sample_comment() {
        assert_eq!(
            tokenize("Ya gk pp di syukuri aj ya"),
            toks(&["ya", "gk", "pp", "di", "syukuri", "aj", "ya"])
        );
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  ...!!! ").is_empty());
    }

    #[test]
    fn exclamation_is_recorded_then_dropped() {
        let (t, ev) = tokenize_with_evidence("R1 jadi R1M!!");
        assert_eq!(t, toks(&["r1", "jadi", "r1m"]));
        assert!(ev.exclamation);
        assert!(!ev.capital_dominant());
    }

    #[test]
    fn emoji_are_single_tokens() {
        assert_eq!(tokenize("pastinya😁😁"), toks(&["pastinya", "😁", "😁"]));
        assert_eq!(tokenize("👍🏽"), toks(&["👍"]));
    }

    #[test]
    fn underscores_join_but_are_trimmed() {
        assert_eq!(tokenize("face_with_tears_of_joy. _x_ __"), toks(&["face_with_tears_of_joy", "x"]));
    }

    #[test]
    fn capital_dominance_threshold() {
        assert!(TextEvidence::scan("MANTAP!").capital_dominant());
        assert!(!TextEvidence::scan("OKE").capital_dominant());
        // 7 of 10 letters uppercase
        assert!(TextEvidence::scan("ABCDEFGhij").capital_dominant());
        assert!(!TextEvidence::scan("ABCDEFghij").capital_dominant());
    }
}
