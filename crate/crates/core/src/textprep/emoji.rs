use std::collections::{HashMap, HashSet};

pub const UNKNOWN_EMOJI: &str = "unknown_emoji";

/// Emoji sequence to CLDR short name, matched longest-first.
#[derive(Debug, Clone, Default)]
pub struct EmojiMap {
    names: HashMap<String, String>,
    name_set: HashSet<String>,
    first_chars: HashSet<char>,
    max_chars: usize,
}

impl EmojiMap {
    pub fn insert(&mut self, sequence: String, name: String) {
        let Some(first) = sequence.chars().next() else { return };
        self.first_chars.insert(first);
        self.max_chars = self.max_chars.max(sequence.chars().count());
        self.name_set.insert(name.clone());
        self.names.insert(sequence, name);
    }

    pub fn get(&self, sequence: &str) -> Option<&str> {
        self.names.get(sequence).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// True when `token` is one of the short names this map produces.
    pub fn is_short_name(&self, token: &str) -> bool {
        token == UNKNOWN_EMOJI || self.name_set.contains(token)
    }

    fn longest_match(&self, chars: &[char]) -> Option<(&str, usize)> {
        if !self.first_chars.contains(&chars[0]) {
            return None;
        }
        let mut key = String::new();
        let limit = self.max_chars.min(chars.len());
        let mut best = None;
        for (n, c) in chars[..limit].iter().enumerate() {
            key.push(*c);
            if let Some(name) = self.names.get(&key) {
                best = Some((name.as_str(), n + 1));
            }
        }
        best
    }
}

/// Pictographic code points (approximate Extended_Pictographic blocks).
pub fn is_emoji_char(c: char) -> bool {
    matches!(c as u32,
        0x1F000..=0x1FAFF
        | 0x2600..=0x27BF
        | 0x2300..=0x23FF
        | 0x2B05..=0x2B55
        | 0x2190..=0x21FF
        | 0x3030 | 0x303D | 0x3297 | 0x3299
        | 0x203C | 0x2049)
}

/// Joiners, variation selectors, skin tones and tag characters.
pub fn is_emoji_component(c: char) -> bool {
    matches!(c as u32, 0xFE0E | 0xFE0F | 0x200D | 0x20E3 | 0x1F3FB..=0x1F3FF | 0xE0020..=0xE007F)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Converted {
    pub text: String,
    /// Short names emitted, in order, one per emoji occurrence.
    pub names: Vec<String>,
    /// Pictographs with no entry in the map.
    pub unknown: usize,
}

/// Replaces every emoji with its short name followed by `.`.
///
/// Repeated emoji give repeated names; a space separates each name from
/// adjacent text. All other code points are copied unchanged.
pub fn convert_emoticons(text: &str, map: &EmojiMap) -> Converted {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Converted { text: String::with_capacity(text.len()), ..Default::default() };
    let mut after_emoji = false;
    let mut i = 0;

    let emit = |out: &mut Converted, name: &str| {
        if out.text.chars().next_back().is_some_and(|c| !c.is_whitespace()) {
            out.text.push(' ');
        }
        out.text.push_str(name);
        out.text.push('.');
        out.names.push(name.to_owned());
    };

    while i < chars.len() {
        if let Some((name, used)) = map.longest_match(&chars[i..]) {
            emit(&mut out, name);
            after_emoji = true;
            i += used;
            continue;
        }
        let c = chars[i];
        if is_emoji_component(c) {
            // stray modifier with nothing to attach to
        } else if is_emoji_char(c) {
            emit(&mut out, UNKNOWN_EMOJI);
            out.unknown += 1;
            after_emoji = true;
        } else {
            if after_emoji && !c.is_whitespace() {
                out.text.push(' ');
            }
            out.text.push(c);
            after_emoji = false;
        }
        i += 1;
    }
    out
}
