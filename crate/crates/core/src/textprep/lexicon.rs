use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::emoji::EmojiMap;

pub const SLANG_FILE: &str = "slang.tsv";
pub const STOPWORDS_FILE: &str = "stopwords.txt";
pub const EMOJI_FILE: &str = "emoji.tsv";
pub const ROOTS_FILE: &str = "roots.txt";

const BUILTIN_SLANG: &str = include_str!("../../lexicons/slang.tsv");
const BUILTIN_STOPWORDS: &str = include_str!("../../lexicons/stopwords.txt");
const BUILTIN_EMOJI: &str = include_str!("../../lexicons/emoji.tsv");
const BUILTIN_ROOTS: &str = include_str!("../../lexicons/roots.txt");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {reason}")]
    Malformed { file: &'static str, line: usize, reason: String },
}

/// SHA-256 of each lexicon source, hex encoded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconChecksums {
    pub slang: String,
    pub stopwords: String,
    pub emoji: String,
    pub roots: String,
}

/// Immutable lookup tables used by preprocessing.
#[derive(Debug, Clone)]
pub struct Lexicons {
    slang: HashMap<String, String>,
    stopwords: HashSet<String>,
    emoji: EmojiMap,
    roots: HashSet<String>,
    checksums: LexiconChecksums,
}

pub(crate) fn is_clean_token(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_lowercase() || b == b'_')
}

fn entries(source: &str) -> impl Iterator<Item = (usize, &str)> {
    source
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn parse_pairs(file: &'static str, source: &str) -> Result<Vec<(usize, String, String)>, LexiconError> {
    entries(source)
        .map(|(line, l)| {
            let (k, v) = l.split_once('\t').ok_or_else(|| LexiconError::Malformed {
                file,
                line,
                reason: "expected key<TAB>value".into(),
            })?;
            Ok((line, k.to_owned(), v.trim().to_owned()))
        })
        .collect()
}

fn parse_words(source: &str) -> HashSet<String> {
    entries(source).map(|(_, l)| l.trim().to_lowercase()).collect()
}

fn checksum(source: &str) -> String {
    hex::encode(Sha256::digest(source.as_bytes()))
}

impl Lexicons {
    /// The lexicons shipped with the crate.
    pub fn builtin() -> Self {
        Self::from_sources(BUILTIN_SLANG, BUILTIN_STOPWORDS, BUILTIN_EMOJI, BUILTIN_ROOTS)
            .expect("built-in lexicons are valid")
    }

    /// Loads `slang.tsv`, `stopwords.txt`, `emoji.tsv` and `roots.txt` from a directory.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let dir = dir.as_ref();
        let read = |name: &str| {
            let path = dir.join(name);
            fs::read_to_string(&path).map_err(|source| LexiconError::Io {
                path: path.display().to_string(),
                source,
            })
        };
        Self::from_sources(&read(SLANG_FILE)?, &read(STOPWORDS_FILE)?, &read(EMOJI_FILE)?, &read(ROOTS_FILE)?)
    }

    pub fn from_sources(slang: &str, stopwords: &str, emoji: &str, roots: &str) -> Result<Self, LexiconError> {
        let mut slang_map = HashMap::new();
        for (line, key, value) in parse_pairs(SLANG_FILE, slang)? {
            if !is_clean_token(&value) {
                return Err(LexiconError::Malformed {
                    file: SLANG_FILE,
                    line,
                    reason: format!("replacement '{value}' is not a clean token"),
                });
            }
            slang_map.insert(key.to_lowercase(), value);
        }
        // replacements must be fixed points, otherwise normalization is not idempotent
        if let Some((k, v)) = slang_map.iter().find(|(_, v)| slang_map.contains_key(*v)) {
            return Err(LexiconError::Malformed {
                file: SLANG_FILE,
                line: 0,
                reason: format!("replacement '{v}' of '{k}' is itself a slang key"),
            });
        }

        let mut emoji_map = EmojiMap::default();
        for (line, key, value) in parse_pairs(EMOJI_FILE, emoji)? {
            if !is_clean_token(&value) {
                return Err(LexiconError::Malformed {
                    file: EMOJI_FILE,
                    line,
                    reason: format!("short name '{value}' is not a clean token"),
                });
            }
            emoji_map.insert(key, value);
        }

        Ok(Lexicons {
            slang: slang_map,
            stopwords: parse_words(stopwords),
            emoji: emoji_map,
            roots: parse_words(roots),
            checksums: LexiconChecksums {
                slang: checksum(slang),
                stopwords: checksum(stopwords),
                emoji: checksum(emoji),
                roots: checksum(roots),
            },
        })
    }

    pub fn slang_map(&self) -> &HashMap<String, String> {
        &self.slang
    }

    pub fn stopwords(&self) -> &HashSet<String> {
        &self.stopwords
    }

    pub fn emoji_map(&self) -> &EmojiMap {
        &self.emoji
    }

    pub fn roots(&self) -> &HashSet<String> {
        &self.roots
    }

    pub fn checksums(&self) -> &LexiconChecksums {
        &self.checksums
    }
}
