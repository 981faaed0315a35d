use std::collections::BTreeSet;
use std::io::BufRead;

use super::TagError;
use crate::conllu::Sentence;

const BUILTIN: &str = include_str!("../../data/formulaic.txt");

/// Case-fold, turn punctuation (other than apostrophes) into spaces,
/// collapse whitespace and re-attach split clitics (`you 're` becomes
/// `you're`, `do n't` becomes `don't`).
pub fn normalize_utterance(text: &str) -> String {
    let lowered = text.to_lowercase().replace(['\u{2019}', '\u{2018}'], "'");
    let cleaned: String = lowered
        .chars()
        .map(|c| {
            if c.is_alphanumeric() || c == '\'' || c.is_whitespace() {
                c
            } else {
                ' '
            }
        })
        .collect();
    let words: Vec<&str> = cleaned
        .split_whitespace()
        .filter(|w| w.chars().any(char::is_alphanumeric))
        .collect();
    let mut out = String::new();
    for word in words {
        let clitic = word.starts_with('\'') || word == "n't";
        if !out.is_empty() && !clitic {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// Exact-match patterns for formulaic utterances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaicLexicon {
    patterns: BTreeSet<String>,
}

impl FormulaicLexicon {
    /// The bundled seed list.
    pub fn builtin() -> Self {
        Self::from_text(BUILTIN).expect("bundled lexicon is non-empty")
    }

    /// One pattern per line; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self, TagError> {
        let patterns: BTreeSet<String> = text
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .map(normalize_utterance)
            .filter(|p| !p.is_empty())
            .collect();
        if patterns.is_empty() {
            return Err(TagError::EmptyLexicon);
        }
        Ok(FormulaicLexicon { patterns })
    }

    pub fn from_reader<R: BufRead>(mut reader: R) -> Result<Self, TagError> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        Self::from_text(&text)
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn contains(&self, utterance: &str) -> bool {
        self.patterns.contains(&normalize_utterance(utterance))
    }

    pub fn matches(&self, sentence: &Sentence) -> bool {
        self.contains(&sentence.surface())
    }
}
