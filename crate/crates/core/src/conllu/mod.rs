//! CoNLL-U data model, reading, writing, validation and repair.
//!
//! Sentences carry CHILDES-style metadata taken from comment lines:
//! `# sent_id`, `# speaker`, `# child_age` / `# age_months` and `# text`.
//! Comment lines are kept verbatim so that a read/write cycle is lossless.

mod labelmap;
mod normalize;
mod read;
mod roles;
mod validate;
mod write;

use std::fmt;

use thiserror::Error;

pub use labelmap::LabelMap;
pub use normalize::{normalize, Normalized, Repair};
pub use read::{read_conllu, read_conllu_str, ReadOptions, Strictness};
pub use roles::{parse_child_age, RoleMap, SpeakerRole};
pub use validate::{validate, Diagnostic};
pub use write::{write_conllu, write_conllu_string, write_sentence};

/// Errors raised while reading or writing CoNLL-U.
#[derive(Debug, Error)]
pub enum ConlluError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("sentence {sent_id}: {}", join_diagnostics(.diagnostics))]
    Validation {
        sent_id: String,
        diagnostics: Vec<Diagnostic>,
    },

    #[error("duplicate sent_id {0}")]
    DuplicateSentId(String),

    #[error("invalid mapping file, line {line}: {message}")]
    Mapping { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_diagnostics(diagnostics: &[Diagnostic]) -> String {
    diagnostics
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Morphological features in canonical order.
///
/// Keys are unique and kept sorted case-insensitively, which is the order
/// the UD validator expects.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Features(Vec<(String, String)>);

impl Features {
    pub fn new() -> Self {
        Features(Vec::new())
    }

    /// Parse the FEATS column. Returns `None` on malformed pairs or
    /// duplicate keys.
    pub fn parse(column: &str) -> Option<Self> {
        let mut feats = Features::new();
        if column == "_" || column.is_empty() {
            return Some(feats);
        }
        for pair in column.split('|') {
            let (key, value) = pair.split_once('=')?;
            if key.is_empty() || value.is_empty() || feats.get(key).is_some() {
                return None;
            }
            feats.insert(key, value);
        }
        Some(feats)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// True if the feature has the value, also inside multi-valued
    /// entries such as `PronType=Int,Rel`.
    pub fn has(&self, key: &str, value: &str) -> bool {
        self.get(key)
            .map(|v| v.split(',').any(|part| part == value))
            .unwrap_or(false)
    }

    pub fn insert(&mut self, key: &str, value: &str) {
        if let Some(entry) = self.0.iter_mut().find(|(k, _)| k == key) {
            entry.1 = value.to_string();
            return;
        }
        let sort_key = key.to_lowercase();
        let pos = self
            .0
            .iter()
            .position(|(k, _)| k.to_lowercase() > sort_key)
            .unwrap_or(self.0.len());
        self.0.insert(pos, (key.to_string(), value.to_string()));
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

impl fmt::Display for Features {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("_");
        }
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{}={}", k, v)?;
        }
        Ok(())
    }
}

/// One syntactic word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: Features,
    pub head: usize,
    pub deprel: String,
    pub deps: String,
    pub misc: String,
}

impl Token {
    /// A token with only form, head and relation filled in.
    pub fn new(id: usize, form: &str, head: usize, deprel: &str) -> Self {
        Token {
            id,
            form: form.to_string(),
            lemma: "_".to_string(),
            upos: "_".to_string(),
            xpos: "_".to_string(),
            feats: Features::new(),
            head,
            deprel: deprel.to_string(),
            deps: "_".to_string(),
            misc: "_".to_string(),
        }
    }

    pub fn with_upos(mut self, upos: &str) -> Self {
        self.upos = upos.to_string();
        self
    }

    pub fn with_lemma(mut self, lemma: &str) -> Self {
        self.lemma = lemma.to_string();
        self
    }

    pub fn with_feats(mut self, feats: &str) -> Self {
        self.feats = Features::parse(feats).expect("well-formed feature string");
        self
    }

    pub fn is_punct(&self) -> bool {
        self.upos == "PUNCT"
    }
}

/// A multiword token line (`1-2`). Preserved on output, never scored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MwtRange {
    pub start: usize,
    pub end: usize,
    pub form: String,
    pub misc: String,
}

/// An empty node line (`3.1`), kept verbatim and never scored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmptyNode {
    pub major: usize,
    pub minor: usize,
    pub line: String,
}

/// One utterance: a dependency tree plus metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    pub mwt: Vec<MwtRange>,
    pub empty_nodes: Vec<EmptyNode>,
    comments: Vec<String>,
    sent_id: String,
    speaker_role: SpeakerRole,
    child_age_months: Option<f64>,
    text: Option<String>,
}

impl Sentence {
    /// Create a sentence with a `# sent_id` comment.
    pub fn new(sent_id: &str, tokens: Vec<Token>) -> Self {
        let mut sentence = Sentence::bare(tokens);
        sentence.set_meta("sent_id", sent_id);
        sentence.sent_id = sent_id.to_string();
        sentence
    }

    fn bare(tokens: Vec<Token>) -> Self {
        Sentence {
            tokens,
            mwt: Vec::new(),
            empty_nodes: Vec::new(),
            comments: Vec::new(),
            sent_id: String::new(),
            speaker_role: SpeakerRole::Other,
            child_age_months: None,
            text: None,
        }
    }

    pub fn sent_id(&self) -> &str {
        &self.sent_id
    }

    pub fn speaker_role(&self) -> SpeakerRole {
        self.speaker_role
    }

    pub fn child_age_months(&self) -> Option<f64> {
        self.child_age_months
    }

    pub fn text(&self) -> Option<&str> {
        self.text.as_deref()
    }

    /// Raw comment lines, including the leading `#`.
    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Set the speaker role, writing the given raw speaker code.
    pub fn set_speaker(&mut self, code: &str, role: SpeakerRole) {
        self.set_meta("speaker", code);
        self.speaker_role = role;
    }

    pub fn set_age_months(&mut self, months: f64) {
        self.set_meta("age_months", &months.to_string());
        self.child_age_months = Some(months);
    }

    pub fn set_text(&mut self, text: &str) {
        self.set_meta("text", text);
        self.text = Some(text.to_string());
    }

    /// Replace the value of a `# key = value` comment, appending the
    /// comment if the key is absent.
    fn set_meta(&mut self, key: &str, value: &str) {
        let line = format!("# {} = {}", key, value);
        match self
            .comments
            .iter()
            .position(|c| comment_key_value(c).map(|(k, _)| k) == Some(key))
        {
            Some(pos) => self.comments[pos] = line,
            None => self.comments.push(line),
        }
    }

    /// Space-joined token forms.
    pub fn surface(&self) -> String {
        self.tokens
            .iter()
            .map(|t| t.form.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Number of tokens whose UPOS is not PUNCT.
    pub fn length_nopunct(&self) -> usize {
        self.tokens.iter().filter(|t| !t.is_punct()).count()
    }

    /// Index of the token with the given 1-based id, by position.
    pub fn token(&self, id: usize) -> Option<&Token> {
        id.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    /// Ids of the direct dependents of `head` (0 for the artificial root).
    pub fn children(&self, head: usize) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.head == head)
    }
}

/// Split a `# key = value` comment line.
pub(crate) fn comment_key_value(line: &str) -> Option<(&str, &str)> {
    let body = line.strip_prefix('#')?.trim();
    let (key, value) = body.split_once('=')?;
    Some((key.trim(), value.trim()))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Dev,
    Test,
    #[default]
    Unsplit,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Provenance {
    #[default]
    Gold,
    Silver,
    Predicted,
}

/// Diagnostics recorded for one sentence while reading in lenient mode.
#[derive(Clone, Debug, PartialEq)]
pub struct SentenceDiagnostics {
    pub index: usize,
    pub sent_id: String,
    pub diagnostics: Vec<Diagnostic>,
}

/// An ordered collection of sentences.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Treebank {
    pub sentences: Vec<Sentence>,
    pub split: Split,
    pub provenance: Provenance,
    pub diagnostics: Vec<SentenceDiagnostics>,
}

impl Treebank {
    pub fn new(sentences: Vec<Sentence>) -> Self {
        Treebank {
            sentences,
            ..Treebank::default()
        }
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn n_tokens(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feats_are_sorted_case_insensitively() {
        let feats = Features::parse("Number=Sing|NumType=Card|Case=Nom").unwrap();
        assert_eq!(feats.to_string(), "Case=Nom|Number=Sing|NumType=Card");
    }

    #[test]
    fn duplicate_feature_keys_are_rejected() {
        assert!(Features::parse("Poss=Yes|Poss=No").is_none());
        assert!(Features::parse("Poss").is_none());
    }

    #[test]
    fn multi_valued_features() {
        let feats = Features::parse("PronType=Int,Rel").unwrap();
        assert!(feats.has("PronType", "Int"));
        assert!(!feats.has("PronType", "Dem"));
    }

    #[test]
    fn set_meta_replaces_existing_comment() {
        let mut s = Sentence::new("a", vec![Token::new(1, "hi", 0, "root")]);
        s.set_text("hi");
        s.set_text("hello");
        assert_eq!(s.comments(), &["# sent_id = a", "# text = hello"]);
        assert_eq!(s.text(), Some("hello"));
    }
}
