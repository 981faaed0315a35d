//! Utterance-level construction tagging.
//!
//! Every utterance receives exactly one of ten labels. Two backends are
//! available: an ordered list of twelve predicates over the UD tree
//! ([`tag_ud`]) and word-order heuristics over UPOS tags alone
//! ([`tag_pos`]). Utterance-final tag questions are removed before tagging
//! ([`strip_tag_question`]).

mod lexicon;
mod pos;
mod strip;
mod ud;

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conllu::{Sentence, SpeakerRole, Treebank};

pub use lexicon::{normalize_utterance, FormulaicLexicon};
pub use pos::{pos_rule_matches, tag_pos, POS_RULES};
pub use strip::strip_tag_question;
pub use ud::{tag_ud, ud_rule_matches, CONTROL_VERBS, UD_RULES};

#[derive(Debug, Error)]
pub enum TagError {
    #[error("sentence {sent_id}: token {token} lacks UPOS or deprel; use the POS backend instead")]
    MissingAnnotation { sent_id: String, token: usize },
    #[error("sentence {sent_id}: no root token")]
    NoRoot { sent_id: String },
    #[error("formulaic lexicon is empty")]
    EmptyLexicon,
    #[error("unknown construction label {0:?}")]
    UnknownLabel(String),
    #[error("predicted sentence {0} has no gold label")]
    UnknownSentId(String),
    #[error("gold file line {line}: {message}")]
    GoldFormat { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Utterance-level construction category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CxnLabel {
    /// Formulaic social routine.
    #[serde(rename = "FOR")]
    For,
    /// Fragment without a finite predicate.
    #[serde(rename = "FRA")]
    Fra,
    #[serde(rename = "QWH")]
    Qwh,
    #[serde(rename = "QYN")]
    Qyn,
    #[serde(rename = "COP")]
    Cop,
    #[serde(rename = "IMP")]
    Imp,
    /// Subject-predicate, intransitive.
    #[serde(rename = "SPI")]
    Spi,
    /// Subject-predicate, transitive.
    #[serde(rename = "SPT")]
    Spt,
    /// Complex: several predicates or clauses.
    #[serde(rename = "COM")]
    Com,
    /// Excluded: unintelligible or transcription markers only.
    #[serde(rename = "X")]
    X,
}

impl CxnLabel {
    pub const ALL: [CxnLabel; 10] = [
        CxnLabel::For,
        CxnLabel::Fra,
        CxnLabel::Qwh,
        CxnLabel::Qyn,
        CxnLabel::Cop,
        CxnLabel::Imp,
        CxnLabel::Spi,
        CxnLabel::Spt,
        CxnLabel::Com,
        CxnLabel::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CxnLabel::For => "FOR",
            CxnLabel::Fra => "FRA",
            CxnLabel::Qwh => "QWH",
            CxnLabel::Qyn => "QYN",
            CxnLabel::Cop => "COP",
            CxnLabel::Imp => "IMP",
            CxnLabel::Spi => "SPI",
            CxnLabel::Spt => "SPT",
            CxnLabel::Com => "COM",
            CxnLabel::X => "X",
        }
    }

    /// Position in [`CxnLabel::ALL`].
    pub fn index(self) -> usize {
        CxnLabel::ALL.iter().position(|l| *l == self).unwrap()
    }

    /// FOR, FRA and X: everything outside the clausal view.
    pub fn is_nonclausal(self) -> bool {
        matches!(self, CxnLabel::For | CxnLabel::Fra | CxnLabel::X)
    }
}

impl fmt::Display for CxnLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CxnLabel {
    type Err = TagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CxnLabel::ALL
            .iter()
            .copied()
            .find(|l| l.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| TagError::UnknownLabel(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Backend {
    #[serde(rename = "ud")]
    UdRules,
    #[serde(rename = "pos")]
    PosRules,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::UdRules => "ud",
            Backend::PosRules => "pos",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The label of one utterance and how it was reached.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaggedUtterance {
    pub sent_id: String,
    pub label: CxnLabel,
    pub backend: Backend,
    /// Ordinal of the decision step that fired. 0 means the utterance was
    /// excluded as X before any rule ran.
    pub fired_rule: u8,
    pub stripped_tag_question: Option<String>,
    pub speaker_role: SpeakerRole,
    pub child_age_months: Option<f64>,
}

impl TaggedUtterance {
    fn new(sentence: &Sentence, label: CxnLabel, backend: Backend, fired_rule: u8) -> Self {
        TaggedUtterance {
            sent_id: sentence.sent_id().to_string(),
            label,
            backend,
            fired_rule,
            stripped_tag_question: None,
            speaker_role: sentence.speaker_role(),
            child_age_months: sentence.child_age_months(),
        }
    }
}

const TRANSCRIPTION_MARKERS: &[&str] = &["xxx", "yyy", "www", "xx", "yy"];

/// True if the utterance contains nothing but transcription markers
/// (`xxx`, `yyy`, `www`) and punctuation.
pub fn is_excluded(sentence: &Sentence) -> bool {
    sentence
        .tokens
        .iter()
        .filter(|t| t.upos != "PUNCT" && t.form.chars().any(char::is_alphanumeric))
        .all(|t| TRANSCRIPTION_MARKERS.contains(&t.form.to_lowercase().as_str()))
}

/// Strip tag questions, then tag with the chosen backend.
pub fn tag_sentence(
    sentence: &Sentence,
    backend: Backend,
    lexicon: &FormulaicLexicon,
) -> Result<TaggedUtterance, TagError> {
    let (stripped, removed) = strip::strip_with_report(sentence);
    let mut tagged = match backend {
        Backend::UdRules => tag_ud(&stripped, lexicon)?,
        Backend::PosRules => tag_pos(&stripped, lexicon),
    };
    tagged.stripped_tag_question = removed;
    Ok(tagged)
}

/// Per-sentence results of [`tag_treebank`]; failures never abort the
/// batch.
pub fn tag_treebank(
    treebank: &Treebank,
    backend: Backend,
    lexicon: &FormulaicLexicon,
) -> Vec<Result<TaggedUtterance, TagError>> {
    treebank
        .sentences
        .iter()
        .map(|s| tag_sentence(s, backend, lexicon))
        .collect()
}

/// Read a gold label file: `sent_id TAB label` per line.
pub fn read_gold_labels<R: BufRead>(reader: R) -> Result<BTreeMap<String, CxnLabel>, TagError> {
    let mut gold = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split('\t');
        let (Some(id), Some(label)) = (cols.next(), cols.next()) else {
            return Err(TagError::GoldFormat {
                line: idx + 1,
                message: "expected `sent_id TAB label`".into(),
            });
        };
        gold.insert(id.to_string(), label.parse()?);
    }
    Ok(gold)
}

/// `sent_id TAB label TAB fired_rule TAB backend`.
pub fn tagged_tsv_line(t: &TaggedUtterance) -> String {
    format!(
        "{}\t{}\t{}\t{}",
        t.sent_id, t.label, t.fired_rule, t.backend
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CategoryScore {
    pub n_gold: usize,
    pub correct: usize,
    pub recall: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CxnAccuracy {
    pub n: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub per_category: BTreeMap<CxnLabel, CategoryScore>,
    /// Gold (rows) by predicted (columns), indexed as [`CxnLabel::ALL`].
    pub confusion: [[usize; 10]; 10],
    /// Accuracy and count per speaker role.
    pub by_speaker: BTreeMap<SpeakerRole, (f64, usize)>,
}

/// Overall accuracy, per-category recall, confusion matrix and speaker
/// split of predicted labels against gold labels.
pub fn cxn_accuracy(
    pred: &[TaggedUtterance],
    gold: &BTreeMap<String, CxnLabel>,
) -> Result<CxnAccuracy, TagError> {
    let mut confusion = [[0usize; 10]; 10];
    let mut speaker: BTreeMap<SpeakerRole, (usize, usize)> = BTreeMap::new();
    let mut correct = 0;
    for p in pred {
        let g = *gold
            .get(&p.sent_id)
            .ok_or_else(|| TagError::UnknownSentId(p.sent_id.clone()))?;
        confusion[g.index()][p.label.index()] += 1;
        let hit = usize::from(g == p.label);
        correct += hit;
        let entry = speaker.entry(p.speaker_role).or_default();
        entry.0 += hit;
        entry.1 += 1;
    }
    let pct = |k: usize, n: usize| {
        if n == 0 {
            0.0
        } else {
            100.0 * k as f64 / n as f64
        }
    };
    let per_category = CxnLabel::ALL
        .iter()
        .map(|label| {
            let row = &confusion[label.index()];
            let n_gold: usize = row.iter().sum();
            let hits = row[label.index()];
            (
                *label,
                CategoryScore {
                    n_gold,
                    correct: hits,
                    recall: (n_gold > 0).then(|| pct(hits, n_gold)),
                },
            )
        })
        .collect();
    Ok(CxnAccuracy {
        n: pred.len(),
        correct,
        accuracy: pct(correct, pred.len()),
        per_category,
        confusion,
        by_speaker: speaker
            .into_iter()
            .map(|(role, (k, n))| (role, (pct(k, n), n)))
            .collect(),
    })
}
