//! Dependency-parse evaluation.
//!
//! Punctuation is scored in LAS/UAS/EM/UEM, as in the CoNLL 2018 shared
//! task scorer, but excluded when computing sentence length for binning.
//! Multiword-token lines and empty nodes never take part in scoring.
//! Aggregates accumulate integer counts first and divide last, so results
//! do not depend on sentence order.

mod analysis;
mod stats;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::conllu::{Sentence, SpeakerRole, Token, Treebank};

pub use analysis::{
    confusion, confusion_delta, per_label_error_rates, ConfusionMatrix, ErrorScope, LabelErrorRate,
    Normalization,
};
pub use stats::{
    ln_gamma, paired_ttest, regularized_incomplete_beta, student_t_two_sided, TTestResult,
};

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("sentence {sent_id}: {gold} gold tokens vs {pred} predicted tokens")]
    TokenCount {
        sent_id: String,
        gold: usize,
        pred: usize,
    },
    #[error("sentence {sent_id}: forms differ at position {position} ({gold:?} vs {pred:?})")]
    FormMismatch {
        sent_id: String,
        position: usize,
        gold: String,
        pred: String,
    },
    #[error("treebanks differ in size: {gold} gold vs {pred} predicted sentences")]
    SentenceCount { gold: usize, pred: usize },
    #[error("nothing to aggregate")]
    Empty,
    #[error("paired samples differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("paired t-test needs at least 2 pairs, got {0}")]
    TooFewPairs(usize),
}

/// How dependency relations are compared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DeprelMatch {
    /// Full label including subtype: `nmod:poss` differs from `nmod`.
    #[default]
    Exact,
    /// Compare only the universal part before `:`.
    UniversalOnly,
}

impl DeprelMatch {
    pub fn matches(self, gold: &str, pred: &str) -> bool {
        match self {
            DeprelMatch::Exact => gold == pred,
            DeprelMatch::UniversalOnly => universal_part(gold) == universal_part(pred),
        }
    }
}

fn universal_part(label: &str) -> &str {
    label.split(':').next().unwrap_or(label)
}

fn normalized_form(form: &str) -> String {
    form.trim().nfc().collect()
}

/// Pair gold and predicted syntactic words by position.
pub fn align<'a>(
    gold: &'a Sentence,
    pred: &'a Sentence,
) -> Result<Vec<(&'a Token, &'a Token)>, EvalError> {
    if gold.len() != pred.len() {
        return Err(EvalError::TokenCount {
            sent_id: gold.sent_id().to_string(),
            gold: gold.len(),
            pred: pred.len(),
        });
    }
    let mut pairs = Vec::with_capacity(gold.len());
    for (pos, (g, p)) in gold.tokens.iter().zip(&pred.tokens).enumerate() {
        if normalized_form(&g.form) != normalized_form(&p.form) {
            return Err(EvalError::FormMismatch {
                sent_id: gold.sent_id().to_string(),
                position: pos + 1,
                gold: g.form.clone(),
                pred: p.form.clone(),
            });
        }
        pairs.push((g, p));
    }
    Ok(pairs)
}

/// Pair sentences of two treebanks by position.
pub fn align_treebanks<'a>(
    gold: &'a Treebank,
    pred: &'a Treebank,
) -> Result<Vec<(&'a Sentence, &'a Sentence)>, EvalError> {
    if gold.len() != pred.len() {
        return Err(EvalError::SentenceCount {
            gold: gold.len(),
            pred: pred.len(),
        });
    }
    Ok(gold.sentences.iter().zip(&pred.sentences).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SentencePairScore {
    pub sent_id: String,
    pub n_scored: usize,
    pub n_head_correct: usize,
    pub n_las_correct: usize,
    pub exact: bool,
    pub unlabeled_exact: bool,
    pub speaker_role: SpeakerRole,
    pub length_nopunct: usize,
}

impl SentencePairScore {
    pub fn uas(&self) -> f64 {
        percent(self.n_head_correct, self.n_scored)
    }

    pub fn las(&self) -> f64 {
        percent(self.n_las_correct, self.n_scored)
    }

    pub fn length_bin(&self) -> LengthBin {
        LengthBin::of(self.length_nopunct)
    }
}

pub fn score_sentence(
    gold: &Sentence,
    pred: &Sentence,
    mode: DeprelMatch,
) -> Result<SentencePairScore, EvalError> {
    let pairs = align(gold, pred)?;
    let n_head_correct = pairs.iter().filter(|(g, p)| g.head == p.head).count();
    let n_las_correct = pairs
        .iter()
        .filter(|(g, p)| g.head == p.head && mode.matches(&g.deprel, &p.deprel))
        .count();
    let n_scored = pairs.len();
    Ok(SentencePairScore {
        sent_id: gold.sent_id().to_string(),
        n_scored,
        n_head_correct,
        n_las_correct,
        exact: n_las_correct == n_scored,
        unlabeled_exact: n_head_correct == n_scored,
        speaker_role: gold.speaker_role(),
        length_nopunct: gold.length_nopunct(),
    })
}

/// Score every aligned sentence pair of two treebanks.
pub fn score_treebank(
    gold: &Treebank,
    pred: &Treebank,
    mode: DeprelMatch,
) -> Result<Vec<SentencePairScore>, EvalError> {
    align_treebanks(gold, pred)?
        .into_iter()
        .map(|(g, p)| score_sentence(g, p, mode))
        .collect()
}

/// Sentence-length bins over non-punctuation tokens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LengthBin {
    UpTo3,
    From4To6,
    From7To10,
    Over10,
}

impl LengthBin {
    pub const ALL: [LengthBin; 4] = [
        LengthBin::UpTo3,
        LengthBin::From4To6,
        LengthBin::From7To10,
        LengthBin::Over10,
    ];

    pub fn of(length: usize) -> LengthBin {
        match length {
            0..=3 => LengthBin::UpTo3,
            4..=6 => LengthBin::From4To6,
            7..=10 => LengthBin::From7To10,
            _ => LengthBin::Over10,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LengthBin::UpTo3 => "<=3",
            LengthBin::From4To6 => "4-6",
            LengthBin::From7To10 => "7-10",
            LengthBin::Over10 => ">10",
        }
    }
}

impl fmt::Display for LengthBin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// LAS/UAS for a subset of sentences. Percentages are `None` for an
/// empty slice.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceScore {
    pub las: Option<f64>,
    pub uas: Option<f64>,
    pub n_sentences: usize,
    pub n_tokens: usize,
}

#[derive(Default)]
struct Counts {
    sentences: usize,
    tokens: usize,
    head: usize,
    las: usize,
}

impl Counts {
    fn add(&mut self, s: &SentencePairScore) {
        self.sentences += 1;
        self.tokens += s.n_scored;
        self.head += s.n_head_correct;
        self.las += s.n_las_correct;
    }

    fn slice(&self) -> SliceScore {
        let pct = |k| (self.tokens > 0).then(|| percent(k, self.tokens));
        SliceScore {
            las: pct(self.las),
            uas: pct(self.head),
            n_sentences: self.sentences,
            n_tokens: self.tokens,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub las: f64,
    pub uas: f64,
    pub em: f64,
    pub uem: f64,
    pub upos_acc: Option<f64>,
    pub xpos_acc: Option<f64>,
    pub n_sentences: usize,
    pub n_tokens: usize,
    pub n_head_correct: usize,
    pub n_las_correct: usize,
    pub n_exact: usize,
    pub n_unlabeled_exact: usize,
    /// Keys: `CS`, `CDS`, `len<=3` .. `len>10`, and `CS/len<=3` style
    /// speaker-by-length crossings.
    pub slices: BTreeMap<String, SliceScore>,
    #[serde(skip)]
    pub per_sentence: Vec<SentencePairScore>,
}

pub fn slice_key_speaker(role: SpeakerRole) -> String {
    role.as_str().to_string()
}

pub fn slice_key_length(bin: LengthBin) -> String {
    format!("len{}", bin)
}

pub fn slice_key_cross(role: SpeakerRole, bin: LengthBin) -> String {
    format!("{}/len{}", role, bin)
}

/// Micro-averaged scores over all tokens, plus sentence-level exact match
/// and the speaker/length slices.
pub fn aggregate(scores: &[SentencePairScore]) -> Result<EvalReport, EvalError> {
    if scores.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut total = Counts::default();
    let mut slices: BTreeMap<String, Counts> = BTreeMap::new();
    for role in [SpeakerRole::Cs, SpeakerRole::Cds] {
        slices.entry(slice_key_speaker(role)).or_default();
        for bin in LengthBin::ALL {
            slices.entry(slice_key_cross(role, bin)).or_default();
        }
    }
    for bin in LengthBin::ALL {
        slices.entry(slice_key_length(bin)).or_default();
    }

    let mut n_exact = 0;
    let mut n_unlabeled_exact = 0;
    for s in scores {
        total.add(s);
        n_exact += usize::from(s.exact);
        n_unlabeled_exact += usize::from(s.unlabeled_exact);
        let bin = s.length_bin();
        slices.get_mut(&slice_key_length(bin)).unwrap().add(s);
        if s.speaker_role != SpeakerRole::Other {
            slices
                .get_mut(&slice_key_speaker(s.speaker_role))
                .unwrap()
                .add(s);
            slices
                .get_mut(&slice_key_cross(s.speaker_role, bin))
                .unwrap()
                .add(s);
        }
    }

    Ok(EvalReport {
        las: percent(total.las, total.tokens),
        uas: percent(total.head, total.tokens),
        em: percent(n_exact, scores.len()),
        uem: percent(n_unlabeled_exact, scores.len()),
        upos_acc: None,
        xpos_acc: None,
        n_sentences: scores.len(),
        n_tokens: total.tokens,
        n_head_correct: total.head,
        n_las_correct: total.las,
        n_exact,
        n_unlabeled_exact,
        slices: slices.into_iter().map(|(k, c)| (k, c.slice())).collect(),
        per_sentence: scores.to_vec(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TagField {
    Upos,
    Xpos,
}

/// Percentage of aligned tokens whose UPOS (or XPOS) values are equal.
/// `_` matches `_`.
pub fn tag_accuracy(gold: &Treebank, pred: &Treebank, field: TagField) -> Result<f64, EvalError> {
    let mut total = 0;
    let mut correct = 0;
    for (g, p) in align_treebanks(gold, pred)? {
        for (gt, pt) in align(g, p)? {
            total += 1;
            let equal = match field {
                TagField::Upos => gt.upos == pt.upos,
                TagField::Xpos => gt.xpos == pt.xpos,
            };
            correct += usize::from(equal);
        }
    }
    if total == 0 {
        return Err(EvalError::Empty);
    }
    Ok(percent(correct, total))
}

/// Full evaluation of a predicted treebank: attachment scores, exact
/// match, slices and tag accuracies.
pub fn evaluate(
    gold: &Treebank,
    pred: &Treebank,
    mode: DeprelMatch,
) -> Result<EvalReport, EvalError> {
    let scores = score_treebank(gold, pred, mode)?;
    let mut report = aggregate(&scores)?;
    report.upos_acc = Some(tag_accuracy(gold, pred, TagField::Upos)?);
    report.xpos_acc = Some(tag_accuracy(gold, pred, TagField::Xpos)?);
    Ok(report)
}

pub(crate) fn percent(numerator: usize, denominator: usize) -> f64 {
    if denominator == 0 {
        0.0
    } else {
        100.0 * numerator as f64 / denominator as f64
    }
}
