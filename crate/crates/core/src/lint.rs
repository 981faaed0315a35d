//! Detection of two annotation inconsistencies in gold treebanks:
//! possessive pronouns labelled `det`, and noun-noun premodification
//! labelled `nmod`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::conllu::{Sentence, Token, Treebank};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum LintRule {
    #[serde(rename = "POSS_AS_DET")]
    PossAsDet,
    #[serde(rename = "NN_AS_NMOD")]
    NnAsNmod,
}

impl LintRule {
    pub const ALL: [LintRule; 2] = [LintRule::PossAsDet, LintRule::NnAsNmod];

    pub fn as_str(self) -> &'static str {
        match self {
            LintRule::PossAsDet => "POSS_AS_DET",
            LintRule::NnAsNmod => "NN_AS_NMOD",
        }
    }

    pub fn suggestion(self) -> &'static str {
        match self {
            LintRule::PossAsDet => "nmod:poss",
            LintRule::NnAsNmod => "compound",
        }
    }
}

impl fmt::Display for LintRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LintRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LintRule::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown lint rule {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LintFinding {
    pub sent_id: String,
    pub token_id: usize,
    pub rule: LintRule,
    pub gold_deprel: String,
    pub suggested_deprel: String,
    /// Up to two forms either side, with the flagged token in brackets.
    pub context: String,
}

impl LintFinding {
    pub const TSV_HEADER: &'static str =
        "sent_id\ttoken_id\trule\tgold_deprel\tsuggested_deprel\tcontext";

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.sent_id,
            self.token_id,
            self.rule,
            self.gold_deprel,
            self.suggested_deprel,
            self.context
        )
    }
}

/// Findings for one rule, with the token-level rate over all candidates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LintReport {
    pub rule: LintRule,
    pub findings: Vec<LintFinding>,
    pub n_candidates: usize,
    /// `findings / candidates`; `None` when there are no candidates.
    pub rate: Option<f64>,
}

impl LintReport {
    pub fn n_flagged(&self) -> usize {
        self.findings.len()
    }
}

fn context(sentence: &Sentence, pos: usize) -> String {
    let lo = pos.saturating_sub(2);
    let hi = (pos + 3).min(sentence.tokens.len());
    (lo..hi)
        .map(|i| {
            let form = &sentence.tokens[i].form;
            if i == pos {
                format!("[{form}]")
            } else {
                form.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn is_nominal(t: &Token) -> bool {
    t.upos == "NOUN" || t.upos == "PROPN"
}

fn is_possessive_pronoun(t: &Token) -> bool {
    t.upos == "PRON" && t.feats.has("Poss", "Yes")
}

/// Noun directly before a nominal head, without a `case` dependent.
fn is_noun_premodifier(sentence: &Sentence, pos: usize) -> bool {
    let t = &sentence.tokens[pos];
    let id = pos + 1;
    is_nominal(t)
        && t.head == id + 1
        && sentence.token(t.head).is_some_and(is_nominal)
        && !sentence
            .children(id)
            .any(|c| c.deprel.split(':').next() == Some("case"))
}

/// Classify a token for `rule`: `Some(true)` flagged, `Some(false)` a
/// correctly labelled candidate, `None` not a candidate.
fn classify(rule: LintRule, sentence: &Sentence, pos: usize) -> Option<bool> {
    let t = &sentence.tokens[pos];
    match rule {
        LintRule::PossAsDet => {
            if !is_possessive_pronoun(t) {
                return None;
            }
            match t.deprel.as_str() {
                "det" => Some(true),
                "nmod:poss" => Some(false),
                _ => None,
            }
        }
        LintRule::NnAsNmod => {
            let flagged = match t.deprel.as_str() {
                "nmod" => true,
                "compound" => false,
                _ => return None,
            };
            is_noun_premodifier(sentence, pos).then_some(flagged)
        }
    }
}

/// Scan a treebank for one rule. Findings are ordered by
/// `(sent_id, token_id)`.
pub fn lint(treebank: &Treebank, rule: LintRule) -> LintReport {
    let mut findings = Vec::new();
    let mut n_candidates = 0;
    for sentence in &treebank.sentences {
        let (f, c) = lint_sentence(sentence, rule);
        findings.extend(f);
        n_candidates += c;
    }
    findings.sort_by(|a, b| (&a.sent_id, a.token_id).cmp(&(&b.sent_id, b.token_id)));
    LintReport {
        rule,
        rate: (n_candidates > 0).then(|| findings.len() as f64 / n_candidates as f64),
        findings,
        n_candidates,
    }
}

/// Findings and candidate count for a single sentence.
pub fn lint_sentence(sentence: &Sentence, rule: LintRule) -> (Vec<LintFinding>, usize) {
    let mut findings = Vec::new();
    let mut candidates = 0;
    for pos in 0..sentence.tokens.len() {
        let Some(flagged) = classify(rule, sentence, pos) else {
            continue;
        };
        candidates += 1;
        if flagged {
            let t = &sentence.tokens[pos];
            findings.push(LintFinding {
                sent_id: sentence.sent_id().to_string(),
                token_id: pos + 1,
                rule,
                gold_deprel: t.deprel.clone(),
                suggested_deprel: rule.suggestion().to_string(),
                context: context(sentence, pos),
            });
        }
    }
    (findings, candidates)
}

pub fn lint_poss_det(treebank: &Treebank) -> LintReport {
    lint(treebank, LintRule::PossAsDet)
}

pub fn lint_nn_nmod(treebank: &Treebank) -> LintReport {
    lint(treebank, LintRule::NnAsNmod)
}

/// Relabel every flagged token with its suggestion. Findings whose
/// sentence or token cannot be found are ignored.
pub fn apply_fixes(treebank: &Treebank, findings: &[LintFinding]) -> Treebank {
    let mut out = treebank.clone();
    for sentence in &mut out.sentences {
        let id = sentence.sent_id().to_string();
        for f in findings.iter().filter(|f| f.sent_id == id) {
            if let Some(t) = f
                .token_id
                .checked_sub(1)
                .and_then(|i| sentence.tokens.get_mut(i))
            {
                if t.deprel == f.gold_deprel {
                    t.deprel = f.suggested_deprel.clone();
                }
            }
        }
    }
    out
}
