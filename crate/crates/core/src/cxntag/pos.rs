//! Word-order heuristics over UPOS tags, for input without a parse.

use super::ud::{ends_with_question, is_be, is_wh, lemma, lower_form};
use super::{is_excluded, Backend, CxnLabel, FormulaicLexicon, TaggedUtterance};
use crate::conllu::{Sentence, Token};

/// Label assigned by each heuristic, in order.
pub const POS_RULES: [CxnLabel; 9] = [
    CxnLabel::For,
    CxnLabel::Qwh,
    CxnLabel::Qyn,
    CxnLabel::Fra,
    CxnLabel::Cop,
    CxnLabel::Imp,
    CxnLabel::Com,
    CxnLabel::Spt,
    CxnLabel::Spi,
];

/// First token that is not an interjection, punctuation, conjunction or a
/// name set off by a comma ("Anna , throw it").
fn first_content(tokens: &[Token]) -> Option<&Token> {
    tokens.iter().enumerate().find_map(|(i, t)| {
        let skip = matches!(t.upos.as_str(), "INTJ" | "PUNCT" | "CCONJ")
            || (t.upos == "PROPN" && tokens.get(i + 1).is_some_and(|n| n.form == ","));
        (!skip).then_some(t)
    })
}

/// `do n't` / `don't` followed directly by a verb.
fn negative_imperative(tokens: &[Token]) -> bool {
    tokens.windows(3).next().is_some_and(|w| {
        w[0].upos == "AUX"
            && lemma(&w[0]) == "do"
            && matches!(lower_form(&w[1]).as_str(), "n't" | "not")
            && w[2].upos == "VERB"
    })
}

fn is_verbal(t: &Token) -> bool {
    t.upos == "VERB" || t.upos == "AUX"
}

/// Evaluate all nine heuristics; the last always matches.
pub fn pos_rule_matches(sentence: &Sentence, lexicon: &FormulaicLexicon) -> [bool; 9] {
    let tokens = &sentence.tokens;
    let question = ends_with_question(sentence);
    let first = first_content(tokens);
    let verbs: Vec<usize> = (0..tokens.len())
        .filter(|&i| is_verbal(&tokens[i]))
        .collect();
    let n_full_verbs = tokens.iter().filter(|t| t.upos == "VERB").count();

    let lets = tokens
        .windows(2)
        .any(|w| lemma(&w[0]) == "let" && matches!(lower_form(&w[1]).as_str(), "'s" | "us"));
    let transitive = tokens.iter().enumerate().any(|(i, t)| {
        t.upos == "VERB"
            && tokens[i + 1..]
                .iter()
                .any(|o| matches!(o.upos.as_str(), "NOUN" | "PRON" | "PROPN"))
    });

    [
        lexicon.matches(sentence),
        question && first.is_some_and(is_wh),
        question && first.is_some_and(|t| t.upos == "AUX"),
        verbs.is_empty(),
        !verbs.is_empty() && verbs.iter().all(|&i| is_be(&tokens[i])),
        first.is_some_and(|t| t.upos == "VERB") || lets || negative_imperative(tokens),
        n_full_verbs >= 2 || tokens.iter().any(|t| t.upos == "SCONJ"),
        transitive,
        true,
    ]
}

/// Tag from UPOS and word order alone. Never fails: missing UPOS simply
/// leaves fewer heuristics able to fire.
pub fn tag_pos(sentence: &Sentence, lexicon: &FormulaicLexicon) -> TaggedUtterance {
    if is_excluded(sentence) {
        return TaggedUtterance::new(sentence, CxnLabel::X, Backend::PosRules, 0);
    }
    let matches = pos_rule_matches(sentence, lexicon);
    let step = matches.iter().position(|m| *m).unwrap_or(8);
    TaggedUtterance::new(sentence, POS_RULES[step], Backend::PosRules, step as u8 + 1)
}
