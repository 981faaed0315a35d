//! Removal of utterance-final tag questions (`that's good, isn't it?`).

use super::normalize_utterance;
use super::ud::{is_question_mark, is_wh, lower_form};
use crate::conllu::{Sentence, Token};

/// Multiword tags recognised by surface form alone.
const CLOSED_TAGS: &[&str] = &[
    "isn't it",
    "is it",
    "doesn't it",
    "does it",
    "don't you",
    "do you",
    "can't you",
    "won't you",
    "aren't you",
    "aren't they",
    "wasn't it",
    "didn't you",
    "didn't it",
    "haven't you",
    "shall we",
    "will you",
];

/// Single-word tags. These also occur as ordinary words (`turn right`), so
/// they must be set off by a comma or attached as discourse or parataxis.
const CLOSED_WORDS: &[&str] = &["okay", "ok", "right", "huh", "eh", "yeah", "alright"];

fn is_negation(t: &Token) -> bool {
    matches!(lower_form(t).as_str(), "n't" | "not" | "nt")
}

fn is_aux(t: &Token) -> bool {
    t.upos == "AUX"
}

fn is_pron(t: &Token) -> bool {
    t.upos == "PRON"
}

/// AUX (neg)? PRON, or AUX PRON neg.
fn has_tag_shape(span: &[Token]) -> bool {
    match span {
        [a, p] => is_aux(a) && is_pron(p),
        [a, n, p] => is_aux(a) && is_negation(n) && is_pron(p),
        _ => false,
    }
}

fn has_inverted_negation(span: &[Token]) -> bool {
    matches!(span, [a, p, n] if is_aux(a) && is_pron(p) && is_negation(n))
}

fn universal(rel: &str) -> &str {
    rel.split(':').next().unwrap_or(rel)
}

/// Positions `[start, end)` of a tag question directly before the
/// utterance-final punctuation, if there is one.
fn find_tag(sentence: &Sentence) -> Option<(usize, usize)> {
    let tokens = &sentence.tokens;
    let n = tokens.len();
    if tokens.iter().any(|t| t.head > n) {
        return None;
    }
    let end = tokens.iter().rposition(|t| !t.is_punct())? + 1;
    for len in (1..=3).rev() {
        if len >= end {
            continue;
        }
        let start = end - len;
        let span = &tokens[start..end];
        let in_span = |id: usize| id > start && id <= end;

        // Exactly one token heads the span from outside, and no
        // non-punctuation token outside the span depends on it.
        let tops: Vec<&Token> = span.iter().filter(|t| !in_span(t.head)).collect();
        let [top] = tops.as_slice() else { continue };
        if top.head == 0 {
            continue;
        }
        let leaks = tokens
            .iter()
            .enumerate()
            .any(|(i, t)| !in_span(i + 1) && !t.is_punct() && in_span(t.head));
        if leaks {
            continue;
        }
        if !tokens[..start].iter().any(|t| !t.is_punct()) {
            continue;
        }

        let rel = universal(&top.deprel);
        let surface = normalize_utterance(
            &span
                .iter()
                .map(|t| t.form.as_str())
                .collect::<Vec<_>>()
                .join(" "),
        );
        let comma_before = start > 0 && tokens[start - 1].form == ",";
        let accepted = if has_tag_shape(span) || has_inverted_negation(span) {
            rel == "parataxis" || rel == "discourse" || CLOSED_TAGS.contains(&surface.as_str())
        } else if len == 1 {
            CLOSED_WORDS.contains(&surface.as_str())
                && (comma_before || rel == "discourse" || rel == "parataxis")
        } else {
            false
        };
        if accepted {
            return Some((start, end));
        }
    }
    None
}

/// A question that survives the removal: starts with an auxiliary or a
/// wh-word.
fn remains_question(tokens: &[Token]) -> bool {
    tokens
        .iter()
        .find(|t| !t.is_punct() && !matches!(universal(&t.deprel), "discourse" | "vocative" | "cc"))
        .is_some_and(|t| is_aux(t) || is_wh(t))
}

fn strip_once(sentence: &Sentence) -> Option<(Sentence, String)> {
    let (start, end) = find_tag(sentence)?;
    let tokens = &sentence.tokens;
    let removed = tokens[start..end]
        .iter()
        .map(|t| t.form.as_str())
        .collect::<Vec<_>>()
        .join(" ");

    // Commas immediately before the tag go with it.
    let mut cut_start = start;
    while cut_start > 0 && tokens[cut_start - 1].form == "," {
        cut_start -= 1;
    }
    let keep: Vec<usize> = (0..tokens.len())
        .filter(|&i| i < cut_start || i >= end)
        .collect();

    let root_old = tokens.iter().position(|t| t.head == 0)? + 1;
    let mut new_id = vec![0usize; tokens.len() + 1];
    for (new, &old) in keep.iter().enumerate() {
        new_id[old + 1] = new + 1;
    }

    let mut out_tokens: Vec<Token> = keep
        .iter()
        .map(|&old| {
            let mut t = tokens[old].clone();
            t.id = new_id[old + 1];
            t.head = match t.head {
                0 => 0,
                h if new_id[h] == 0 => new_id[root_old],
                h => new_id[h],
            };
            t
        })
        .collect();

    let question_removed = tokens[end..].iter().any(is_question_mark);
    if question_removed && !remains_question(&out_tokens) {
        let first_final = out_tokens.len() - (tokens.len() - end);
        for t in &mut out_tokens[first_final..] {
            if is_question_mark(t) {
                t.form = ".".into();
                t.lemma = ".".into();
                t.upos = "PUNCT".into();
                t.xpos = ".".into();
            }
        }
    }

    let mut out = sentence.clone();
    out.tokens = out_tokens;
    out.mwt = sentence
        .mwt
        .iter()
        .filter(|m| (m.start..=m.end).all(|id| new_id.get(id).is_some_and(|&n| n != 0)))
        .map(|m| {
            let mut m = m.clone();
            m.start = new_id[m.start];
            m.end = new_id[m.end];
            m
        })
        .collect();
    out.empty_nodes.clear();
    if out.text().is_some() {
        let text = out.surface();
        out.set_text(&text);
    }
    Some((out, removed))
}

/// Remove a final tag question, repeating until none is left, and report
/// the removed words.
pub(crate) fn strip_with_report(sentence: &Sentence) -> (Sentence, Option<String>) {
    let mut current = sentence.clone();
    let mut removed: Vec<String> = Vec::new();
    while let Some((next, words)) = strip_once(&current) {
        current = next;
        removed.insert(0, words);
    }
    let report = (!removed.is_empty()).then(|| removed.join(" "));
    (current, report)
}

/// Remove an utterance-final tag question. Sentences without one are
/// returned unchanged.
pub fn strip_tag_question(sentence: &Sentence) -> Sentence {
    strip_with_report(sentence).0
}
