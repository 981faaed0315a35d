//! Twelve-step decision procedure over UD trees.
//!
//! Steps are tried in order and the first one that matches decides the
//! label. Each step is a separate predicate so that callers can check the
//! first-match property by re-evaluating all of them.

use super::{is_excluded, Backend, CxnLabel, FormulaicLexicon, TagError, TaggedUtterance};
use crate::conllu::{Sentence, Token};

/// Label assigned by each step, in order.
pub const UD_RULES: [CxnLabel; 12] = [
    CxnLabel::For,
    CxnLabel::Fra,
    CxnLabel::Qyn,
    CxnLabel::Qwh,
    CxnLabel::Com,
    CxnLabel::Cop,
    CxnLabel::Fra,
    CxnLabel::Imp,
    CxnLabel::Spi,
    CxnLabel::Spt,
    CxnLabel::Spi,
    CxnLabel::Fra,
];

/// Verbs that count as transitive when they take an `xcomp`
/// (`she needs to eat`, `I'm going to read`).
pub const CONTROL_VERBS: &[&str] = &[
    "want", "need", "try", "like", "have", "go", "start", "begin", "love", "hate",
];

pub(crate) const WH_WORDS: &[&str] = &[
    "who", "what", "where", "when", "why", "how", "which", "whose", "whom",
];

const BE_FORMS: &[&str] = &[
    "be", "am", "is", "are", "was", "were", "been", "being", "'m", "'re", "m", "re", "ai",
];

const SUBJECT_RELS: &[&str] = &["nsubj", "nsubj:pass", "csubj", "csubj:pass", "expl"];

/// Relations that introduce a separate clause on the way to the root.
const CLAUSAL_RELS: &[&str] = &["ccomp", "advcl", "acl", "parataxis", "csubj"];

/// Leading tokens that do not count when looking for the clause start.
const LEADING_SKIP: &[&str] = &["discourse", "vocative", "punct", "cc", "reparandum"];

/// Dependents that an incomplete copula may still have.
const INCOMPLETE_COPULA_DEPS: &[&str] = &[
    "nsubj",
    "punct",
    "discourse",
    "vocative",
    "advmod",
    "aux",
    "cc",
    "mark",
    "reparandum",
];

pub(crate) fn universal(rel: &str) -> &str {
    rel.split(':').next().unwrap_or(rel)
}

pub(crate) fn lower_form(t: &Token) -> String {
    t.form.to_lowercase().replace('\u{2019}', "'")
}

/// Lowercased lemma, falling back to the form when no lemma is given.
pub(crate) fn lemma(t: &Token) -> String {
    if t.lemma == "_" || t.lemma.is_empty() {
        lower_form(t)
    } else {
        t.lemma.to_lowercase()
    }
}

pub(crate) fn is_be(t: &Token) -> bool {
    if t.lemma != "_" && !t.lemma.is_empty() {
        return t.lemma.eq_ignore_ascii_case("be");
    }
    let form = lower_form(t);
    BE_FORMS.contains(&form.as_str()) || (form == "'s" && t.upos == "AUX")
}

pub(crate) fn is_wh(t: &Token) -> bool {
    t.feats.has("PronType", "Int") || WH_WORDS.contains(&lemma(t).as_str())
}

pub(crate) fn is_question_mark(t: &Token) -> bool {
    t.form.contains('?')
}

/// True if the last token or any utterance-final punctuation contains `?`.
pub(crate) fn ends_with_question(sentence: &Sentence) -> bool {
    let tokens = &sentence.tokens;
    tokens.last().is_some_and(is_question_mark)
        || tokens
            .iter()
            .rev()
            .take_while(|t| t.upos == "PUNCT")
            .any(is_question_mark)
}

fn is_verbal(t: &Token) -> bool {
    t.upos == "VERB" || t.upos == "AUX"
}

fn is_finite(t: &Token) -> bool {
    is_verbal(t)
        && !matches!(
            t.feats.get("VerbForm"),
            Some("Inf") | Some("Part") | Some("Ger")
        )
}

fn is_participle(t: &Token) -> bool {
    matches!(t.feats.get("VerbForm"), Some("Part") | Some("Ger"))
        || matches!(t.xpos.as_str(), "VBN" | "VBG")
        || (t.feats.is_empty() && t.xpos == "_" && {
            let f = lower_form(t);
            f.ends_with("ing") || f.ends_with("ed") || f.ends_with("en")
        })
}

fn is_past_participle(t: &Token) -> bool {
    if t.feats.get("VerbForm") == Some("Part") {
        return t.feats.get("Tense") != Some("Pres");
    }
    if t.xpos == "VBN" {
        return true;
    }
    t.feats.is_empty() && t.xpos == "_" && {
        let f = lower_form(t);
        f.ends_with("ed") || f.ends_with("en")
    }
}

fn is_base_form(t: &Token) -> bool {
    t.feats.get("VerbForm") == Some("Inf")
        || t.feats.get("Mood") == Some("Imp")
        || t.xpos == "VB"
        || (t.feats.is_empty() && t.xpos == "_" && lemma(t) == lower_form(t))
}

/// A validated sentence with child lists.
pub(crate) struct Tree<'a> {
    pub sentence: &'a Sentence,
    children: Vec<Vec<usize>>,
    pub root: usize,
}

impl<'a> Tree<'a> {
    pub fn new(sentence: &'a Sentence) -> Option<Self> {
        let n = sentence.len();
        let mut children = vec![Vec::new(); n + 1];
        let mut root = None;
        for (pos, t) in sentence.tokens.iter().enumerate() {
            if t.head == 0 {
                root.get_or_insert(pos + 1);
            }
            if t.head <= n {
                children[t.head].push(pos + 1);
            }
        }
        Some(Tree {
            sentence,
            children,
            root: root?,
        })
    }

    pub fn tok(&self, id: usize) -> &'a Token {
        &self.sentence.tokens[id - 1]
    }

    pub fn children(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        self.children[id].iter().copied()
    }

    pub fn children_with<'r>(
        &'r self,
        id: usize,
        rels: &'r [&'r str],
    ) -> impl Iterator<Item = usize> + 'r {
        self.children(id)
            .filter(move |&c| rels.contains(&self.tok(c).deprel.as_str()))
    }

    fn has_child(&self, id: usize, rels: &[&str]) -> bool {
        self.children_with(id, rels).next().is_some()
    }

    pub fn subjects(&self, id: usize) -> Vec<usize> {
        self.children_with(id, SUBJECT_RELS).collect()
    }

    /// First token that is not punctuation, discourse material, a
    /// vocative, a coordinator or a reparandum.
    pub fn first_content(&self) -> Option<usize> {
        (1..=self.sentence.len())
            .find(|&id| !LEADING_SKIP.contains(&universal(&self.tok(id).deprel)))
    }

    pub fn ends_with_question(&self) -> bool {
        ends_with_question(self.sentence)
    }

    /// True if the path from `id` up to the root crosses no clausal
    /// relation.
    pub fn in_main_clause(&self, id: usize) -> bool {
        let mut current = id;
        let mut steps = 0;
        while current != self.root && current != 0 && steps <= self.sentence.len() {
            if CLAUSAL_RELS.contains(&universal(&self.tok(current).deprel)) {
                return false;
            }
            current = self.tok(current).head;
            steps += 1;
        }
        current == self.root
    }
}

fn check_annotations(sentence: &Sentence) -> Result<(), TagError> {
    for (pos, t) in sentence.tokens.iter().enumerate() {
        if t.upos == "_" || t.upos.is_empty() || t.deprel == "_" || t.deprel.is_empty() {
            return Err(TagError::MissingAnnotation {
                sent_id: sentence.sent_id().to_string(),
                token: pos + 1,
            });
        }
    }
    Ok(())
}

// 1 FOR
fn formulaic(tree: &Tree, lexicon: &FormulaicLexicon) -> bool {
    lexicon.matches(tree.sentence)
}

// 2 FRA: incomplete copula or exclamative.
fn incomplete_copula_or_exclamative(tree: &Tree) -> bool {
    let root = tree.tok(tree.root);
    let incomplete_copula = is_be(root)
        && is_verbal(root)
        && !tree.has_child(tree.root, &["expl"])
        && tree.subjects(tree.root).iter().all(|&s| s < tree.root)
        && tree
            .children(tree.root)
            .all(|c| INCOMPLETE_COPULA_DEPS.contains(&tree.tok(c).deprel.as_str()));
    if incomplete_copula {
        return true;
    }
    let Some(first) = tree.first_content() else {
        return false;
    };
    let opener = lemma(tree.tok(first));
    let next_is_article = first < tree.sentence.len()
        && matches!(lower_form(tree.tok(first + 1)).as_str(), "a" | "an");
    (opener == "what" || opener == "such")
        && next_is_article
        && !tree.sentence.tokens.iter().any(is_finite)
}

// 3 QYN: clause-initial auxiliary before its subject, and a question mark.
fn aux_inversion_question(tree: &Tree) -> bool {
    if !tree.ends_with_question() {
        return false;
    }
    let Some(first) = tree.first_content() else {
        return false;
    };
    let aux = tree.tok(first);
    if aux.upos != "AUX" {
        return false;
    }
    // The auxiliary governs the clause itself (elliptical `is it?`) or
    // attaches to the root.
    if first != tree.root && aux.head != tree.root {
        return false;
    }
    let subjects = tree.subjects(tree.root);
    !subjects.is_empty() && subjects.iter().all(|&s| s > first)
}

// 4 QWH: wh-word fronted in the main clause.
fn fronted_wh(tree: &Tree) -> bool {
    let root = tree.root;
    let mut anchors: Vec<usize> = tree.subjects(root);
    anchors.extend(tree.children_with(root, &["aux", "aux:pass", "cop"]));
    if is_verbal(tree.tok(root)) {
        anchors.push(root);
    }
    let limit = anchors.into_iter().min().unwrap_or(usize::MAX);
    let Some(first) = tree.first_content() else {
        return false;
    };
    (first..=tree.sentence.len())
        .take_while(|&id| id <= limit)
        .any(|id| is_wh(tree.tok(id)) && tree.in_main_clause(id))
}

// 5 COM: clausal dependents or coordinated predicates.
fn complex(tree: &Tree) -> bool {
    for (pos, t) in tree.sentence.tokens.iter().enumerate() {
        let id = pos + 1;
        let rel = universal(&t.deprel);
        if matches!(rel, "ccomp" | "advcl" | "acl" | "parataxis") {
            return true;
        }
        if rel == "conj" && t.head != 0 {
            let head = tree.tok(t.head);
            let verbs = t.upos == "VERB" && is_verbal(head);
            let clause = tree.has_child(id, SUBJECT_RELS) || tree.has_child(id, &["cop"]);
            if verbs || clause {
                return true;
            }
        }
    }
    false
}

// 6 COP: copula, existential, or be + past participle.
fn copular(tree: &Tree) -> bool {
    let root_id = tree.root;
    let root = tree.tok(root_id);
    if tree.has_child(root_id, &["cop"]) {
        return true;
    }
    let existential = is_be(root)
        && tree
            .children_with(root_id, &["expl"])
            .any(|c| lemma(tree.tok(c)) == "there");
    if existential {
        return true;
    }
    is_past_participle(root)
        && tree
            .children_with(root_id, &["aux", "aux:pass"])
            .any(|c| is_be(tree.tok(c)))
}

// 7 FRA: no verbal root, or a bare participle.
fn verbless_or_bare_participle(tree: &Tree) -> bool {
    let root = tree.tok(tree.root);
    if !is_verbal(root) {
        return true;
    }
    is_participle(root)
        && !tree.has_child(tree.root, &["aux", "aux:pass"])
        && tree.subjects(tree.root).is_empty()
}

// 8 IMP
fn imperative(tree: &Tree) -> bool {
    let root_id = tree.root;
    let root = tree.tok(root_id);
    if root.upos == "VERB" && root.feats.get("Mood") == Some("Imp") {
        return true;
    }
    let subjectless = tree.subjects(root_id).is_empty();
    if let Some(first) = tree.first_content() {
        let first_tok = tree.tok(first);
        let verb_initial = root.upos == "VERB"
            && (first == root_id
                || (first_tok.upos == "AUX" && first_tok.head == root_id && first < root_id));
        if verb_initial && subjectless {
            return true;
        }
    }
    let lets = tree
        .sentence
        .tokens
        .windows(2)
        .any(|w| lemma(&w[0]) == "let" && matches!(lower_form(&w[1]).as_str(), "'s" | "us"));
    if lets {
        return true;
    }
    let emphatic_you = root.upos == "VERB"
        && is_base_form(root)
        && root.feats.get("Mood") != Some("Ind")
        && root_id > 1
        && tree
            .children_with(root_id, &["nsubj"])
            .any(|s| s == root_id - 1 && lemma(tree.tok(s)) == "you")
        && !tree.sentence.tokens.iter().any(is_question_mark);
    emphatic_you
}

// 9 SPI: elliptical auxiliary with a subject.
fn elliptical_aux(tree: &Tree) -> bool {
    tree.tok(tree.root).upos == "AUX"
        && !tree.subjects(tree.root).is_empty()
        && !tree.has_child(tree.root, &["cop"])
}

// 10 SPT: direct object, or control verb with xcomp.
fn transitive(tree: &Tree) -> bool {
    let root_id = tree.root;
    if tree.has_child(root_id, &["obj"]) {
        return true;
    }
    CONTROL_VERBS.contains(&lemma(tree.tok(root_id)).as_str())
        && tree.has_child(root_id, &["xcomp"])
}

// 11 SPI
fn verbal_root(tree: &Tree) -> bool {
    is_verbal(tree.tok(tree.root))
}

/// Evaluate all twelve steps. Entry `i` is true if step `i + 1` matches;
/// the last step always matches.
pub fn ud_rule_matches(
    sentence: &Sentence,
    lexicon: &FormulaicLexicon,
) -> Result<[bool; 12], TagError> {
    check_annotations(sentence)?;
    let tree = Tree::new(sentence).ok_or_else(|| TagError::NoRoot {
        sent_id: sentence.sent_id().to_string(),
    })?;
    Ok([
        formulaic(&tree, lexicon),
        incomplete_copula_or_exclamative(&tree),
        aux_inversion_question(&tree),
        fronted_wh(&tree),
        complex(&tree),
        copular(&tree),
        verbless_or_bare_participle(&tree),
        imperative(&tree),
        elliptical_aux(&tree),
        transitive(&tree),
        verbal_root(&tree),
        true,
    ])
}

/// Tag a sentence whose tag question (if any) was already removed.
pub fn tag_ud(
    sentence: &Sentence,
    lexicon: &FormulaicLexicon,
) -> Result<TaggedUtterance, TagError> {
    if is_excluded(sentence) {
        return Ok(TaggedUtterance::new(
            sentence,
            CxnLabel::X,
            Backend::UdRules,
            0,
        ));
    }
    let matches = ud_rule_matches(sentence, lexicon)?;
    let step = matches.iter().position(|m| *m).unwrap_or(11);
    Ok(TaggedUtterance::new(
        sentence,
        UD_RULES[step],
        Backend::UdRules,
        step as u8 + 1,
    ))
}
