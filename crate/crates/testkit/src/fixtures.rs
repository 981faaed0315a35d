//! Hand-authored fixtures: construction exemplars, the labelled utterance
//! set, lint corpora and the London tag-question trees.

use std::path::PathBuf;

use cait::conllu::{RoleMap, Sentence, Treebank};
use cait::cxntag::CxnLabel;

use crate::build::parse_compact;

/// Absolute path of a file under `crates/testkit/fixtures`.
pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn with_text(mut s: Sentence) -> Sentence {
    let text = s.surface();
    s.set_text(&text);
    s
}

/// The nine category exemplars with their expected labels.
pub fn exemplars() -> Vec<(Sentence, CxnLabel)> {
    [
        ("ex-for", "hello/INTJ/0/root ./PUNCT/1/punct", CxnLabel::For),
        ("ex-fra", "Mummy/PROPN/0/root ./PUNCT/1/punct", CxnLabel::Fra),
        (
            "ex-qwh",
            "what/PRON/0/root is/AUX/1/cop/be that/PRON/1/nsubj ?/PUNCT/1/punct",
            CxnLabel::Qwh,
        ),
        (
            "ex-qyn",
            "can/AUX/3/aux you/PRON/3/nsubj hear/VERB/0/root me/PRON/3/obj ?/PUNCT/3/punct",
            CxnLabel::Qyn,
        ),
        (
            "ex-cop",
            "it/PRON/4/nsubj 's/AUX/4/cop/be a/DET/4/det kite/NOUN/0/root ./PUNCT/4/punct",
            CxnLabel::Cop,
        ),
        (
            "ex-imp",
            "let/VERB/0/root 's/PRON/1/obj/we go/VERB/1/xcomp ./PUNCT/1/punct",
            CxnLabel::Imp,
        ),
        (
            "ex-spi",
            "she/PRON/2/nsubj laughed/VERB/0/root/laugh ./PUNCT/2/punct",
            CxnLabel::Spi,
        ),
        (
            "ex-spt",
            "I/PRON/2/nsubj love/VERB/0/root you/PRON/2/obj ./PUNCT/2/punct",
            CxnLabel::Spt,
        ),
        (
            "ex-com",
            "I/PRON/2/nsubj want/VERB/0/root to/PART/4/mark go/VERB/2/xcomp and/CCONJ/6/cc play/VERB/4/conj ./PUNCT/2/punct",
            CxnLabel::Com,
        ),
    ]
    .into_iter()
    .map(|(id, spec, label)| (with_text(parse_compact(id, spec)), label))
    .collect()
}

/// "she is running": progressive, not copular.
pub fn progressive_exemplar() -> Sentence {
    with_text(parse_compact(
        "ex-prog",
        "she/PRON/3/nsubj is/AUX/3/aux/be running/VERB/0/root/run/Tense=Pres|VerbForm=Part ./PUNCT/3/punct",
    ))
}

/// "that 's good is n't it ?" with the tag attached as parataxis.
pub fn tag_question_exemplar() -> Sentence {
    with_text(parse_compact(
        "ex-tag",
        "that/PRON/3/nsubj 's/AUX/3/cop/be good/ADJ/0/root is/AUX/3/parataxis/be n't/PART/4/advmod/not it/PRON/4/nsubj ?/PUNCT/3/punct",
    ))
}

/// Gold tree of "It was in London was n't it ?".
pub fn london_gold() -> Sentence {
    with_text(parse_compact(
        "london",
        "It/PRON/4/nsubj/it was/AUX/4/cop/be in/ADP/4/case London/PROPN/0/root was/AUX/4/parataxis/be n't/PART/5/advmod/not it/PRON/5/nsubj ?/PUNCT/4/punct",
    ))
}

/// The predicted tree for the same sentence: the tag-question copula is
/// taken as the root.
pub fn london_predicted() -> Sentence {
    with_text(parse_compact(
        "london",
        "It/PRON/4/nsubj/it was/AUX/4/cop/be in/ADP/4/case London/PROPN/7/obl was/AUX/7/cop/be n't/PART/7/advmod/not it/PRON/0/root ?/PUNCT/7/punct",
    ))
}

/// "Are you finished with your juice ?" with `your` labelled `det`.
pub fn juice_gold() -> Sentence {
    with_text(parse_compact(
        "juice",
        "Are/AUX/3/aux/be you/PRON/3/nsubj finished/VERB/0/root/finish/Tense=Past|VerbForm=Part with/ADP/6/case your/PRON/6/det/you/Person=2|Poss=Yes|PronType=Prs juice/NOUN/3/obl ?/PUNCT/3/punct",
    ))
}

/// One hand-labelled utterance.
#[derive(Clone, Debug)]
pub struct LabelledUtterance {
    pub sentence: Sentence,
    pub label: CxnLabel,
}

/// The 100 hand-labelled utterances in `fixtures/cxn_fixture.txt`, with
/// speaker and age metadata filled in.
pub fn cxn_fixture() -> Vec<LabelledUtterance> {
    let text = std::fs::read_to_string(fixture_path("cxn_fixture.txt"))
        .expect("cxn_fixture.txt is readable");
    let roles = RoleMap::default();
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|line| {
            let cols: Vec<&str> = line.splitn(5, '\t').collect();
            let [id, label, speaker, age, tokens] = cols.as_slice() else {
                panic!("bad fixture line {line:?}");
            };
            let mut sentence = with_text(parse_compact(id, tokens));
            sentence.set_speaker(speaker, roles.role(speaker));
            if *age != "_" {
                sentence.set_age_months(age.parse().expect("numeric age"));
            }
            LabelledUtterance {
                sentence,
                label: label.parse().expect("known label"),
            }
        })
        .collect()
}

pub fn cxn_fixture_treebank() -> Treebank {
    Treebank::new(cxn_fixture().into_iter().map(|u| u.sentence).collect())
}

/// Gold labels as `sent_id TAB label` lines.
pub fn cxn_gold_tsv() -> String {
    cxn_fixture()
        .iter()
        .map(|u| format!("{}\t{}\n", u.sentence.sent_id(), u.label))
        .collect()
}

const POSSESSORS: &[(&str, &str, &str)] = &[
    ("your", "you", "Number=Sing|Person=2|Poss=Yes|PronType=Prs"),
    ("my", "my", "Number=Sing|Person=1|Poss=Yes|PronType=Prs"),
    (
        "his",
        "he",
        "Gender=Masc|Number=Sing|Person=3|Poss=Yes|PronType=Prs",
    ),
    (
        "her",
        "she",
        "Gender=Fem|Number=Sing|Person=3|Poss=Yes|PronType=Prs",
    ),
    ("our", "we", "Number=Plur|Person=1|Poss=Yes|PronType=Prs"),
];
const THINGS: &[&str] = &[
    "ball", "cup", "shoe", "hat", "book", "teddy", "coat", "spoon", "bike", "sock",
];

/// Indices (0-based) in [`poss_corpus`] whose possessive is labelled `det`.
pub const POSS_DET_AT: [usize; 7] = [3, 17, 29, 41, 58, 72, 90];
/// Indices (0-based) in [`nn_corpus`] whose premodifier is labelled `nmod`.
pub const NN_NMOD_AT: [usize; 5] = [8, 33, 51, 67, 94];

/// 100 "give me POSS NOUN ." sentences; 7 label the possessive `det`.
pub fn poss_corpus() -> Treebank {
    let sentences = (0..100)
        .map(|i| {
            let (form, lemma, feats) = POSSESSORS[i % POSSESSORS.len()];
            let rel = if POSS_DET_AT.contains(&i) { "det" } else { "nmod:poss" };
            let noun = THINGS[i % THINGS.len()];
            let spec = format!(
                "give/VERB/0/root me/PRON/1/iobj {form}/PRON/4/{rel}/{lemma}/{feats} {noun}/NOUN/1/obj ./PUNCT/1/punct"
            );
            with_text(parse_compact(&format!("poss-{:03}", i + 1), &spec))
        })
        .collect();
    Treebank::new(sentences)
}

const NN_PAIRS: &[(&str, &str)] = &[
    ("toy", "box"),
    ("bath", "time"),
    ("fire", "engine"),
    ("tea", "cup"),
    ("story", "book"),
    ("apple", "juice"),
    ("rain", "coat"),
    ("bed", "time"),
    ("car", "seat"),
    ("door", "bell"),
];

/// 100 "that 's the NOUN NOUN ." sentences; 5 label the first noun `nmod`.
pub fn nn_corpus() -> Treebank {
    let sentences = (0..100)
        .map(|i| {
            let (m, h) = NN_PAIRS[i % NN_PAIRS.len()];
            let rel = if NN_NMOD_AT.contains(&i) { "nmod" } else { "compound" };
            let spec = format!(
                "that/PRON/5/nsubj 's/AUX/5/cop/be the/DET/5/det {m}/NOUN/5/{rel} {h}/NOUN/0/root ./PUNCT/5/punct"
            );
            with_text(parse_compact(&format!("nn-{:03}", i + 1), &spec))
        })
        .collect();
    Treebank::new(sentences)
}
