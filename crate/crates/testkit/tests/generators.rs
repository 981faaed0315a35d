use cait::baseline::is_projective;
use cait::conllu::{validate, Sentence};
use cait_testkit::*;

fn heads(s: &Sentence) -> Vec<usize> {
    s.tokens.iter().map(|t| t.head).collect()
}

fn check_all(sentences: &[Sentence]) {
    for s in sentences {
        assert!(
            validate(s).is_empty(),
            "{}: {:?} {:?}",
            s.sent_id(),
            s.surface(),
            validate(s)
        );
        assert!(
            is_projective(&heads(s)),
            "{} non-projective: {}",
            s.sent_id(),
            s.surface()
        );
    }
}

#[test]
fn cds_trees_are_valid_and_projective() {
    let tb = cds_treebank(2000, 11);
    assert_eq!(tb.len(), 2000);
    check_all(&tb.sentences);
    assert!(tb.sentences.iter().all(|s| s.child_age_months().is_some()));
}

#[test]
fn written_trees_are_valid_and_projective() {
    check_all(&written_treebank(1000, 5).sentences);
}

#[test]
fn generators_are_reproducible() {
    assert_eq!(cds_treebank(50, 3), cds_treebank(50, 3));
    assert_ne!(cds_treebank(50, 3), cds_treebank(50, 4));
    assert_eq!(written_treebank(50, 3), written_treebank(50, 3));
}

#[test]
fn fixtures_are_valid() {
    let fixture = cxn_fixture();
    assert_eq!(fixture.len(), 100);
    check_all(
        &fixture
            .iter()
            .map(|u| u.sentence.clone())
            .collect::<Vec<_>>(),
    );
    check_all(&exemplars().into_iter().map(|(s, _)| s).collect::<Vec<_>>());
    check_all(&[
        london_gold(),
        juice_gold(),
        progressive_exemplar(),
        tag_question_exemplar(),
    ]);
    check_all(&poss_corpus().sentences);
    check_all(&nn_corpus().sentences);
}
