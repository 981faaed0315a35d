//! Corrupted copies, malformed trees and random token sequences.

use rand::seq::SliceRandom;
use rand::Rng;

use cait::conllu::{Sentence, Token};

const LABELS: &[&str] = &[
    "nsubj",
    "obj",
    "iobj",
    "obl",
    "advmod",
    "amod",
    "det",
    "nmod",
    "nmod:poss",
    "case",
    "cop",
    "aux",
    "mark",
    "punct",
    "discourse",
    "vocative",
    "compound",
    "conj",
    "cc",
    "xcomp",
    "ccomp",
    "root",
    "dep",
];

/// Copy of `sentence` where each token's head and label are independently
/// replaced with probability `rate`. Replacement heads range over `0..=n`
/// (self-loops included), so the result need not be a tree.
pub fn perturb<R: Rng>(sentence: &Sentence, rate: f64, rng: &mut R) -> Sentence {
    let mut out = sentence.clone();
    let n = out.tokens.len();
    for t in out.tokens.iter_mut() {
        if rng.gen_bool(rate) {
            t.head = rng.gen_range(0..=n);
        }
        if rng.gen_bool(rate) {
            t.deprel = LABELS.choose(rng).unwrap().to_string();
        }
    }
    out
}

/// A sentence of 1..=12 tokens with arbitrary heads (self-loops,
/// out-of-range heads, several or no roots, cycles), random labels and,
/// occasionally, shuffled ids.
pub fn malformed<R: Rng>(sent_id: &str, rng: &mut R) -> Sentence {
    let n = rng.gen_range(1..=12);
    let mut tokens: Vec<Token> = (1..=n)
        .map(|id| {
            let head = match rng.gen_range(0..10) {
                0 => id,
                1 => n + rng.gen_range(1..4),
                2 | 3 => 0,
                _ => rng.gen_range(1..=n),
            };
            let label = LABELS.choose(rng).unwrap();
            Token::new(id, &format!("w{id}"), head, label).with_upos("X")
        })
        .collect();
    if rng.gen_bool(0.15) {
        let i = rng.gen_range(0..n);
        tokens[i].id += rng.gen_range(1..3);
    }
    Sentence::new(sent_id, tokens)
}

const FUZZ_WORDS: &[&str] = &[
    "the",
    "a",
    "dog",
    "ball",
    "?",
    ".",
    "!",
    ",",
    "xxx",
    "zorp",
    "you",
    "is",
    "'s",
    "n't",
    "Mummy",
    "café",
    "42",
    "gonna",
    "ooh",
    "---",
    "running",
    "quickly",
    "\u{1F600}",
];

/// A sentence of 1..=25 random tokens with no annotation beyond forms.
pub fn fuzz_sentence<R: Rng>(sent_id: &str, rng: &mut R) -> Sentence {
    let n = rng.gen_range(1..=25);
    let tokens = (1..=n)
        .map(|id| {
            let form = if rng.gen_bool(0.2) {
                let len = rng.gen_range(1..8);
                (0..len)
                    .map(|_| rng.gen_range('a'..='z'))
                    .collect::<String>()
            } else {
                FUZZ_WORDS.choose(rng).unwrap().to_string()
            };
            Token::new(id, &form, 0, "_")
        })
        .collect();
    Sentence::new(sent_id, tokens)
}
