//! Synthetic formal written English: long declaratives with prepositional
//! phrases, passives, relative clauses and subordinate clauses.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cait::conllu::{Sentence, Treebank};

use crate::build::Builder;

const NOUNS: &[&str] = &[
    "committee",
    "government",
    "report",
    "market",
    "company",
    "policy",
    "investor",
    "agency",
    "analysis",
    "proposal",
    "minister",
    "survey",
    "economy",
    "council",
    "board",
    "regulation",
];
const ADJS: &[&str] = &[
    "annual",
    "federal",
    "significant",
    "recent",
    "substantial",
    "economic",
    "public",
    "financial",
    "regional",
    "comprehensive",
];
const PREPS: &[&str] = &["of", "in", "for", "under", "during", "across"];
const VERBS: &[(&str, &str, &str)] = &[
    ("approved", "approve", "approved"),
    ("reviewed", "review", "reviewed"),
    ("announced", "announce", "announced"),
    ("rejected", "reject", "rejected"),
    ("published", "publish", "published"),
    ("examined", "examine", "examined"),
    ("criticized", "criticize", "criticized"),
];
const SAY: &[(&str, &str)] = &[
    ("stated", "state"),
    ("reported", "report"),
    ("argued", "argue"),
];

struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        xs.choose(&mut self.rng).expect("non-empty list")
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// `the (adj) noun (prep the noun) (which verb the noun)` headed at
    /// `head` with `rel`. Returns the noun id.
    fn np(&mut self, b: &mut Builder, head: usize, rel: &str, depth: usize) -> usize {
        let with_adj = self.chance(0.5);
        let noun_id = b.next_id() + 1 + usize::from(with_adj);
        b.push(
            "the",
            "the",
            "DET",
            "Definite=Def|PronType=Art",
            noun_id,
            "det",
        );
        if with_adj {
            let a = *self.pick(ADJS);
            b.push(a, a, "ADJ", "Degree=Pos", noun_id, "amod");
        }
        let plural = self.chance(0.3);
        let n = *self.pick(NOUNS);
        let form = if plural { plural_of(n) } else { n.to_string() };
        b.push(
            &form,
            n,
            "NOUN",
            if plural { "Number=Plur" } else { "Number=Sing" },
            head,
            rel,
        );
        if depth > 0 && self.chance(0.45) {
            let p = *self.pick(PREPS);
            let case_id = b.push(p, p, "ADP", "", 0, "case");
            let pobj = self.np(b, noun_id, "nmod", depth - 1);
            b.set_head(case_id, pobj);
        }
        if depth > 0 && self.chance(0.2) {
            let (form, lemma, _) = *self.pick(VERBS);
            let rel_id = b.push("which", "which", "PRON", "PronType=Rel", 0, "nsubj");
            let verb = b.push(
                form,
                lemma,
                "VERB",
                "Mood=Ind|Tense=Past|VerbForm=Fin",
                noun_id,
                "acl:relcl",
            );
            b.set_head(rel_id, verb);
            self.np(b, verb, "obj", 0);
        }
        noun_id
    }

    /// Active or passive clause headed by a verb attached to `head`/`rel`.
    fn clause(&mut self, b: &mut Builder, head: usize, rel: &str, depth: usize) -> usize {
        let (form, lemma, part) = *self.pick(VERBS);
        if self.chance(0.35) {
            // NP was VERBed by NP
            let subj = self.np(b, 0, "nsubj:pass", depth);
            let aux = b.push(
                "was",
                "be",
                "AUX",
                "Mood=Ind|Number=Sing|Person=3|Tense=Past|VerbForm=Fin",
                0,
                "aux:pass",
            );
            let verb = b.push(
                part,
                lemma,
                "VERB",
                "Tense=Past|VerbForm=Part|Voice=Pass",
                head,
                rel,
            );
            b.set_head(subj, verb);
            b.set_head(aux, verb);
            if self.chance(0.6) {
                let by = b.push("by", "by", "ADP", "", 0, "case");
                let agent = self.np(b, verb, "obl:agent", depth);
                b.set_head(by, agent);
            }
            verb
        } else {
            let subj = self.np(b, 0, "nsubj", depth);
            let verb = b.push(
                form,
                lemma,
                "VERB",
                "Mood=Ind|Tense=Past|VerbForm=Fin",
                head,
                rel,
            );
            b.set_head(subj, verb);
            self.np(b, verb, "obj", depth);
            if self.chance(0.4) {
                let p = *self.pick(PREPS);
                let case_id = b.push(p, p, "ADP", "", 0, "case");
                let obl = self.np(b, verb, "obl", 0);
                b.set_head(case_id, obl);
            }
            verb
        }
    }

    fn sentence(&mut self, sent_id: &str) -> Sentence {
        let mut b = Builder::new();
        let root = match self.rng.gen_range(0..3) {
            0 => {
                // NP stated that CLAUSE .
                let (form, lemma) = *self.pick(SAY);
                let subj = self.np(&mut b, 0, "nsubj", 1);
                let verb = b.push(
                    form,
                    lemma,
                    "VERB",
                    "Mood=Ind|Tense=Past|VerbForm=Fin",
                    0,
                    "root",
                );
                b.set_head(subj, verb);
                let that = b.push("that", "that", "SCONJ", "", 0, "mark");
                let inner = self.clause(&mut b, verb, "ccomp", 1);
                b.set_head(that, inner);
                verb
            }
            1 => {
                // Although CLAUSE , CLAUSE .
                let mark = b.push("although", "although", "SCONJ", "", 0, "mark");
                let adv = self.clause(&mut b, 0, "advcl", 1);
                b.set_head(mark, adv);
                b.push(",", ",", "PUNCT", "", adv, "punct");
                let main = self.clause(&mut b, 0, "root", 1);
                b.set_head(adv, main);
                main
            }
            _ => self.clause(&mut b, 0, "root", 2),
        };
        b.push(".", ".", "PUNCT", "", root, "punct");
        b.finish(sent_id)
    }
}

fn plural_of(n: &str) -> String {
    if let Some(stem) = n.strip_suffix("sis") {
        format!("{stem}ses")
    } else if let Some(stem) = n.strip_suffix('y') {
        format!("{stem}ies")
    } else if n.ends_with('s') {
        format!("{n}es")
    } else {
        format!("{n}s")
    }
}

/// `n` synthetic newswire-like sentences, reproducible from `seed`.
pub fn written_treebank(n: usize, seed: u64) -> Treebank {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let sentences = (0..n)
        .map(|i| g.sentence(&format!("wsj-{seed}-{:04}", i + 1)))
        .collect();
    Treebank::new(sentences)
}
