//! Synthetic child-directed and child speech with gold UD trees.
//!
//! Short utterances dominated by questions, imperatives, vocatives,
//! discourse particles and fragments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cait::conllu::{Sentence, SpeakerRole, Treebank};

use crate::build::Builder;

struct Verb {
    base: &'static str,
    s3: &'static str,
    past: &'static str,
    ing: &'static str,
}

const fn v(base: &'static str, s3: &'static str, past: &'static str, ing: &'static str) -> Verb {
    Verb {
        base,
        s3,
        past,
        ing,
    }
}

const TRANSITIVE: &[Verb] = &[
    v("want", "wants", "wanted", "wanting"),
    v("like", "likes", "liked", "liking"),
    v("see", "sees", "saw", "seeing"),
    v("find", "finds", "found", "finding"),
    v("eat", "eats", "ate", "eating"),
    v("hold", "holds", "held", "holding"),
    v("push", "pushes", "pushed", "pushing"),
    v("throw", "throws", "threw", "throwing"),
    v("drink", "drinks", "drank", "drinking"),
    v("get", "gets", "got", "getting"),
    v("read", "reads", "read", "reading"),
    v("take", "takes", "took", "taking"),
];

const INTRANSITIVE: &[Verb] = &[
    v("sleep", "sleeps", "slept", "sleeping"),
    v("jump", "jumps", "jumped", "jumping"),
    v("fall", "falls", "fell", "falling"),
    v("run", "runs", "ran", "running"),
    v("cry", "cries", "cried", "crying"),
    v("sit", "sits", "sat", "sitting"),
    v("swim", "swims", "swam", "swimming"),
    v("play", "plays", "played", "playing"),
];

const NOUNS: &[&str] = &[
    "ball", "dog", "cat", "book", "car", "juice", "teddy", "train", "duck", "spoon", "cup", "bus",
    "apple", "banana", "box", "hat", "sock", "tower", "bottle", "biscuit",
];

const ADJS: &[&str] = &[
    "big", "little", "red", "nice", "hot", "wet", "dirty", "good", "yummy", "tired", "silly",
];

const NAMES: &[&str] = &["Thomas", "Mummy", "Daddy", "Anna", "Lily", "Ben"];
const ENDEARMENTS: &[&str] = &["sweetheart", "darling", "love"];
const DISCOURSE: &[&str] = &["oh", "okay", "look", "well", "yes", "no", "ooh"];
const LOCATIVES: &[&str] = &["here", "there", "up", "down", "away", "outside"];

#[derive(Clone, Copy)]
struct Pron {
    form: &'static str,
    lemma: &'static str,
    person: u8,
    plural: bool,
}

const SUBJECTS: &[Pron] = &[
    Pron {
        form: "I",
        lemma: "I",
        person: 1,
        plural: false,
    },
    Pron {
        form: "you",
        lemma: "you",
        person: 2,
        plural: false,
    },
    Pron {
        form: "we",
        lemma: "we",
        person: 1,
        plural: true,
    },
    Pron {
        form: "he",
        lemma: "he",
        person: 3,
        plural: false,
    },
    Pron {
        form: "she",
        lemma: "she",
        person: 3,
        plural: false,
    },
    Pron {
        form: "it",
        lemma: "it",
        person: 3,
        plural: false,
    },
    Pron {
        form: "they",
        lemma: "they",
        person: 3,
        plural: true,
    },
];

fn pron_feats(p: Pron) -> String {
    format!(
        "Case=Nom|Number={}|Person={}|PronType=Prs",
        if p.plural { "Plur" } else { "Sing" },
        p.person
    )
}

fn third_singular(p: Pron) -> bool {
    p.person == 3 && !p.plural
}

fn be_form(p: Pron) -> (&'static str, &'static str) {
    match (p.person, p.plural) {
        (1, false) => (
            "'m",
            "Mood=Ind|Number=Sing|Person=1|Tense=Pres|VerbForm=Fin",
        ),
        (3, false) => (
            "'s",
            "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin",
        ),
        _ => ("'re", "Mood=Ind|Tense=Pres|VerbForm=Fin"),
    }
}

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

    /// Determiner or possessive pronoun before a noun at `head`.
    fn determiner(&mut self, b: &mut Builder, head: usize) {
        match self.rng.gen_range(0..5) {
            0 => b.push(
                "your",
                "you",
                "PRON",
                "Number=Sing|Person=2|Poss=Yes|PronType=Prs",
                head,
                "nmod:poss",
            ),
            1 => b.push(
                "my",
                "my",
                "PRON",
                "Number=Sing|Person=1|Poss=Yes|PronType=Prs",
                head,
                "nmod:poss",
            ),
            2 => b.push("a", "a", "DET", "Definite=Ind|PronType=Art", head, "det"),
            3 => b.push(
                "this",
                "this",
                "DET",
                "Number=Sing|PronType=Dem",
                head,
                "det",
            ),
            _ => b.push(
                "the",
                "the",
                "DET",
                "Definite=Def|PronType=Art",
                head,
                "det",
            ),
        };
    }

    /// `(det) (adj) noun` attached to `head` as `rel`; returns the noun id.
    fn noun_phrase(&mut self, b: &mut Builder, head: usize, rel: &str, adj_p: f64) -> usize {
        let start = b.next_id();
        let with_adj = self.chance(adj_p);
        let noun_id = start + 1 + usize::from(with_adj);
        self.determiner(b, noun_id);
        if with_adj {
            let a = *self.pick(ADJS);
            b.push(a, a, "ADJ", "Degree=Pos", noun_id, "amod");
        }
        let n = *self.pick(NOUNS);
        b.push(n, n, "NOUN", "Number=Sing", head, rel)
    }

    fn trailing_vocative(&mut self, b: &mut Builder, head: usize) {
        if self.chance(0.2) {
            b.push(",", ",", "PUNCT", "", b.next_id() + 1, "punct");
            let name = if self.chance(0.7) {
                *self.pick(NAMES)
            } else {
                *self.pick(ENDEARMENTS)
            };
            let upos = if name.chars().next().is_some_and(char::is_uppercase) {
                "PROPN"
            } else {
                "NOUN"
            };
            b.push(name, name, upos, "Number=Sing", head, "vocative");
        }
    }

    fn punct(&mut self, b: &mut Builder, head: usize, question: bool) {
        let p = if question {
            "?"
        } else if self.chance(0.15) {
            "!"
        } else {
            "."
        };
        b.push(p, p, "PUNCT", "", head, "punct");
    }

    /// `(disc) SUBJ VERB (NP) (LOC) .`
    fn declarative(&mut self, b: &mut Builder) {
        let transitive = self.chance(0.6);
        let subj = *self.pick(SUBJECTS);
        let verb = if transitive {
            self.pick(TRANSITIVE)
        } else {
            self.pick(INTRANSITIVE)
        };
        let past = self.chance(0.5);
        let disc_len = self.peek_discourse();
        let verb_id = disc_len + 2;
        self.emit_discourse(b, disc_len, verb_id);
        b.push(
            subj.form,
            subj.lemma,
            "PRON",
            &pron_feats(subj),
            verb_id,
            "nsubj",
        );
        let (form, feats) = if past {
            (verb.past, "Mood=Ind|Tense=Past|VerbForm=Fin".to_string())
        } else if third_singular(subj) {
            (
                verb.s3,
                "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin".to_string(),
            )
        } else {
            (verb.base, "Mood=Ind|Tense=Pres|VerbForm=Fin".to_string())
        };
        b.push(form, verb.base, "VERB", &feats, 0, "root");
        if transitive {
            self.noun_phrase(b, verb_id, "obj", 0.3);
        } else if self.chance(0.5) {
            let l = *self.pick(LOCATIVES);
            b.push(l, l, "ADV", "", verb_id, "advmod");
        }
        self.trailing_vocative(b, verb_id);
        self.punct(b, verb_id, false);
    }

    /// Decide the length of a leading discourse prefix (0, 1 or 2 tokens).
    fn peek_discourse(&mut self) -> usize {
        if self.chance(0.25) {
            if self.chance(0.5) {
                2
            } else {
                1
            }
        } else {
            0
        }
    }

    fn emit_discourse(&mut self, b: &mut Builder, len: usize, head: usize) {
        if len == 0 {
            return;
        }
        let d = *self.pick(DISCOURSE);
        let id = b.push(d, d, "INTJ", "", head, "discourse");
        if len == 2 {
            b.push(",", ",", "PUNCT", "", id, "punct");
        }
    }

    /// `SUBJ be ADJ .` or `it 's a NOUN .`
    fn copula(&mut self, b: &mut Builder) {
        if self.chance(0.5) {
            let subj = *self.pick(SUBJECTS);
            let (be, feats) = be_form(subj);
            b.push(subj.form, subj.lemma, "PRON", &pron_feats(subj), 3, "nsubj");
            b.push(be, "be", "AUX", feats, 3, "cop");
            let a = *self.pick(ADJS);
            b.push(a, a, "ADJ", "Degree=Pos", 0, "root");
            self.trailing_vocative(b, 3);
            self.punct(b, 3, false);
        } else {
            let (s, feats) = if self.chance(0.5) {
                (
                    "it",
                    "Case=Nom|Gender=Neut|Number=Sing|Person=3|PronType=Prs",
                )
            } else {
                ("that", "Number=Sing|PronType=Dem")
            };
            let with_adj = self.chance(0.3);
            let noun_id = 4 + usize::from(with_adj);
            b.push(s, s, "PRON", feats, noun_id, "nsubj");
            b.push(
                "'s",
                "be",
                "AUX",
                "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin",
                noun_id,
                "cop",
            );
            self.determiner(b, noun_id);
            if with_adj {
                let a = *self.pick(ADJS);
                b.push(a, a, "ADJ", "Degree=Pos", noun_id, "amod");
            }
            let n = *self.pick(NOUNS);
            b.push(n, n, "NOUN", "Number=Sing", 0, "root");
            self.punct(b, noun_id, false);
        }
    }

    /// `do you want NP ?`, `can you see NP ?`, `are you ADJ ?`, `is it NP ?`
    fn yes_no(&mut self, b: &mut Builder) {
        match self.rng.gen_range(0..3) {
            0 => {
                let (aux, lemma) = *self.pick(&[
                    ("do", "do"),
                    ("can", "can"),
                    ("did", "do"),
                    ("will", "will"),
                ]);
                let verb = self.pick(TRANSITIVE);
                b.push(aux, lemma, "AUX", "", 3, "aux");
                b.push(
                    "you",
                    "you",
                    "PRON",
                    "Case=Nom|Person=2|PronType=Prs",
                    3,
                    "nsubj",
                );
                b.push(verb.base, verb.base, "VERB", "VerbForm=Inf", 0, "root");
                self.noun_phrase(b, 3, "obj", 0.2);
                self.trailing_vocative(b, 3);
                self.punct(b, 3, true);
            }
            1 => {
                b.push(
                    "are",
                    "be",
                    "AUX",
                    "Mood=Ind|Tense=Pres|VerbForm=Fin",
                    3,
                    "cop",
                );
                b.push(
                    "you",
                    "you",
                    "PRON",
                    "Case=Nom|Person=2|PronType=Prs",
                    3,
                    "nsubj",
                );
                let a = *self.pick(ADJS);
                b.push(a, a, "ADJ", "Degree=Pos", 0, "root");
                self.trailing_vocative(b, 3);
                self.punct(b, 3, true);
            }
            _ => {
                b.push(
                    "is",
                    "be",
                    "AUX",
                    "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin",
                    4,
                    "cop",
                );
                b.push(
                    "it",
                    "it",
                    "PRON",
                    "Case=Nom|Gender=Neut|Number=Sing|Person=3|PronType=Prs",
                    4,
                    "nsubj",
                );
                b.push("a", "a", "DET", "Definite=Ind|PronType=Art", 4, "det");
                let n = *self.pick(NOUNS);
                b.push(n, n, "NOUN", "Number=Sing", 0, "root");
                self.punct(b, 4, true);
            }
        }
    }

    fn wh(&mut self, b: &mut Builder) {
        match self.rng.gen_range(0..4) {
            0 => {
                b.push("what", "what", "PRON", "PronType=Int", 0, "root");
                b.push(
                    "'s",
                    "be",
                    "AUX",
                    "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin",
                    1,
                    "cop",
                );
                b.push(
                    "that",
                    "that",
                    "PRON",
                    "Number=Sing|PronType=Dem",
                    1,
                    "nsubj",
                );
                self.punct(b, 1, true);
            }
            1 => {
                b.push("where", "where", "ADV", "PronType=Int", 0, "root");
                b.push(
                    "'s",
                    "be",
                    "AUX",
                    "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin",
                    1,
                    "cop",
                );
                self.noun_phrase(b, 1, "nsubj", 0.2);
                self.trailing_vocative(b, 1);
                self.punct(b, 1, true);
            }
            2 => {
                let verb = self.pick(TRANSITIVE);
                b.push("what", "what", "PRON", "PronType=Int", 4, "obj");
                b.push(
                    "do",
                    "do",
                    "AUX",
                    "Mood=Ind|Tense=Pres|VerbForm=Fin",
                    4,
                    "aux",
                );
                b.push(
                    "you",
                    "you",
                    "PRON",
                    "Case=Nom|Person=2|PronType=Prs",
                    4,
                    "nsubj",
                );
                b.push(verb.base, verb.base, "VERB", "VerbForm=Inf", 0, "root");
                self.trailing_vocative(b, 4);
                self.punct(b, 4, true);
            }
            _ => {
                let verb = self.pick(TRANSITIVE);
                b.push("who", "who", "PRON", "PronType=Int", 2, "nsubj");
                b.push(
                    verb.past,
                    verb.base,
                    "VERB",
                    "Mood=Ind|Tense=Past|VerbForm=Fin",
                    0,
                    "root",
                );
                self.noun_phrase(b, 2, "obj", 0.2);
                self.punct(b, 2, true);
            }
        }
    }

    fn imperative(&mut self, b: &mut Builder) {
        match self.rng.gen_range(0..4) {
            0 => {
                let with_voc = self.chance(0.3);
                let verb_id = if with_voc { 3 } else { 1 };
                if with_voc {
                    let name = *self.pick(NAMES);
                    b.push(name, name, "PROPN", "Number=Sing", verb_id, "vocative");
                    b.push(",", ",", "PUNCT", "", 1, "punct");
                }
                let verb = self.pick(TRANSITIVE);
                b.push(
                    verb.base,
                    verb.base,
                    "VERB",
                    "Mood=Imp|VerbForm=Fin",
                    0,
                    "root",
                );
                if self.chance(0.4) {
                    b.push(
                        "it",
                        "it",
                        "PRON",
                        "Case=Acc|Gender=Neut|Number=Sing|Person=3|PronType=Prs",
                        verb_id,
                        "obj",
                    );
                } else {
                    self.noun_phrase(b, verb_id, "obj", 0.3);
                }
                if self.chance(0.3) {
                    let l = *self.pick(LOCATIVES);
                    b.push(l, l, "ADV", "", verb_id, "advmod");
                }
                self.punct(b, verb_id, false);
            }
            1 => {
                let verb = self.pick(INTRANSITIVE);
                b.push("let", "let", "VERB", "Mood=Imp|VerbForm=Fin", 0, "root");
                b.push(
                    "'s",
                    "we",
                    "PRON",
                    "Case=Acc|Number=Plur|Person=1|PronType=Prs",
                    1,
                    "obj",
                );
                b.push(verb.base, verb.base, "VERB", "VerbForm=Inf", 1, "xcomp");
                self.punct(b, 1, false);
            }
            2 => {
                let verb = self.pick(TRANSITIVE);
                b.push("do", "do", "AUX", "Mood=Imp|VerbForm=Fin", 3, "aux");
                b.push("n't", "not", "PART", "Polarity=Neg", 3, "advmod");
                b.push(verb.base, verb.base, "VERB", "VerbForm=Inf", 0, "root");
                b.push("that", "that", "PRON", "Number=Sing|PronType=Dem", 3, "obj");
                self.trailing_vocative(b, 3);
                self.punct(b, 3, false);
            }
            _ => {
                b.push("look", "look", "VERB", "Mood=Imp|VerbForm=Fin", 0, "root");
                b.push("at", "at", "ADP", "", 0, "case");
                let noun = self.noun_phrase(b, 1, "obl", 0.3);
                b.set_head(2, noun);
                self.punct(b, 1, false);
            }
        }
    }

    fn fragment(&mut self, b: &mut Builder) {
        match self.rng.gen_range(0..4) {
            0 => {
                let disc = self.chance(0.3);
                if disc {
                    let d = *self.pick(DISCOURSE);
                    b.push(d, d, "INTJ", "", 0, "discourse");
                }
                let noun = self.noun_phrase(b, 0, "root", 0.4);
                if disc {
                    b.set_head(1, noun);
                }
                let q = self.chance(0.3);
                self.punct(b, noun, q);
            }
            1 => {
                b.push("more", "more", "ADJ", "Degree=Cmp", 2, "amod");
                let n = *self.pick(NOUNS);
                b.push(n, n, "NOUN", "Number=Sing", 0, "root");
                let q = self.chance(0.5);
                self.punct(b, 2, q);
            }
            2 => {
                let name = if self.chance(0.7) {
                    *self.pick(NAMES)
                } else {
                    *self.pick(ENDEARMENTS)
                };
                let upos = if name.chars().next().is_some_and(char::is_uppercase) {
                    "PROPN"
                } else {
                    "NOUN"
                };
                b.push(name, name, upos, "Number=Sing", 0, "root");
                let q = self.chance(0.3);
                self.punct(b, 1, q);
            }
            _ => {
                let l = *self.pick(LOCATIVES);
                b.push(l, l, "ADV", "", 0, "root");
                self.punct(b, 1, false);
            }
        }
    }

    fn progressive(&mut self, b: &mut Builder) {
        let subj = *self.pick(SUBJECTS);
        let (be, feats) = be_form(subj);
        let transitive = self.chance(0.5);
        let verb = if transitive {
            self.pick(TRANSITIVE)
        } else {
            self.pick(INTRANSITIVE)
        };
        b.push(subj.form, subj.lemma, "PRON", &pron_feats(subj), 3, "nsubj");
        b.push(be, "be", "AUX", feats, 3, "aux");
        b.push(
            verb.ing,
            verb.base,
            "VERB",
            "Tense=Pres|VerbForm=Part",
            0,
            "root",
        );
        if transitive {
            self.noun_phrase(b, 3, "obj", 0.2);
        }
        self.punct(b, 3, false);
    }

    fn tag_question(&mut self, b: &mut Builder) {
        b.push(
            "that",
            "that",
            "PRON",
            "Number=Sing|PronType=Dem",
            3,
            "nsubj",
        );
        b.push(
            "'s",
            "be",
            "AUX",
            "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin",
            3,
            "cop",
        );
        let a = *self.pick(ADJS);
        b.push(a, a, "ADJ", "Degree=Pos", 0, "root");
        b.push(
            "is",
            "be",
            "AUX",
            "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin",
            3,
            "parataxis",
        );
        b.push("n't", "not", "PART", "Polarity=Neg", 4, "advmod");
        b.push(
            "it",
            "it",
            "PRON",
            "Case=Nom|Gender=Neut|Number=Sing|Person=3|PronType=Prs",
            4,
            "nsubj",
        );
        self.punct(b, 3, true);
    }

    fn complex(&mut self, b: &mut Builder) {
        if self.chance(0.5) {
            // SUBJ want to VERB NP .
            let subj = *self.pick(SUBJECTS);
            let verb = self.pick(TRANSITIVE);
            let want = if third_singular(subj) {
                "wants"
            } else {
                "want"
            };
            b.push(subj.form, subj.lemma, "PRON", &pron_feats(subj), 2, "nsubj");
            b.push(
                want,
                "want",
                "VERB",
                "Mood=Ind|Tense=Pres|VerbForm=Fin",
                0,
                "root",
            );
            b.push("to", "to", "PART", "", 4, "mark");
            b.push(verb.base, verb.base, "VERB", "VerbForm=Inf", 2, "xcomp");
            self.noun_phrase(b, 4, "obj", 0.2);
            self.punct(b, 2, false);
        } else {
            // I think SUBJ VERB NP .
            let subj = *self.pick(SUBJECTS);
            let verb = self.pick(TRANSITIVE);
            b.push(
                "I",
                "I",
                "PRON",
                "Case=Nom|Number=Sing|Person=1|PronType=Prs",
                2,
                "nsubj",
            );
            b.push(
                "think",
                "think",
                "VERB",
                "Mood=Ind|Tense=Pres|VerbForm=Fin",
                0,
                "root",
            );
            b.push(subj.form, subj.lemma, "PRON", &pron_feats(subj), 4, "nsubj");
            b.push(
                verb.past,
                verb.base,
                "VERB",
                "Mood=Ind|Tense=Past|VerbForm=Fin",
                2,
                "ccomp",
            );
            self.noun_phrase(b, 4, "obj", 0.2);
            self.punct(b, 2, false);
        }
    }

    fn utterance(&mut self, sent_id: &str) -> Sentence {
        let mut b = Builder::new();
        match self.rng.gen_range(0..100) {
            0..=17 => self.declarative(&mut b),
            18..=29 => self.copula(&mut b),
            30..=41 => self.yes_no(&mut b),
            42..=53 => self.wh(&mut b),
            54..=67 => self.imperative(&mut b),
            68..=81 => self.fragment(&mut b),
            82..=88 => self.progressive(&mut b),
            89..=92 => self.tag_question(&mut b),
            _ => self.complex(&mut b),
        }
        let mut s = b.finish(sent_id);
        let child = self.chance(0.35);
        if child {
            s.set_speaker("CHI", SpeakerRole::Cs);
        } else {
            s.set_speaker("MOT", SpeakerRole::Cds);
        }
        let age = self.rng.gen_range(18.0..48.0f64);
        s.set_age_months((age * 100.0).round() / 100.0);
        s
    }
}

/// `n` synthetic child-adult utterances, reproducible from `seed`.
pub fn cds_treebank(n: usize, seed: u64) -> Treebank {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let sentences = (0..n)
        .map(|i| g.utterance(&format!("cds-{seed}-{:04}", i + 1)))
        .collect();
    Treebank::new(sentences)
}
