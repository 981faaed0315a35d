//! Greedy arc-eager parser with a static oracle.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::perceptron::{best_allowed, AveragedPerceptron};
use super::{BaselineError, TrainReport};
use crate::conllu::{Sentence, Treebank};

/// Version of the feature templates below; stored in model files.
pub const PARSER_TEMPLATES: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Transition {
    Shift,
    Reduce,
    Left(String),
    Right(String),
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transition::Shift => f.write_str("SHIFT"),
            Transition::Reduce => f.write_str("REDUCE"),
            Transition::Left(l) => write!(f, "LEFT:{l}"),
            Transition::Right(l) => write!(f, "RIGHT:{l}"),
        }
    }
}

impl FromStr for Transition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "SHIFT" => Ok(Transition::Shift),
            "REDUCE" => Ok(Transition::Reduce),
            _ => {
                if let Some(l) = s.strip_prefix("LEFT:") {
                    Ok(Transition::Left(l.to_string()))
                } else if let Some(l) = s.strip_prefix("RIGHT:") {
                    Ok(Transition::Right(l.to_string()))
                } else {
                    Err(format!("unknown transition {s:?}"))
                }
            }
        }
    }
}

/// Parser state. Token ids are 1-based. There is no artificial root on
/// the stack: the token left without a head at the end is the root.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub stack: Vec<usize>,
    /// Next buffer token; the buffer is empty once this exceeds `n`.
    pub next: usize,
    pub n: usize,
    pub heads: Vec<Option<usize>>,
    pub deprels: Vec<String>,
}

impl Configuration {
    pub fn new(n: usize) -> Self {
        Configuration {
            stack: Vec::new(),
            next: 1,
            n,
            heads: vec![None; n + 1],
            deprels: vec![String::new(); n + 1],
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.next > self.n
    }

    fn s0(&self) -> Option<usize> {
        self.stack.last().copied()
    }

    pub fn is_legal(&self, t: &Transition) -> bool {
        if self.is_terminal() {
            return false;
        }
        match (t, self.s0()) {
            (Transition::Shift, _) => true,
            (_, None) => false,
            (Transition::Reduce, Some(s0)) => self.heads[s0].is_some(),
            (Transition::Left(l), Some(s0)) => l != "root" && self.heads[s0].is_none(),
            (Transition::Right(l), Some(_)) => l != "root",
        }
    }

    pub fn apply(&mut self, t: &Transition) {
        debug_assert!(self.is_legal(t), "illegal {t}");
        let s0 = self.s0().unwrap_or(0);
        let b0 = self.next;
        match t {
            Transition::Shift => {
                self.stack.push(b0);
                self.next += 1;
            }
            Transition::Reduce => {
                self.stack.pop();
            }
            Transition::Left(l) => {
                self.heads[s0] = Some(b0);
                self.deprels[s0] = l.clone();
                self.stack.pop();
            }
            Transition::Right(l) => {
                self.heads[b0] = Some(s0);
                self.deprels[b0] = l.clone();
                self.stack.push(b0);
                self.next += 1;
            }
        }
    }

    fn leftmost_child(&self, id: usize) -> Option<usize> {
        (1..id).find(|&d| self.heads[d] == Some(id))
    }

    fn rightmost_child(&self, id: usize) -> Option<usize> {
        (id + 1..=self.n).rev().find(|&d| self.heads[d] == Some(id))
    }
}

/// True if no two arcs cross, counting the arc from the artificial root.
pub fn is_projective(heads: &[usize]) -> bool {
    let arcs: Vec<(usize, usize)> = heads
        .iter()
        .enumerate()
        .map(|(i, &h)| {
            let d = i + 1;
            (h.min(d), h.max(d))
        })
        .collect();
    for (i, &(a, b)) in arcs.iter().enumerate() {
        for &(c, d) in &arcs[i + 1..] {
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                return false;
            }
        }
    }
    true
}

/// Next transition of the canonical derivation of `gold` from `config`.
pub fn static_oracle(gold: &Sentence, config: &Configuration) -> Result<Transition, BaselineError> {
    let head = |id: usize| gold.tokens[id - 1].head;
    let rel = |id: usize| gold.tokens[id - 1].deprel.clone();
    let s0 = config.s0();
    let b0 = config.next;
    let non_projective = || BaselineError::NonProjective {
        sent_id: gold.sent_id().to_string(),
    };
    if config.is_terminal() {
        return Err(non_projective());
    }
    let Some(s0) = s0 else {
        return Ok(Transition::Shift);
    };
    if head(s0) == b0 {
        return Ok(Transition::Left(rel(s0)));
    }
    if head(b0) == s0 {
        return Ok(Transition::Right(rel(b0)));
    }
    let deeper = &config.stack[..config.stack.len() - 1];
    if deeper.iter().any(|&k| head(b0) == k || head(k) == b0) {
        if config.heads[s0].is_some() {
            return Ok(Transition::Reduce);
        }
        return Err(non_projective());
    }
    Ok(Transition::Shift)
}

/// The full oracle derivation of a projective tree. The root is the
/// token left without a head.
pub fn oracle_sequence(gold: &Sentence) -> Result<Vec<Transition>, BaselineError> {
    let heads: Vec<usize> = gold.tokens.iter().map(|t| t.head).collect();
    if !is_projective(&heads) {
        return Err(BaselineError::NonProjective {
            sent_id: gold.sent_id().to_string(),
        });
    }
    let mut config = Configuration::new(gold.len());
    let mut out = Vec::new();
    while !config.is_terminal() {
        let t = static_oracle(gold, &config)?;
        config.apply(&t);
        out.push(t);
    }
    Ok(out)
}

fn bucket(distance: usize) -> &'static str {
    match distance {
        0 => "0",
        1 => "1",
        2 => "2",
        3 => "3",
        4..=6 => "4-6",
        _ => "7+",
    }
}

/// Feature strings for a configuration.
pub fn features(sentence: &Sentence, config: &Configuration) -> Vec<String> {
    let word = |id: Option<usize>| -> String {
        match id {
            None => "<none>".into(),
            Some(i) => sentence.tokens[i - 1].form.to_lowercase(),
        }
    };
    let tag = |id: Option<usize>| -> String {
        match id {
            None => "<none>".into(),
            Some(i) => sentence.tokens[i - 1].upos.clone(),
        }
    };
    let rel = |id: Option<usize>| -> String {
        match id {
            Some(i) if !config.deprels[i].is_empty() => config.deprels[i].clone(),
            _ => "<none>".into(),
        }
    };
    let depth = config.stack.len();
    let s0 = config.stack.last().copied();
    let s1 = (depth >= 2).then(|| config.stack[depth - 2]);
    let b0 = (config.next <= config.n).then_some(config.next);
    let b1 = (config.next < config.n).then_some(config.next + 1);

    let (s0w, s0p, s1w, s1p) = (word(s0), tag(s0), word(s1), tag(s1));
    let (b0w, b0p, b1w, b1p) = (word(b0), tag(b0), word(b1), tag(b1));
    let s0_lc = rel(s0.and_then(|i| config.leftmost_child(i)));
    let s0_rc = rel(s0.and_then(|i| config.rightmost_child(i)));
    let b0_lc = rel(b0.and_then(|i| config.leftmost_child(i)));
    let s0_rel = rel(s0);
    let dist = match (s0, b0) {
        (Some(s), Some(b)) => bucket(b - s),
        _ => "na",
    };

    vec![
        "bias".to_string(),
        format!("s0w={s0w}"),
        format!("s0p={s0p}"),
        format!("s0wp={s0w}/{s0p}"),
        format!("s1w={s1w}"),
        format!("s1p={s1p}"),
        format!("b0w={b0w}"),
        format!("b0p={b0p}"),
        format!("b0wp={b0w}/{b0p}"),
        format!("b1w={b1w}"),
        format!("b1p={b1p}"),
        format!("s0w,b0w={s0w}/{b0w}"),
        format!("s0p,b0p={s0p}/{b0p}"),
        format!("s0w,b0p={s0w}/{b0p}"),
        format!("s0p,b0w={s0p}/{b0w}"),
        format!("s0p,b0p,b1p={s0p}/{b0p}/{b1p}"),
        format!("s1p,s0p,b0p={s1p}/{s0p}/{b0p}"),
        format!("s0rel={s0_rel}"),
        format!("s0p,s0rel={s0p}/{s0_rel}"),
        format!("s0lc={s0_lc}"),
        format!("s0rc={s0_rc}"),
        format!("b0lc={b0_lc}"),
        format!("s0p,s0lc,b0p={s0p}/{s0_lc}/{b0p}"),
        format!("s0p,s0rc,b0p={s0p}/{s0_rc}/{b0p}"),
        format!("b0p,b0lc={b0p}/{b0_lc}"),
        format!("dist={dist}"),
        format!("dist,s0p,b0p={dist}/{s0p}/{b0p}"),
        format!("dist,s0w,b0w={dist}/{s0w}/{b0w}"),
    ]
}

/// A trained, finalized parser.
#[derive(Clone, Debug, PartialEq)]
pub struct ParserModel {
    pub(crate) transitions: Vec<Transition>,
    pub(crate) perceptron: AveragedPerceptron,
    pub(crate) templates: u32,
}

impl ParserModel {
    /// A model with no weights. Its greedy parses are still valid trees.
    pub fn zero() -> Self {
        let transitions = base_transitions().into_iter().collect::<Vec<_>>();
        let mut perceptron = AveragedPerceptron::new(transitions.len());
        perceptron.finalize();
        ParserModel {
            transitions,
            perceptron,
            templates: PARSER_TEMPLATES,
        }
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Dependency labels the model can emit.
    pub fn labels(&self) -> BTreeSet<&str> {
        self.transitions
            .iter()
            .filter_map(|t| match t {
                Transition::Left(l) | Transition::Right(l) => Some(l.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn perceptron(&self) -> &AveragedPerceptron {
        &self.perceptron
    }
}

fn base_transitions() -> BTreeSet<Transition> {
    BTreeSet::from([Transition::Shift, Transition::Reduce])
}

fn best_legal(
    perceptron: &AveragedPerceptron,
    transitions: &[Transition],
    config: &Configuration,
    feats: &[String],
) -> usize {
    let scores = perceptron.scores(feats);
    best_allowed(
        &scores,
        (0..transitions.len()).filter(|&i| config.is_legal(&transitions[i])),
    )
    .expect("SHIFT is legal whenever the buffer is non-empty")
}

/// Train on the projective sentences of `treebank`, shuffling each epoch
/// with a generator seeded from `seed`.
pub fn train_parser(
    treebank: &Treebank,
    epochs: usize,
    seed: u64,
) -> Result<(ParserModel, TrainReport), BaselineError> {
    if treebank.is_empty() {
        return Err(BaselineError::EmptyTreebank);
    }
    let mut usable: Vec<(&Sentence, Vec<Transition>)> = Vec::new();
    let mut skipped = 0;
    for s in &treebank.sentences {
        if s.is_empty() {
            continue;
        }
        match oracle_sequence(s) {
            Ok(seq) => usable.push((s, seq)),
            Err(_) => skipped += 1,
        }
    }
    if usable.is_empty() {
        return Err(BaselineError::AllNonProjective { skipped });
    }

    let mut set = base_transitions();
    for (_, seq) in &usable {
        set.extend(seq.iter().cloned());
    }
    let transitions: Vec<Transition> = set.into_iter().collect();
    let index = |t: &Transition| transitions.binary_search(t).expect("collected above");
    let mut perceptron = AveragedPerceptron::new(transitions.len());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..usable.len()).collect();
    for _ in 0..epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let (sentence, seq) = &usable[i];
            let mut config = Configuration::new(sentence.len());
            for gold in seq {
                let feats = features(sentence, &config);
                let guess = best_legal(&perceptron, &transitions, &config, &feats);
                perceptron.update(index(gold), guess, &feats);
                config.apply(gold);
            }
        }
    }
    perceptron.finalize();
    Ok((
        ParserModel {
            transitions,
            perceptron,
            templates: PARSER_TEMPLATES,
        },
        TrainReport {
            n_sentences: usable.len(),
            n_skipped_nonprojective: skipped,
            epochs,
        },
    ))
}

/// Greedy parse. The first token left without a head becomes the root;
/// any other headless tokens attach to it as `dep`.
pub fn parse(model: &ParserModel, sentence: &Sentence) -> Result<Sentence, BaselineError> {
    if sentence.is_empty() {
        return Err(BaselineError::EmptySentence {
            sent_id: sentence.sent_id().to_string(),
        });
    }
    let n = sentence.len();
    let mut config = Configuration::new(n);
    while !config.is_terminal() {
        let feats = features(sentence, &config);
        let best = best_legal(&model.perceptron, &model.transitions, &config, &feats);
        config.apply(&model.transitions[best]);
    }

    let root = (1..=n)
        .find(|&i| config.heads[i].is_none())
        .expect("an arc-eager forest has a headless token");
    config.heads[root] = Some(0);
    config.deprels[root] = "root".into();
    for i in 1..=n {
        if config.heads[i].is_none() {
            config.heads[i] = Some(root);
            config.deprels[i] = "dep".into();
        }
    }

    let mut out = sentence.clone();
    for (i, t) in out.tokens.iter_mut().enumerate() {
        t.head = config.heads[i + 1].expect("every token attached");
        t.deprel = std::mem::take(&mut config.deprels[i + 1]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::{validate, Token};

    fn tree(forms: &[&str], heads: &[usize], rels: &[&str]) -> Sentence {
        let tokens = forms
            .iter()
            .zip(heads)
            .zip(rels)
            .enumerate()
            .map(|(i, ((f, h), r))| Token::new(i + 1, f, *h, r).with_upos("X"))
            .collect();
        Sentence::new("t", tokens)
    }

    fn replay(gold: &Sentence) -> Vec<(usize, String)> {
        let mut config = Configuration::new(gold.len());
        for t in oracle_sequence(gold).unwrap() {
            config.apply(&t);
        }
        (1..=gold.len())
            .map(|i| match config.heads[i] {
                Some(h) => (h, config.deprels[i].clone()),
                None => (0, "root".to_string()),
            })
            .collect()
    }

    #[test]
    fn hi_dot() {
        let s = tree(&["hi", "."], &[0, 1], &["root", "punct"]);
        let seq = oracle_sequence(&s).unwrap();
        assert_eq!(seq, [Transition::Shift, Transition::Right("punct".into())]);
        assert_eq!(
            replay(&s),
            [(0, "root".to_string()), (1, "punct".to_string())]
        );
    }

    #[test]
    fn london_gold_replays() {
        let s = tree(
            &["It", "was", "in", "London", "was", "n't", "it", "?"],
            &[4, 4, 4, 0, 4, 5, 5, 4],
            &[
                "nsubj",
                "cop",
                "case",
                "root",
                "parataxis",
                "advmod",
                "nsubj",
                "punct",
            ],
        );
        let arcs = replay(&s);
        let gold: Vec<(usize, String)> = s
            .tokens
            .iter()
            .map(|t| (t.head, t.deprel.clone()))
            .collect();
        assert_eq!(arcs, gold);
    }

    #[test]
    fn crossing_arcs_rejected() {
        // 1 -> 3 and 2 -> 4 cross.
        let s = tree(
            &["a", "b", "c", "d"],
            &[3, 4, 0, 3],
            &["x", "x", "root", "x"],
        );
        assert!(!is_projective(&[3, 4, 0, 3]));
        assert!(matches!(
            oracle_sequence(&s),
            Err(BaselineError::NonProjective { .. })
        ));
    }

    #[test]
    fn zero_model_gives_valid_tree() {
        let s = tree(&["a", "b", "c"], &[0, 0, 0], &["_", "_", "_"]);
        let out = parse(&ParserModel::zero(), &s).unwrap();
        assert!(validate(&out).is_empty());
        let heads: Vec<usize> = out.tokens.iter().map(|t| t.head).collect();
        assert_eq!(heads, [0, 1, 1]);
    }

    #[test]
    fn single_token_is_root() {
        let s = tree(&["hi"], &[0], &["_"]);
        let out = parse(&ParserModel::zero(), &s).unwrap();
        assert_eq!(
            (out.tokens[0].head, out.tokens[0].deprel.as_str()),
            (0, "root")
        );
    }

    #[test]
    fn empty_sentence_is_error() {
        let s = Sentence::new("e", Vec::new());
        assert!(parse(&ParserModel::zero(), &s).is_err());
    }

    #[test]
    fn transition_names_round_trip() {
        for t in [
            Transition::Shift,
            Transition::Reduce,
            Transition::Left("nmod:poss".into()),
            Transition::Right("obj".into()),
        ] {
            assert_eq!(t.to_string().parse::<Transition>().unwrap(), t);
        }
    }
}
