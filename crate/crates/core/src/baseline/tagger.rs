//! Greedy left-to-right averaged-perceptron UPOS tagger.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::perceptron::{best_allowed, AveragedPerceptron};
use super::{BaselineError, TrainReport};
use crate::conllu::{Sentence, Treebank};

pub const TAGGER_TEMPLATES: u32 = 1;

/// Words seen at least this often with one tag in at least this share of
/// cases are tagged from the dictionary.
const DICT_MIN_FREQ: usize = 20;
const DICT_MIN_SHARE: f64 = 0.97;

#[derive(Clone, Debug, PartialEq)]
pub struct TaggerModel {
    pub(crate) tags: Vec<String>,
    pub(crate) perceptron: AveragedPerceptron,
    pub(crate) tagdict: BTreeMap<String, String>,
    pub(crate) templates: u32,
}

impl TaggerModel {
    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn tagdict(&self) -> &BTreeMap<String, String> {
        &self.tagdict
    }

    pub fn perceptron(&self) -> &AveragedPerceptron {
        &self.perceptron
    }
}

fn prefix(word: &str, n: usize) -> String {
    word.chars().take(n).collect()
}

fn suffix(word: &str, n: usize) -> String {
    let chars: Vec<char> = word.chars().collect();
    chars[chars.len().saturating_sub(n)..].iter().collect()
}

/// Features for position `i`, given the tags already predicted to its left.
pub fn tagger_features(words: &[String], i: usize, prev: &[String]) -> Vec<String> {
    let w = &words[i];
    let at = |j: isize| -> &str {
        let k = i as isize + j;
        if k < 0 {
            "<s>"
        } else {
            words.get(k as usize).map(String::as_str).unwrap_or("</s>")
        }
    };
    let t1 = if i >= 1 { prev[i - 1].as_str() } else { "<s>" };
    let t2 = if i >= 2 { prev[i - 2].as_str() } else { "<s>" };
    let mut f = vec![
        "bias".to_string(),
        format!("w={w}"),
        format!("t-1={t1}"),
        format!("t-2={t2}"),
        format!("t-1,t-2={t1}/{t2}"),
        format!("t-1,w={t1}/{w}"),
        format!("w-1={}", at(-1)),
        format!("w-2={}", at(-2)),
        format!("w+1={}", at(1)),
        format!("w+2={}", at(2)),
    ];
    for n in 1..=3 {
        f.push(format!("p{n}={}", prefix(w, n)));
        f.push(format!("s{n}={}", suffix(w, n)));
    }
    f
}

fn words_of(sentence: &Sentence) -> Vec<String> {
    sentence
        .tokens
        .iter()
        .map(|t| t.form.to_lowercase())
        .collect()
}

fn build_tagdict(treebank: &Treebank) -> BTreeMap<String, String> {
    let mut counts: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for s in &treebank.sentences {
        for t in &s.tokens {
            *counts
                .entry(t.form.to_lowercase())
                .or_default()
                .entry(t.upos.clone())
                .or_default() += 1;
        }
    }
    counts
        .into_iter()
        .filter_map(|(word, tags)| {
            let total: usize = tags.values().sum();
            let (tag, n) = tags
                .into_iter()
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))?;
            (total >= DICT_MIN_FREQ && n as f64 / total as f64 >= DICT_MIN_SHARE)
                .then_some((word, tag))
        })
        .collect()
}

fn predict(
    perceptron: &AveragedPerceptron,
    n_tags: usize,
    words: &[String],
    i: usize,
    prev: &[String],
) -> (usize, Vec<String>) {
    let feats = tagger_features(words, i, prev);
    let scores = perceptron.scores(&feats);
    let best = best_allowed(&scores, 0..n_tags).expect("at least one tag");
    (best, feats)
}

/// Train on every token's UPOS. Tokens without a UPOS (`_`) are skipped
/// as training targets but still serve as context.
pub fn train_tagger(
    treebank: &Treebank,
    epochs: usize,
    seed: u64,
) -> Result<(TaggerModel, TrainReport), BaselineError> {
    let sentences: Vec<&Sentence> = treebank
        .sentences
        .iter()
        .filter(|s| !s.is_empty())
        .collect();
    if sentences.is_empty() {
        return Err(BaselineError::EmptyTreebank);
    }
    let tags: Vec<String> = sentences
        .iter()
        .flat_map(|s| s.tokens.iter().map(|t| t.upos.clone()))
        .filter(|t| t != "_")
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if tags.is_empty() {
        return Err(BaselineError::EmptyTreebank);
    }
    let tagdict = build_tagdict(treebank);
    let mut perceptron = AveragedPerceptron::new(tags.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..sentences.len()).collect();
    for _ in 0..epochs {
        order.shuffle(&mut rng);
        for &k in &order {
            let sentence = sentences[k];
            let words = words_of(sentence);
            let mut prev: Vec<String> = Vec::with_capacity(words.len());
            for (i, token) in sentence.tokens.iter().enumerate() {
                let guess = match tagdict.get(&words[i]) {
                    Some(tag) => tag.clone(),
                    None => {
                        let (best, feats) = predict(&perceptron, tags.len(), &words, i, &prev);
                        if let Ok(truth) = tags.binary_search(&token.upos) {
                            perceptron.update(truth, best, &feats);
                        }
                        tags[best].clone()
                    }
                };
                prev.push(guess);
            }
        }
    }
    perceptron.finalize();
    Ok((
        TaggerModel {
            tags,
            perceptron,
            tagdict,
            templates: TAGGER_TEMPLATES,
        },
        TrainReport {
            n_sentences: sentences.len(),
            n_skipped_nonprojective: 0,
            epochs,
        },
    ))
}

/// Fill in UPOS for every token; nothing else changes.
pub fn tag(model: &TaggerModel, sentence: &Sentence) -> Result<Sentence, BaselineError> {
    if sentence.is_empty() {
        return Err(BaselineError::EmptySentence {
            sent_id: sentence.sent_id().to_string(),
        });
    }
    let words = words_of(sentence);
    let mut prev: Vec<String> = Vec::with_capacity(words.len());
    for i in 0..words.len() {
        let tag = match model.tagdict.get(&words[i]) {
            Some(t) => t.clone(),
            None => {
                let (best, _) = predict(&model.perceptron, model.tags.len(), &words, i, &prev);
                model.tags[best].clone()
            }
        };
        prev.push(tag);
    }
    let mut out = sentence.clone();
    for (t, tag) in out.tokens.iter_mut().zip(prev) {
        t.upos = tag;
    }
    Ok(out)
}
