//! A small trainable parser and tagger: arc-eager transitions scored by an
//! averaged perceptron, and a greedy perceptron UPOS tagger.
//!
//! Models are stored as line-based text tables:
//!
//! ```text
//! CAITB1
//! model<TAB>parser
//! templates<TAB>1
//! class<TAB>SHIFT
//! ...
//! weights
//! feature<TAB>class<TAB>weight
//! ```
//!
//! Tagger files add `tagdict<TAB>word<TAB>tag` lines before `weights`.

mod parser;
mod perceptron;
mod tagger;

use std::io::{BufRead, Write};

use thiserror::Error;

pub use parser::{
    features, is_projective, oracle_sequence, parse, static_oracle, train_parser, Configuration,
    ParserModel, Transition, PARSER_TEMPLATES,
};
pub use perceptron::{best_allowed, AveragedPerceptron};
pub use tagger::{tag, tagger_features, train_tagger, TaggerModel, TAGGER_TEMPLATES};

pub const MAGIC: &str = "CAITB1";

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("training treebank is empty")]
    EmptyTreebank,
    #[error("all {skipped} training sentences are non-projective")]
    AllNonProjective { skipped: usize },
    #[error("sentence {sent_id} is non-projective")]
    NonProjective { sent_id: String },
    #[error("sentence {sent_id} has no tokens")]
    EmptySentence { sent_id: String },
    #[error("model file line {line}: {message}")]
    ModelFormat { line: usize, message: String },
    #[error("model file holds a {found} model, expected {expected}")]
    WrongModelKind { expected: String, found: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Training summary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrainReport {
    pub n_sentences: usize,
    pub n_skipped_nonprojective: usize,
    pub epochs: usize,
}

struct ModelFile {
    kind: String,
    templates: u32,
    classes: Vec<String>,
    tagdict: Vec<(String, String)>,
    weights: Vec<(String, usize, f64)>,
}

fn write_model<W: Write>(
    mut sink: W,
    kind: &str,
    templates: u32,
    classes: &[String],
    tagdict: &[(&String, &String)],
    perceptron: &AveragedPerceptron,
) -> std::io::Result<()> {
    writeln!(sink, "{MAGIC}")?;
    writeln!(sink, "model\t{kind}")?;
    writeln!(sink, "templates\t{templates}")?;
    for c in classes {
        writeln!(sink, "class\t{c}")?;
    }
    for (w, t) in tagdict {
        writeln!(sink, "tagdict\t{w}\t{t}")?;
    }
    writeln!(sink, "weights")?;
    for (f, c, w) in perceptron.entries() {
        writeln!(sink, "{f}\t{}\t{w}", classes[c])?;
    }
    sink.flush()
}

fn read_model<R: BufRead>(source: R) -> Result<ModelFile, BaselineError> {
    let bad = |line: usize, message: &str| BaselineError::ModelFormat {
        line,
        message: message.to_string(),
    };
    let mut lines = source.lines().enumerate();
    match lines.next() {
        Some((_, Ok(l))) if l == MAGIC => {}
        Some((_, Err(e))) => return Err(e.into()),
        _ => return Err(bad(1, "missing CAITB1 header")),
    }
    let mut file = ModelFile {
        kind: String::new(),
        templates: 0,
        classes: Vec::new(),
        tagdict: Vec::new(),
        weights: Vec::new(),
    };
    let mut in_weights = false;
    for (idx, line) in lines {
        let line = line?;
        let n = idx + 1;
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if in_weights {
            let [f, c, w] = cols.as_slice() else {
                return Err(bad(n, "expected feature, class and weight"));
            };
            let class = file
                .classes
                .iter()
                .position(|x| x == c)
                .ok_or_else(|| bad(n, &format!("unknown class {c:?}")))?;
            let weight: f64 = w.parse().map_err(|_| bad(n, "weight is not a number"))?;
            file.weights.push((f.to_string(), class, weight));
            continue;
        }
        match cols.as_slice() {
            ["model", k] => file.kind = k.to_string(),
            ["templates", v] => {
                file.templates = v.parse().map_err(|_| bad(n, "bad template version"))?
            }
            ["class", c] => file.classes.push(c.to_string()),
            ["tagdict", w, t] => file.tagdict.push((w.to_string(), t.to_string())),
            ["weights"] => in_weights = true,
            _ => return Err(bad(n, "unrecognised header line")),
        }
    }
    if !in_weights {
        return Err(bad(0, "missing weights section"));
    }
    Ok(file)
}

fn expect_kind(file: &ModelFile, expected: &str, templates: u32) -> Result<(), BaselineError> {
    if file.kind != expected {
        return Err(BaselineError::WrongModelKind {
            expected: expected.into(),
            found: file.kind.clone(),
        });
    }
    if file.templates != templates {
        return Err(BaselineError::ModelFormat {
            line: 3,
            message: format!(
                "feature templates version {} not supported (expected {templates})",
                file.templates
            ),
        });
    }
    if file.classes.is_empty() {
        return Err(BaselineError::ModelFormat {
            line: 0,
            message: "model has no classes".into(),
        });
    }
    Ok(())
}

impl ParserModel {
    pub fn save<W: Write>(&self, sink: W) -> Result<(), BaselineError> {
        let classes: Vec<String> = self.transitions.iter().map(|t| t.to_string()).collect();
        write_model(
            sink,
            "parser",
            self.templates,
            &classes,
            &[],
            &self.perceptron,
        )?;
        Ok(())
    }

    pub fn load<R: BufRead>(source: R) -> Result<Self, BaselineError> {
        let file = read_model(source)?;
        expect_kind(&file, "parser", PARSER_TEMPLATES)?;
        let transitions = file
            .classes
            .iter()
            .map(|c| {
                c.parse::<Transition>()
                    .map_err(|message| BaselineError::ModelFormat { line: 0, message })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !transitions.contains(&Transition::Shift) {
            return Err(BaselineError::ModelFormat {
                line: 0,
                message: "parser model lacks SHIFT".into(),
            });
        }
        Ok(ParserModel {
            perceptron: AveragedPerceptron::from_entries(transitions.len(), file.weights),
            transitions,
            templates: file.templates,
        })
    }
}

impl TaggerModel {
    pub fn save<W: Write>(&self, sink: W) -> Result<(), BaselineError> {
        let dict: Vec<(&String, &String)> = self.tagdict.iter().collect();
        write_model(
            sink,
            "tagger",
            self.templates,
            &self.tags,
            &dict,
            &self.perceptron,
        )?;
        Ok(())
    }

    pub fn load<R: BufRead>(source: R) -> Result<Self, BaselineError> {
        let file = read_model(source)?;
        expect_kind(&file, "tagger", TAGGER_TEMPLATES)?;
        Ok(TaggerModel {
            perceptron: AveragedPerceptron::from_entries(file.classes.len(), file.weights),
            tags: file.classes,
            tagdict: file.tagdict.into_iter().collect(),
            templates: file.templates,
        })
    }
}
