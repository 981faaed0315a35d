use std::collections::HashSet;
use std::io::{BufRead, BufReader, Read};

use super::{
    comment_key_value, parse_child_age, validate, ConlluError, Diagnostic, EmptyNode, Features,
    MwtRange, RoleMap, Sentence, SentenceDiagnostics, Token, Treebank,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strictness {
    /// Any tree violation aborts reading.
    #[default]
    Strict,
    /// Tree violations are recorded as per-sentence diagnostics.
    Lenient,
}

#[derive(Clone, Debug, Default)]
pub struct ReadOptions {
    pub strictness: Strictness,
    pub roles: RoleMap,
}

impl ReadOptions {
    pub fn strict() -> Self {
        ReadOptions::default()
    }

    pub fn lenient() -> Self {
        ReadOptions {
            strictness: Strictness::Lenient,
            ..ReadOptions::default()
        }
    }
}

/// Read a whole treebank.
pub fn read_conllu<R: Read>(source: R, options: &ReadOptions) -> Result<Treebank, ConlluError> {
    let mut reader = SentenceReader::new(options);
    for (idx, line) in BufReader::new(source).lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => ConlluError::Format {
                line: lineno,
                message: "invalid UTF-8".into(),
            },
            _ => ConlluError::Io(e),
        })?;
        reader.feed(lineno, line.strip_suffix('\r').unwrap_or(&line))?;
    }
    reader.finish()
}

pub fn read_conllu_str(text: &str, options: &ReadOptions) -> Result<Treebank, ConlluError> {
    read_conllu(text.as_bytes(), options)
}

struct Pending {
    first_line: usize,
    comments: Vec<String>,
    tokens: Vec<(usize, Token)>,
    mwt: Vec<MwtRange>,
    empty_nodes: Vec<EmptyNode>,
}

impl Pending {
    fn new(first_line: usize) -> Self {
        Pending {
            first_line,
            comments: Vec::new(),
            tokens: Vec::new(),
            mwt: Vec::new(),
            empty_nodes: Vec::new(),
        }
    }
}

struct SentenceReader<'a> {
    options: &'a ReadOptions,
    pending: Option<Pending>,
    treebank: Treebank,
    seen_ids: HashSet<String>,
}

fn format_error(line: usize, message: impl Into<String>) -> ConlluError {
    ConlluError::Format {
        line,
        message: message.into(),
    }
}

impl<'a> SentenceReader<'a> {
    fn new(options: &'a ReadOptions) -> Self {
        SentenceReader {
            options,
            pending: None,
            treebank: Treebank::default(),
            seen_ids: HashSet::new(),
        }
    }

    fn feed(&mut self, lineno: usize, line: &str) -> Result<(), ConlluError> {
        if line.trim().is_empty() {
            return self.flush();
        }
        let pending = self.pending.get_or_insert_with(|| Pending::new(lineno));
        if line.starts_with('#') {
            if !pending.tokens.is_empty() || !pending.mwt.is_empty() {
                return Err(format_error(lineno, "comment line inside a sentence"));
            }
            pending.comments.push(line.to_string());
            return Ok(());
        }

        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 10 {
            return Err(format_error(
                lineno,
                format!("expected 10 tab-separated fields, found {}", fields.len()),
            ));
        }
        let id = fields[0];
        if let Some((start, end)) = id.split_once('-') {
            let start = parse_index(lineno, start, "multiword start")?;
            let end = parse_index(lineno, end, "multiword end")?;
            if start >= end {
                return Err(format_error(
                    lineno,
                    format!("empty multiword range {}", id),
                ));
            }
            pending.mwt.push(MwtRange {
                start,
                end,
                form: fields[1].to_string(),
                misc: fields[9].to_string(),
            });
            return Ok(());
        }
        if let Some((major, minor)) = id.split_once('.') {
            let major = major
                .parse()
                .map_err(|_| format_error(lineno, format!("non-integer id {:?}", id)))?;
            let minor = parse_index(lineno, minor, "empty node")?;
            pending.empty_nodes.push(EmptyNode {
                major,
                minor,
                line: line.to_string(),
            });
            return Ok(());
        }

        let id = parse_index(lineno, id, "id")?;
        if id == 0 {
            return Err(format_error(lineno, "token id 0"));
        }
        let head = fields[6]
            .parse::<usize>()
            .map_err(|_| format_error(lineno, format!("non-integer head {:?}", fields[6])))?;
        let feats = Features::parse(fields[5])
            .ok_or_else(|| format_error(lineno, format!("malformed FEATS {:?}", fields[5])))?;
        if self.options.strictness == super::Strictness::Strict
            && pending.tokens.iter().any(|(_, t)| t.id == id)
        {
            return Err(format_error(lineno, format!("duplicate token id {}", id)));
        }
        pending.tokens.push((
            lineno,
            Token {
                id,
                form: fields[1].to_string(),
                lemma: fields[2].to_string(),
                upos: fields[3].to_string(),
                xpos: fields[4].to_string(),
                feats,
                head,
                deprel: fields[7].to_string(),
                deps: fields[8].to_string(),
                misc: fields[9].to_string(),
            },
        ));
        Ok(())
    }

    fn flush(&mut self) -> Result<(), ConlluError> {
        let Some(pending) = self.pending.take() else {
            return Ok(());
        };
        if pending.tokens.is_empty() {
            return Err(format_error(pending.first_line, "sentence without tokens"));
        }
        let index = self.treebank.sentences.len();
        let mut sentence = Sentence::bare(Vec::new());
        sentence.comments = pending.comments;
        sentence.sent_id = format!("s{}", index + 1);
        for comment in &sentence.comments {
            let Some((key, value)) = comment_key_value(comment) else {
                continue;
            };
            match key {
                "sent_id" => sentence.sent_id = value.to_string(),
                "speaker" => sentence.speaker_role = self.options.roles.role(value),
                "child_age" => {
                    if let Some(age) = parse_child_age(value) {
                        sentence.child_age_months = Some(age);
                    }
                }
                "age_months" => {
                    if let Ok(age) = value.parse::<f64>() {
                        if age.is_finite() && age >= 0.0 {
                            sentence.child_age_months = Some(age);
                        }
                    }
                }
                "text" => sentence.text = Some(value.to_string()),
                _ => {}
            }
        }

        let mut diagnostics = Vec::new();
        if let Some((position, (_, token))) = pending
            .tokens
            .iter()
            .enumerate()
            .find(|(pos, (_, t))| t.id != pos + 1)
        {
            // Lenient mode only: strict mode rejects duplicates while
            // reading and gaps in validation below.
            diagnostics.push(Diagnostic::IdSequence {
                position: position + 1,
                found: token.id.to_string(),
            });
        }
        sentence.tokens = pending.tokens.into_iter().map(|(_, t)| t).collect();
        sentence.mwt = pending.mwt;
        sentence.empty_nodes = pending.empty_nodes;

        let strict = self.options.strictness == super::Strictness::Strict;
        if strict && !diagnostics.is_empty() {
            return Err(ConlluError::Validation {
                sent_id: sentence.sent_id,
                diagnostics,
            });
        }
        for (pos, token) in sentence.tokens.iter_mut().enumerate() {
            token.id = pos + 1;
        }
        diagnostics.extend(validate(&sentence));
        if !self.seen_ids.insert(sentence.sent_id.clone()) {
            if strict {
                return Err(ConlluError::DuplicateSentId(sentence.sent_id));
            }
            diagnostics.push(Diagnostic::DuplicateSentId {
                sent_id: sentence.sent_id.clone(),
            });
        }
        if !diagnostics.is_empty() {
            if strict {
                return Err(ConlluError::Validation {
                    sent_id: sentence.sent_id,
                    diagnostics,
                });
            }
            self.treebank.diagnostics.push(SentenceDiagnostics {
                index,
                sent_id: sentence.sent_id.clone(),
                diagnostics,
            });
        }
        self.treebank.sentences.push(sentence);
        Ok(())
    }

    fn finish(mut self) -> Result<Treebank, ConlluError> {
        self.flush()?;
        Ok(self.treebank)
    }
}

fn parse_index(lineno: usize, value: &str, what: &str) -> Result<usize, ConlluError> {
    value
        .parse()
        .map_err(|_| format_error(lineno, format!("non-integer {} {:?}", what, value)))
}
