use std::fmt;

use super::Sentence;

/// A violated sentence invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    /// Token ids are not exactly `1..n` in order.
    IdSequence {
        position: usize,
        found: String,
    },
    SelfLoop {
        token: usize,
    },
    HeadOutOfRange {
        token: usize,
        head: usize,
    },
    /// `deprel = root` must coincide with `head = 0`.
    RootLabel {
        token: usize,
        head: usize,
        deprel: String,
    },
    NoRoot,
    MultipleRoots {
        tokens: Vec<usize>,
    },
    Cycle {
        tokens: Vec<usize>,
    },
    DuplicateSentId {
        sent_id: String,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::IdSequence { position, found } => {
                write!(
                    f,
                    "token id {} at position {} breaks the 1..n sequence",
                    found, position
                )
            }
            Diagnostic::SelfLoop { token } => write!(f, "self-loop at token {}", token),
            Diagnostic::HeadOutOfRange { token, head } => {
                write!(f, "head {} of token {} is out of range", head, token)
            }
            Diagnostic::RootLabel {
                token,
                head,
                deprel,
            } => write!(
                f,
                "token {} has head {} but deprel {:?} (root iff head 0)",
                token, head, deprel
            ),
            Diagnostic::NoRoot => f.write_str("no root"),
            Diagnostic::MultipleRoots { tokens } => {
                write!(f, "multiple roots {}", id_set(tokens))
            }
            Diagnostic::Cycle { tokens } => write!(f, "cycle {}", id_set(tokens)),
            Diagnostic::DuplicateSentId { sent_id } => write!(f, "duplicate sent_id {}", sent_id),
        }
    }
}

fn id_set(ids: &[usize]) -> String {
    let parts: Vec<String> = ids.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Check every sentence invariant. Returns an empty list iff the sentence
/// is a well-formed single-rooted tree.
pub fn validate(sentence: &Sentence) -> Vec<Diagnostic> {
    let mut diagnostics = Vec::new();
    let n = sentence.tokens.len();

    if let Some((position, token)) = sentence
        .tokens
        .iter()
        .enumerate()
        .find(|(pos, t)| t.id != pos + 1)
    {
        diagnostics.push(Diagnostic::IdSequence {
            position: position + 1,
            found: token.id.to_string(),
        });
    }

    for (pos, token) in sentence.tokens.iter().enumerate() {
        let id = pos + 1;
        if token.head == id {
            diagnostics.push(Diagnostic::SelfLoop { token: id });
        } else if token.head > n {
            diagnostics.push(Diagnostic::HeadOutOfRange {
                token: id,
                head: token.head,
            });
        }
        if (token.head == 0) != (token.deprel == "root") {
            diagnostics.push(Diagnostic::RootLabel {
                token: id,
                head: token.head,
                deprel: token.deprel.clone(),
            });
        }
    }

    let roots: Vec<usize> = sentence
        .tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| t.head == 0)
        .map(|(pos, _)| pos + 1)
        .collect();
    if n > 0 && roots.is_empty() {
        diagnostics.push(Diagnostic::NoRoot);
    } else if roots.len() > 1 {
        diagnostics.push(Diagnostic::MultipleRoots { tokens: roots });
    }

    let heads: Vec<usize> = sentence.tokens.iter().map(|t| t.head).collect();
    for cycle in find_cycles(&heads) {
        diagnostics.push(Diagnostic::Cycle { tokens: cycle });
    }

    diagnostics
}

/// Cycles in a positional head vector (`heads[i]` is the head of token
/// `i + 1`). Self-loops and out-of-range heads terminate a walk and are not
/// reported here. Each cycle is returned once, sorted ascending.
pub(crate) fn find_cycles(heads: &[usize]) -> Vec<Vec<usize>> {
    const NEW: u8 = 0;
    const ON_PATH: u8 = 1;
    const DONE: u8 = 2;

    let n = heads.len();
    let mut state = vec![NEW; n + 1];
    let mut cycles = Vec::new();

    for start in 1..=n {
        let mut path = Vec::new();
        let mut current = start;
        loop {
            if current == 0 || current > n || state[current] == DONE {
                break;
            }
            if state[current] == ON_PATH {
                let from = path.iter().position(|&t| t == current).unwrap();
                let mut cycle = path[from..].to_vec();
                cycle.sort_unstable();
                cycles.push(cycle);
                break;
            }
            state[current] = ON_PATH;
            path.push(current);
            let head = heads[current - 1];
            if head == current {
                break;
            }
            current = head;
        }
        for t in path {
            state[t] = DONE;
        }
    }
    cycles.sort();
    cycles
}
