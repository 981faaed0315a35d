use std::collections::HashMap;
use std::fmt;

use super::validate::find_cycles;
use super::{LabelMap, Sentence};

/// One change made by [`normalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Repair {
    Renumbered,
    Relabeled {
        token: usize,
        from: String,
        to: String,
    },
    /// Self-loop or out-of-range head replaced by an attachment to the root.
    Detached {
        token: usize,
        head: usize,
    },
    NewRoot {
        token: usize,
    },
    ExtraRoot {
        token: usize,
        root: usize,
    },
    CycleBroken {
        token: usize,
        cycle: Vec<usize>,
    },
    RootLabelFixed {
        token: usize,
        from: String,
        to: String,
    },
}

impl fmt::Display for Repair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Repair::Renumbered => f.write_str("token ids renumbered 1..n"),
            Repair::Relabeled { token, from, to } => {
                write!(f, "token {}: relabeled {} -> {}", token, from, to)
            }
            Repair::Detached { token, head } => {
                write!(f, "token {}: invalid head {} replaced", token, head)
            }
            Repair::NewRoot { token } => write!(f, "token {}: promoted to root", token),
            Repair::ExtraRoot { token, root } => {
                write!(
                    f,
                    "token {}: extra root attached to {} as parataxis",
                    token, root
                )
            }
            Repair::CycleBroken { token, cycle } => {
                write!(
                    f,
                    "token {}: re-headed to root to break cycle {:?}",
                    token, cycle
                )
            }
            Repair::RootLabelFixed { token, from, to } => {
                write!(f, "token {}: deprel {} -> {}", token, from, to)
            }
        }
    }
}

/// A repaired sentence and the log of repairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalized {
    pub sentence: Sentence,
    pub repairs: Vec<Repair>,
}

/// Rewrite labels through `label_map` and repair the tree so that
/// [`validate`](super::validate) reports nothing.
///
/// Repair policy:
/// * self-loops and out-of-range heads are detached, then re-attached to
///   the root;
/// * with no root, the shallowest token whose head chain is cycle-free
///   (ties: smallest id) becomes root; if every token sits on or feeds a
///   cycle, the smallest id does;
/// * with several roots the first stays root and later ones attach to it
///   as `parataxis`;
/// * each remaining cycle is broken by re-heading its smallest member to
///   the root;
/// * the root is labeled `root` and no other token keeps that label
///   (it becomes `dep`).
///
/// The result is idempotent as long as no target label of the map is also
/// one of its source labels.
pub fn normalize(sentence: &Sentence, label_map: &LabelMap) -> Normalized {
    let mut out = sentence.clone();
    let mut repairs = Vec::new();
    let n = out.tokens.len();

    if out
        .tokens
        .iter()
        .enumerate()
        .any(|(pos, t)| t.id != pos + 1)
    {
        let mut by_id = HashMap::new();
        let unique = out
            .tokens
            .iter()
            .enumerate()
            .all(|(pos, t)| by_id.insert(t.id, pos + 1).is_none());
        for (pos, token) in out.tokens.iter_mut().enumerate() {
            token.id = pos + 1;
            if unique && token.head != 0 {
                // Heads pointing at unknown ids become out of range.
                token.head = by_id.get(&token.head).copied().unwrap_or(n + 1);
            }
        }
        repairs.push(Repair::Renumbered);
    }

    for token in out.tokens.iter_mut() {
        if let Some(to) = label_map.get(&token.deprel) {
            if to != token.deprel {
                repairs.push(Repair::Relabeled {
                    token: token.id,
                    from: token.deprel.clone(),
                    to: to.to_string(),
                });
                token.deprel = to.to_string();
            }
        }
    }

    if n == 0 {
        return Normalized {
            sentence: out,
            repairs,
        };
    }

    // None marks a detached token.
    let mut heads: Vec<Option<usize>> = out
        .tokens
        .iter()
        .enumerate()
        .map(|(pos, t)| {
            if t.head == pos + 1 || t.head > n {
                None
            } else {
                Some(t.head)
            }
        })
        .collect();
    for (pos, head) in heads.iter().enumerate() {
        if head.is_none() {
            repairs.push(Repair::Detached {
                token: pos + 1,
                head: out.tokens[pos].head,
            });
        }
    }

    let roots: Vec<usize> = (1..=n).filter(|&id| heads[id - 1] == Some(0)).collect();
    let root = match roots.first() {
        Some(&root) => root,
        None => {
            let root = pick_root(&heads);
            heads[root - 1] = Some(0);
            repairs.push(Repair::NewRoot { token: root });
            root
        }
    };
    for &extra in roots.iter().skip(1) {
        heads[extra - 1] = Some(root);
        out.tokens[extra - 1].deprel = "parataxis".to_string();
        repairs.push(Repair::ExtraRoot { token: extra, root });
    }
    for head in heads.iter_mut() {
        if head.is_none() {
            *head = Some(root);
        }
    }

    let mut resolved: Vec<usize> = heads.into_iter().map(|h| h.unwrap()).collect();
    loop {
        let cycles = find_cycles(&resolved);
        if cycles.is_empty() {
            break;
        }
        for cycle in cycles {
            let member = cycle[0];
            resolved[member - 1] = root;
            repairs.push(Repair::CycleBroken {
                token: member,
                cycle,
            });
        }
    }

    for (pos, token) in out.tokens.iter_mut().enumerate() {
        token.head = resolved[pos];
        let wanted = if token.head == 0 {
            Some("root")
        } else if token.deprel == "root" {
            Some("dep")
        } else {
            None
        };
        if let Some(wanted) = wanted {
            if token.deprel != wanted {
                repairs.push(Repair::RootLabelFixed {
                    token: token.id,
                    from: token.deprel.clone(),
                    to: wanted.to_string(),
                });
                token.deprel = wanted.to_string();
            }
        }
    }

    Normalized {
        sentence: out,
        repairs,
    }
}

/// Choose a root when none exists: the shallowest token whose head chain
/// ends at a detached token without revisiting anything.
fn pick_root(heads: &[Option<usize>]) -> usize {
    let n = heads.len();
    let mut best: Option<(usize, usize)> = None;
    for start in 1..=n {
        let mut seen = vec![false; n + 1];
        let mut current = start;
        let mut depth = 0;
        let cycle_free = loop {
            if seen[current] {
                break false;
            }
            seen[current] = true;
            match heads[current - 1] {
                None => break true,
                Some(h) => {
                    current = h;
                    depth += 1;
                }
            }
        };
        if cycle_free && best.is_none_or(|(d, _)| depth < d) {
            best = Some((depth, start));
        }
    }
    best.map(|(_, id)| id).unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::{validate, Token};

    fn sentence(spec: &[(usize, &str)]) -> Sentence {
        let tokens = spec
            .iter()
            .enumerate()
            .map(|(i, (head, rel))| Token::new(i + 1, &format!("w{}", i + 1), *head, rel))
            .collect();
        Sentence::new("t", tokens)
    }

    fn heads(s: &Sentence) -> Vec<usize> {
        s.tokens.iter().map(|t| t.head).collect()
    }

    #[test]
    fn relabels_through_map() {
        let mut map = LabelMap::new();
        map.insert("nsubjpass", "nsubj:pass");
        let s = sentence(&[(2, "nsubjpass"), (0, "root")]);
        let out = normalize(&s, &map);
        assert_eq!(out.sentence.tokens[0].deprel, "nsubj:pass");
        assert_eq!(out.repairs.len(), 1);
    }

    #[test]
    fn valid_sentence_is_unchanged() {
        let s = sentence(&[(2, "nsubj"), (0, "root"), (2, "punct")]);
        let out = normalize(&s, &LabelMap::new());
        assert_eq!(out.sentence, s);
        assert!(out.repairs.is_empty());
    }

    #[test]
    fn second_root_becomes_parataxis() {
        let s = sentence(&[(0, "root"), (1, "obj"), (0, "root"), (3, "punct")]);
        let out = normalize(&s, &LabelMap::new());
        assert_eq!(heads(&out.sentence), vec![0, 1, 1, 3]);
        assert_eq!(out.sentence.tokens[2].deprel, "parataxis");
        assert!(validate(&out.sentence).is_empty());
    }

    #[test]
    fn cycle_broken_at_smallest_member() {
        let s = sentence(&[(0, "root"), (3, "dep"), (2, "dep")]);
        let out = normalize(&s, &LabelMap::new());
        assert_eq!(heads(&out.sentence), vec![0, 1, 2]);
        assert!(validate(&out.sentence).is_empty());
    }

    #[test]
    fn rootless_chain_promotes_detached_token() {
        // 1 -> 2 -> 3 (self-loop): 3 is detached and shallowest.
        let s = sentence(&[(2, "det"), (3, "nsubj"), (3, "root")]);
        let out = normalize(&s, &LabelMap::new());
        assert_eq!(heads(&out.sentence), vec![2, 3, 0]);
        assert_eq!(out.sentence.tokens[2].deprel, "root");
        assert!(validate(&out.sentence).is_empty());
    }

    #[test]
    fn pure_cycle_promotes_smallest_id() {
        let s = sentence(&[(2, "dep"), (3, "dep"), (1, "dep")]);
        let out = normalize(&s, &LabelMap::new());
        assert_eq!(heads(&out.sentence), vec![0, 3, 1]);
        assert!(validate(&out.sentence).is_empty());
    }

    #[test]
    fn index_reset_gets_renumbered_and_repaired() {
        let mut s = sentence(&[(0, "root"), (1, "obj"), (0, "root"), (3, "punct")]);
        s.tokens[2].id = 1;
        s.tokens[3].id = 2;
        let out = normalize(&s, &LabelMap::new());
        assert!(out.repairs.contains(&Repair::Renumbered));
        assert!(validate(&out.sentence).is_empty());
        assert_eq!(out.sentence.len(), 4);
    }

    #[test]
    fn idempotent_on_repairs() {
        let s = sentence(&[(5, "root"), (0, "nsubj"), (2, "x"), (3, "y"), (0, "root")]);
        let once = normalize(&s, &LabelMap::clearnlp()).sentence;
        let twice = normalize(&once, &LabelMap::clearnlp());
        assert_eq!(twice.sentence, once);
        assert!(twice.repairs.is_empty());
    }
}
