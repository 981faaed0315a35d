//! Label-level error analysis: per-label error rates and confusion
//! matrices between gold and predicted relations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use super::{align, align_treebanks, EvalError};
use crate::conllu::{Token, Treebank};

/// Which tokens count as errors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ErrorScope {
    /// Per-label rates: wrong label. Confusion: every token.
    LabelOnly,
    /// Per-label rates: wrong head or wrong label. Confusion: only tokens
    /// that are LAS errors.
    #[default]
    LasErrors,
}

fn las_correct(gold: &Token, pred: &Token) -> bool {
    gold.head == pred.head && gold.deprel == pred.deprel
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelErrorRate {
    pub gold_count: usize,
    pub errors: usize,
    pub rate: f64,
}

/// Error rate per gold relation, normalized by gold frequency. Labels with
/// fewer than `min_gold` gold tokens are left out.
pub fn per_label_error_rates(
    gold: &Treebank,
    pred: &Treebank,
    min_gold: usize,
    scope: ErrorScope,
) -> Result<BTreeMap<String, LabelErrorRate>, EvalError> {
    let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for (g, p) in align_treebanks(gold, pred)? {
        for (gt, pt) in align(g, p)? {
            let wrong = match scope {
                ErrorScope::LasErrors => !las_correct(gt, pt),
                ErrorScope::LabelOnly => gt.deprel != pt.deprel,
            };
            let entry = counts.entry(gt.deprel.as_str()).or_default();
            entry.0 += 1;
            entry.1 += usize::from(wrong);
        }
    }
    Ok(counts
        .into_iter()
        .filter(|(_, (n, _))| *n >= min_gold.max(1))
        .map(|(label, (n, errors))| {
            (
                label.to_string(),
                LabelErrorRate {
                    gold_count: n,
                    errors,
                    rate: errors as f64 / n as f64,
                },
            )
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Normalization {
    Raw,
    RowNormalized,
    /// Elementwise difference of two row-normalized matrices.
    Delta,
}

/// Gold (rows) by predicted (columns) relation matrix over a sorted label
/// set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfusionMatrix {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<f64>>,
    pub normalization: Normalization,
}

impl ConfusionMatrix {
    fn zeros(labels: Vec<String>, normalization: Normalization) -> Self {
        let n = labels.len();
        ConfusionMatrix {
            labels,
            cells: vec![vec![0.0; n]; n],
            normalization,
        }
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    /// Cell value, zero for labels outside the matrix.
    pub fn get(&self, gold: &str, pred: &str) -> f64 {
        match (self.index(gold), self.index(pred)) {
            (Some(g), Some(p)) => self.cells[g][p],
            _ => 0.0,
        }
    }

    pub fn row_sum(&self, gold: &str) -> f64 {
        self.index(gold)
            .map(|g| self.cells[g].iter().sum())
            .unwrap_or(0.0)
    }

    /// Divide each row by its sum; empty rows stay zero.
    pub fn row_normalized(&self) -> ConfusionMatrix {
        let mut out = self.clone();
        if self.normalization != Normalization::Raw {
            return out;
        }
        for row in out.cells.iter_mut() {
            let sum: f64 = row.iter().sum();
            if sum > 0.0 {
                for cell in row.iter_mut() {
                    *cell /= sum;
                }
            }
        }
        out.normalization = Normalization::RowNormalized;
        out
    }

    /// Re-index onto a (sorted) superset of labels, zero-filling.
    pub fn padded(&self, labels: &[String]) -> ConfusionMatrix {
        let mut out = ConfusionMatrix::zeros(labels.to_vec(), self.normalization);
        for (gi, g) in self.labels.iter().enumerate() {
            for (pi, p) in self.labels.iter().enumerate() {
                if let (Some(a), Some(b)) = (out.index(g), out.index(p)) {
                    out.cells[a][b] = self.cells[gi][pi];
                }
            }
        }
        out
    }

    /// Tab-separated table with a header row and column of labels; cells
    /// carry four fractional digits.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("gold\\pred");
        for label in &self.labels {
            out.push('\t');
            out.push_str(label);
        }
        out.push('\n');
        for (label, row) in self.labels.iter().zip(&self.cells) {
            out.push_str(label);
            for cell in row {
                // Avoid printing "-0.0000".
                let cell = if *cell == 0.0 { 0.0 } else { *cell };
                write!(out, "\t{:.4}", cell).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Count gold relation `g` predicted as `p`.
pub fn confusion(
    gold: &Treebank,
    pred: &Treebank,
    scope: ErrorScope,
) -> Result<ConfusionMatrix, EvalError> {
    let mut pairs = Vec::new();
    for (g, p) in align_treebanks(gold, pred)? {
        for (gt, pt) in align(g, p)? {
            if scope == ErrorScope::LasErrors && las_correct(gt, pt) {
                continue;
            }
            pairs.push((gt.deprel.as_str(), pt.deprel.as_str()));
        }
    }
    let labels: BTreeSet<&str> = pairs.iter().flat_map(|(g, p)| [*g, *p]).collect();
    let mut matrix = ConfusionMatrix::zeros(
        labels.into_iter().map(str::to_string).collect(),
        Normalization::Raw,
    );
    for (g, p) in pairs {
        let gi = matrix.index(g).unwrap();
        let pi = matrix.index(p).unwrap();
        matrix.cells[gi][pi] += 1.0;
    }
    Ok(matrix)
}

/// `a - b` over the union label set, after row normalization. Positive
/// cells mark confusions that `a` makes more often.
pub fn confusion_delta(a: &ConfusionMatrix, b: &ConfusionMatrix) -> ConfusionMatrix {
    let labels: Vec<String> = a
        .labels
        .iter()
        .chain(&b.labels)
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let a = a.row_normalized().padded(&labels);
    let b = b.row_normalized().padded(&labels);
    let mut out = ConfusionMatrix::zeros(labels, Normalization::Delta);
    for (i, row) in out.cells.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a.cells[i][j] - b.cells[i][j];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::Sentence;

    fn one_sentence(rels: &[(usize, &str)]) -> Treebank {
        let tokens = rels
            .iter()
            .enumerate()
            .map(|(i, (h, r))| Token::new(i + 1, &format!("w{i}"), *h, r))
            .collect();
        Treebank::new(vec![Sentence::new("a", tokens)])
    }

    fn matrix(labels: &[&str], cells: Vec<Vec<f64>>) -> ConfusionMatrix {
        ConfusionMatrix {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            cells,
            normalization: Normalization::RowNormalized,
        }
    }

    #[test]
    fn all_correct_rates_are_zero() {
        let tb = one_sentence(&[(2, "nsubj"), (0, "root"), (2, "obj")]);
        let rates = per_label_error_rates(&tb, &tb, 1, ErrorScope::LasErrors).unwrap();
        assert_eq!(rates.len(), 3);
        assert!(rates.values().all(|r| r.rate == 0.0));
    }

    #[test]
    fn conj_fifteen_percent() {
        let mut gold_rels = vec![(0, "root")];
        gold_rels.extend(std::iter::repeat_n((1, "conj"), 100));
        let mut pred_rels = gold_rels.clone();
        for (i, rel) in pred_rels.iter_mut().enumerate().skip(1).take(15) {
            *rel = if i % 2 == 0 { (1, "amod") } else { (0, "conj") };
        }
        let rates = per_label_error_rates(
            &one_sentence(&gold_rels),
            &one_sentence(&pred_rels),
            100,
            ErrorScope::LasErrors,
        )
        .unwrap();
        assert_eq!(rates["conj"].rate, 0.15);
        assert!(!rates.contains_key("root"));
    }

    #[test]
    fn threshold_excludes_rare_labels() {
        let mut rels = vec![(0, "root")];
        rels.extend(std::iter::repeat_n((1, "conj"), 99));
        let tb = one_sentence(&rels);
        let rates = per_label_error_rates(&tb, &tb, 100, ErrorScope::LasErrors).unwrap();
        assert!(rates.is_empty());
    }

    #[test]
    fn identical_label_only_is_diagonal() {
        let tb = one_sentence(&[(2, "nsubj"), (0, "root"), (2, "obj"), (2, "obj")]);
        let m = confusion(&tb, &tb, ErrorScope::LabelOnly).unwrap();
        assert_eq!(m.labels, vec!["nsubj", "obj", "root"]);
        assert_eq!(m.get("obj", "obj"), 2.0);
        assert_eq!(m.get("nsubj", "obj"), 0.0);
        assert_eq!(m.row_sum("root"), 1.0);
    }

    #[test]
    fn vocative_predicted_as_nsubj() {
        let gold = one_sentence(&[(2, "vocative"), (0, "root")]);
        let pred = one_sentence(&[(2, "nsubj"), (0, "root")]);
        let m = confusion(&gold, &pred, ErrorScope::LabelOnly).unwrap();
        assert_eq!(m.get("vocative", "nsubj"), 1.0);
        let errors = confusion(&gold, &pred, ErrorScope::LasErrors).unwrap();
        assert_eq!(errors.row_sum("root"), 0.0);
        assert_eq!(errors.get("vocative", "nsubj"), 1.0);
    }

    #[test]
    fn row_normalization() {
        let gold = one_sentence(&[(0, "root"), (1, "obj"), (1, "obj"), (1, "obj"), (1, "obj")]);
        let pred = one_sentence(&[(0, "root"), (1, "obj"), (1, "iobj"), (1, "obj"), (1, "obj")]);
        let m = confusion(&gold, &pred, ErrorScope::LabelOnly)
            .unwrap()
            .row_normalized();
        assert_eq!(m.get("obj", "obj"), 0.75);
        assert_eq!(m.get("obj", "iobj"), 0.25);
        // iobj never occurs in gold: empty row stays zero.
        assert_eq!(m.row_sum("iobj"), 0.0);
    }

    #[test]
    fn delta_of_equal_matrices_is_zero() {
        let a = matrix(&["nmod", "compound"], vec![vec![0.5, 0.5], vec![0.0, 1.0]]);
        let d = confusion_delta(&a, &a);
        assert!(d.cells.iter().flatten().all(|c| *c == 0.0));
    }

    #[test]
    fn delta_hand_arithmetic_and_padding() {
        let a = matrix(&["compound", "nmod"], vec![vec![1.0, 0.0], vec![0.3, 0.7]]);
        let b = matrix(
            &["compound", "nmod", "obl"],
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.1, 0.9, 0.0],
                vec![0.0, 0.4, 0.6],
            ],
        );
        let d = confusion_delta(&a, &b);
        assert!((d.get("nmod", "compound") - 0.2).abs() < 1e-12);
        // obl only exists in b.
        let obl = d.index("obl").unwrap();
        assert!(d.cells[obl].iter().all(|c| *c <= 0.0));
        assert_eq!(d.normalization, Normalization::Delta);
    }

    #[test]
    fn tsv_layout() {
        let a = matrix(&["a", "b"], vec![vec![1.0, 0.0], vec![0.25, 0.75]]);
        assert_eq!(
            a.to_tsv(),
            "gold\\pred\ta\tb\na\t1.0000\t0.0000\nb\t0.2500\t0.7500\n"
        );
    }
}
