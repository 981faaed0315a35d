use std::collections::HashMap;

/// Per-feature weight rows with lazily accumulated totals for averaging.
#[derive(Clone, Debug, Default, PartialEq)]
struct Row {
    weights: Vec<f64>,
    totals: Vec<f64>,
    stamps: Vec<u64>,
}

/// Multiclass averaged perceptron over string features and class indices.
///
/// Training updates keep, for each weight, the running sum of its value
/// over all instances seen so far. [`finalize`](Self::finalize) replaces
/// each weight by that sum divided by the instance count.
#[derive(Clone, Debug, PartialEq)]
pub struct AveragedPerceptron {
    n_classes: usize,
    rows: HashMap<String, Row>,
    instances: u64,
    finalized: bool,
}

impl AveragedPerceptron {
    pub fn new(n_classes: usize) -> Self {
        AveragedPerceptron {
            n_classes,
            rows: HashMap::new(),
            instances: 0,
            finalized: false,
        }
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn is_finalized(&self) -> bool {
        self.finalized
    }

    pub fn scores<S: AsRef<str>>(&self, features: &[S]) -> Vec<f64> {
        let mut scores = vec![0.0; self.n_classes];
        for f in features {
            if let Some(row) = self.rows.get(f.as_ref()) {
                for (s, w) in scores.iter_mut().zip(&row.weights) {
                    *s += w;
                }
            }
        }
        scores
    }

    pub fn weight(&self, feature: &str, class: usize) -> f64 {
        self.rows
            .get(feature)
            .and_then(|r| r.weights.get(class))
            .copied()
            .unwrap_or(0.0)
    }

    /// Record one training instance: reward `truth` and penalise `guess`
    /// when they differ.
    pub fn update<S: AsRef<str>>(&mut self, truth: usize, guess: usize, features: &[S]) {
        assert!(!self.finalized, "perceptron already finalized");
        self.instances += 1;
        if truth == guess {
            return;
        }
        let now = self.instances;
        let n = self.n_classes;
        for f in features {
            let row = self
                .rows
                .entry(f.as_ref().to_string())
                .or_insert_with(|| Row {
                    weights: vec![0.0; n],
                    totals: vec![0.0; n],
                    stamps: vec![0; n],
                });
            for (class, delta) in [(truth, 1.0), (guess, -1.0)] {
                // The weight held its old value for instances
                // stamps[class] + 1 ..= now - 1.
                let held = now - 1 - row.stamps[class];
                row.totals[class] += held as f64 * row.weights[class];
                row.stamps[class] = now - 1;
                row.weights[class] += delta;
            }
        }
    }

    /// Replace weights by their averages over all instances. Calling this
    /// more than once has no further effect.
    pub fn finalize(&mut self) {
        if self.finalized {
            return;
        }
        let n = self.instances;
        for row in self.rows.values_mut() {
            for c in 0..row.weights.len() {
                let held = n - row.stamps[c];
                let total = row.totals[c] + held as f64 * row.weights[c];
                row.weights[c] = if n == 0 { 0.0 } else { total / n as f64 };
            }
            row.totals = Vec::new();
            row.stamps = Vec::new();
        }
        self.rows.retain(|_, r| r.weights.iter().any(|w| *w != 0.0));
        self.finalized = true;
    }

    /// Non-zero weights sorted by feature then class.
    pub fn entries(&self) -> Vec<(&str, usize, f64)> {
        let mut out: Vec<(&str, usize, f64)> = self
            .rows
            .iter()
            .flat_map(|(f, r)| {
                r.weights
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| **w != 0.0)
                    .map(move |(c, w)| (f.as_str(), c, *w))
            })
            .collect();
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }

    /// Build a finalized model from stored weights.
    pub fn from_entries<I>(n_classes: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (String, usize, f64)>,
    {
        let mut rows: HashMap<String, Row> = HashMap::new();
        for (f, c, w) in entries {
            let row = rows.entry(f).or_insert_with(|| Row {
                weights: vec![0.0; n_classes],
                ..Row::default()
            });
            row.weights[c] = w;
        }
        AveragedPerceptron {
            n_classes,
            rows,
            instances: 0,
            finalized: true,
        }
    }
}

/// Index of the highest score among `allowed` classes; ties go to the
/// earliest allowed class.
pub fn best_allowed(scores: &[f64], allowed: impl Iterator<Item = usize>) -> Option<usize> {
    let mut best: Option<usize> = None;
    for c in allowed {
        if best.is_none_or(|b| scores[c] > scores[b]) {
            best = Some(c);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn averaging_matches_snapshot_mean() {
        // Three instances; snapshot the weights after each and average.
        let steps: [(usize, usize, &[&str]); 3] =
            [(0, 1, &["a", "b"]), (1, 1, &["a"]), (1, 0, &["b"])];
        let mut p = AveragedPerceptron::new(2);
        let mut naive: HashMap<(&str, usize), f64> = HashMap::new();
        let mut sums: HashMap<(&str, usize), f64> = HashMap::new();
        for (truth, guess, feats) in steps {
            p.update(truth, guess, feats);
            if truth != guess {
                for f in feats {
                    *naive.entry((f, truth)).or_default() += 1.0;
                    *naive.entry((f, guess)).or_default() -= 1.0;
                }
            }
            for key in [("a", 0), ("a", 1), ("b", 0), ("b", 1)] {
                *sums.entry(key).or_default() += naive.get(&key).copied().unwrap_or(0.0);
            }
        }
        p.finalize();
        for ((f, c), total) in sums {
            assert!((p.weight(f, c) - total / 3.0).abs() < 1e-12, "{f} {c}");
        }
        // By hand: a/0 is 1, 1, 1 -> 1; b/0 is 1, 1, 0 -> 2/3.
        assert_eq!(p.weight("a", 0), 1.0);
        assert!((p.weight("b", 0) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn finalize_once() {
        let mut p = AveragedPerceptron::new(2);
        p.update(0, 1, &["x"]);
        p.finalize();
        let before = p.clone();
        p.finalize();
        assert_eq!(p, before);
    }

    #[test]
    fn ties_go_to_first() {
        assert_eq!(best_allowed(&[0.0, 0.0, 0.0], [1, 2].into_iter()), Some(1));
        assert_eq!(best_allowed(&[0.0, 0.0, 1.0], [1, 2].into_iter()), Some(2));
        assert_eq!(best_allowed(&[1.0], std::iter::empty()), None);
    }
}
