use std::collections::BTreeMap;
use std::io::BufRead;

use super::ConlluError;

const CLEARNLP_UD: &str = include_str!("../../data/clearnlp_ud.tsv");

/// Dependency-label rewrite table. Unmapped labels pass through.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelMap(BTreeMap<String, String>);

impl LabelMap {
    pub fn new() -> Self {
        LabelMap::default()
    }

    /// The bundled ClearNLP (spaCy English) to UD table.
    pub fn clearnlp() -> Self {
        Self::from_tsv(CLEARNLP_UD.as_bytes()).expect("bundled label map is well-formed")
    }

    /// Two-column TSV, `source_label TAB ud_label`. Blank lines and `#`
    /// comments are skipped.
    pub fn from_tsv<R: BufRead>(reader: R) -> Result<Self, ConlluError> {
        let mut map = BTreeMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim_end_matches(['\r', '\n']);
            if trimmed.trim().is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = trimmed.split('\t').collect();
            if cols.len() != 2 || cols[0].is_empty() || cols[1].is_empty() {
                return Err(ConlluError::Mapping {
                    line: idx + 1,
                    message: "expected `source_label TAB ud_label`".into(),
                });
            }
            map.insert(cols[0].to_string(), cols[1].to_string());
        }
        Ok(LabelMap(map))
    }

    pub fn insert(&mut self, from: &str, to: &str) {
        self.0.insert(from.to_string(), to.to_string());
    }

    pub fn get(&self, label: &str) -> Option<&str> {
        self.0.get(label).map(String::as_str)
    }

    pub fn apply<'a>(&'a self, label: &'a str) -> &'a str {
        self.get(label).unwrap_or(label)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

impl FromIterator<(String, String)> for LabelMap {
    fn from_iter<I: IntoIterator<Item = (String, String)>>(iter: I) -> Self {
        LabelMap(iter.into_iter().collect())
    }
}
