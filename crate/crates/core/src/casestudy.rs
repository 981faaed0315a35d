//! Construction-label distributions over child age, split by speaker.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conllu::SpeakerRole;
use crate::cxntag::{CxnLabel, TaggedUtterance};

pub const DEFAULT_BIN_WIDTH: u32 = 3;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("bin width must be at least one month")]
    ZeroWidth,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("curve row {row}: {message}")]
    Row { row: usize, message: String },
}

/// Label counts for one speaker in one age bin `[start, start + width)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinnedDistribution {
    pub bin_start_months: u32,
    pub bin_width_months: u32,
    pub speaker: SpeakerRole,
    pub counts: BTreeMap<CxnLabel, usize>,
    pub n_utterances: usize,
}

impl BinnedDistribution {
    pub fn proportions(&self) -> BTreeMap<CxnLabel, f64> {
        clausal_proportions(self, true)
    }

    /// The same bin with FOR, FRA and X removed.
    pub fn clausal_only(&self) -> BinnedDistribution {
        let counts: BTreeMap<CxnLabel, usize> = self
            .counts
            .iter()
            .filter(|(l, _)| !l.is_nonclausal())
            .map(|(l, c)| (*l, *c))
            .collect();
        BinnedDistribution {
            n_utterances: counts.values().sum(),
            counts,
            ..self.clone()
        }
    }
}

/// Result of [`bin_by_age`]. `unbinned` counts utterances without an age
/// or from a speaker other than CS/CDS.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AgeBinning {
    pub bins: Vec<BinnedDistribution>,
    pub unbinned: usize,
}

impl AgeBinning {
    pub fn n_binned(&self) -> usize {
        self.bins.iter().map(|b| b.n_utterances).sum()
    }
}

/// Group utterances into half-open bins of `width_months` by the floor of
/// the child's age, one distribution per (bin, speaker), ordered by bin
/// then speaker.
pub fn bin_by_age(tagged: &[TaggedUtterance], width_months: u32) -> Result<AgeBinning, CurveError> {
    if width_months == 0 {
        return Err(CurveError::ZeroWidth);
    }
    type Group = (SpeakerRole, BTreeMap<CxnLabel, usize>);
    let mut groups: BTreeMap<(u32, &'static str), Group> = BTreeMap::new();
    let mut unbinned = 0;
    for t in tagged {
        let age = match (t.speaker_role, t.child_age_months) {
            (SpeakerRole::Cs | SpeakerRole::Cds, Some(age)) if age.is_finite() && age >= 0.0 => age,
            _ => {
                unbinned += 1;
                continue;
            }
        };
        let start = (age / width_months as f64).floor() as u32 * width_months;
        let entry = groups
            .entry((start, t.speaker_role.as_str()))
            .or_insert_with(|| (t.speaker_role, BTreeMap::new()));
        *entry.1.entry(t.label).or_default() += 1;
    }
    let bins = groups
        .into_iter()
        .map(|((start, _), (speaker, counts))| BinnedDistribution {
            bin_start_months: start,
            bin_width_months: width_months,
            speaker,
            n_utterances: counts.values().sum(),
            counts,
        })
        .collect();
    Ok(AgeBinning { bins, unbinned })
}

/// Label proportions. Without `include_nonclausal`, FOR, FRA and X are
/// dropped and the rest renormalized. Empty when nothing remains.
pub fn clausal_proportions(
    dist: &BinnedDistribution,
    include_nonclausal: bool,
) -> BTreeMap<CxnLabel, f64> {
    let kept: Vec<(CxnLabel, usize)> = dist
        .counts
        .iter()
        .filter(|(l, _)| include_nonclausal || !l.is_nonclausal())
        .map(|(l, c)| (*l, *c))
        .collect();
    let total: usize = kept.iter().map(|(_, c)| c).sum();
    if total == 0 {
        return BTreeMap::new();
    }
    kept.into_iter()
        .map(|(l, c)| (l, c as f64 / total as f64))
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
struct CurveRow {
    bin_start: u32,
    speaker: SpeakerRole,
    label: CxnLabel,
    count: usize,
    proportion: f64,
    n_utterances: usize,
}

/// Write long-format CSV: one row per non-zero label, ordered by bin,
/// speaker and label name.
pub fn emit_curves<W: Write>(bins: &[BinnedDistribution], sink: W) -> Result<(), CurveError> {
    let mut rows: Vec<CurveRow> = Vec::new();
    for b in bins {
        for (label, count) in b.counts.iter().filter(|(_, c)| **c > 0) {
            rows.push(CurveRow {
                bin_start: b.bin_start_months,
                speaker: b.speaker,
                label: *label,
                count: *count,
                proportion: *count as f64 / b.n_utterances as f64,
                n_utterances: b.n_utterances,
            });
        }
    }
    rows.sort_by(|a, b| {
        (a.bin_start, a.speaker.as_str(), a.label.as_str()).cmp(&(
            b.bin_start,
            b.speaker.as_str(),
            b.label.as_str(),
        ))
    });
    let mut writer = csv::Writer::from_writer(sink);
    if rows.is_empty() {
        writer.write_record([
            "bin_start",
            "speaker",
            "label",
            "count",
            "proportion",
            "n_utterances",
        ])?;
    }
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Read back the output of [`emit_curves`].
pub fn parse_curves<R: Read>(
    source: R,
    width_months: u32,
) -> Result<Vec<BinnedDistribution>, CurveError> {
    let mut reader = csv::Reader::from_reader(source);
    let mut bins: Vec<BinnedDistribution> = Vec::new();
    for (i, row) in reader.deserialize::<CurveRow>().enumerate() {
        let row = row?;
        let same_bin = bins
            .last()
            .is_some_and(|b| b.bin_start_months == row.bin_start && b.speaker == row.speaker);
        if !same_bin {
            bins.push(BinnedDistribution {
                bin_start_months: row.bin_start,
                bin_width_months: width_months,
                speaker: row.speaker,
                counts: BTreeMap::new(),
                n_utterances: row.n_utterances,
            });
        }
        let bin = bins.last_mut().expect("pushed above");
        if bin.n_utterances != row.n_utterances {
            return Err(CurveError::Row {
                row: i + 1,
                message: "inconsistent n_utterances within a bin".into(),
            });
        }
        bin.counts.insert(row.label, row.count);
    }
    for b in &mut bins {
        b.counts.retain(|_, c| *c > 0);
    }
    Ok(bins)
}
