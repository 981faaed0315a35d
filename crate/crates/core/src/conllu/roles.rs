use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ConlluError;

/// Speaker register of an utterance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SpeakerRole {
    /// Child speech.
    #[serde(rename = "CS")]
    Cs,
    /// Child-directed speech.
    #[serde(rename = "CDS")]
    Cds,
    #[serde(rename = "OTHER")]
    Other,
}

impl SpeakerRole {
    pub fn as_str(self) -> &'static str {
        match self {
            SpeakerRole::Cs => "CS",
            SpeakerRole::Cds => "CDS",
            SpeakerRole::Other => "OTHER",
        }
    }
}

impl fmt::Display for SpeakerRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpeakerRole {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "CS" => Ok(SpeakerRole::Cs),
            "CDS" => Ok(SpeakerRole::Cds),
            "OTHER" => Ok(SpeakerRole::Other),
            _ => Err(format!("unknown speaker role {:?}", s)),
        }
    }
}

const ADULT_CODES: &[&str] = &["mot", "fat", "adu", "inv", "caregiver", "adult"];

/// Maps `# speaker` codes onto speaker roles. Matching is
/// case-insensitive.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoleMap {
    overrides: BTreeMap<String, SpeakerRole>,
}

impl RoleMap {
    /// Load overrides from a two-column TSV file (`code TAB CS|CDS|OTHER`).
    /// Codes not listed fall back to the built-in rules.
    pub fn from_tsv<R: BufRead>(reader: R) -> Result<Self, ConlluError> {
        let mut overrides = BTreeMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut cols = trimmed.split('\t');
            let (Some(code), Some(role), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(ConlluError::Mapping {
                    line: idx + 1,
                    message: "expected two tab-separated columns".into(),
                });
            };
            let role = role
                .trim()
                .parse()
                .map_err(|message| ConlluError::Mapping {
                    line: idx + 1,
                    message,
                })?;
            overrides.insert(code.trim().to_lowercase(), role);
        }
        Ok(RoleMap { overrides })
    }

    pub fn role(&self, code: &str) -> SpeakerRole {
        let code = code.trim().to_lowercase();
        if let Some(role) = self.overrides.get(&code) {
            return *role;
        }
        if code == "chi" {
            SpeakerRole::Cs
        } else if ADULT_CODES.contains(&code.as_str()) {
            SpeakerRole::Cds
        } else {
            SpeakerRole::Other
        }
    }
}

/// Parse a CHAT age `Y;MM.DD` into months. Days count as fractions of
/// an average month (30.4375 days). Month and day parts are optional.
pub fn parse_child_age(value: &str) -> Option<f64> {
    let value = value.trim();
    let (years, rest) = value.split_once(';')?;
    let years: u32 = years.trim().parse().ok()?;
    let (months, days) = match rest.split_once('.') {
        Some((m, d)) => (m, d),
        None => (rest, ""),
    };
    let months: u32 = if months.is_empty() {
        0
    } else {
        months.parse().ok()?
    };
    let days: u32 = if days.is_empty() {
        0
    } else {
        days.parse().ok()?
    };
    if months >= 12 || days > 31 {
        return None;
    }
    Some(f64::from(years * 12 + months) + f64::from(days) / 30.4375)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_roles() {
        let map = RoleMap::default();
        assert_eq!(map.role("CHI"), SpeakerRole::Cs);
        assert_eq!(map.role("MOT"), SpeakerRole::Cds);
        assert_eq!(map.role("caregiver"), SpeakerRole::Cds);
        assert_eq!(map.role("Adult"), SpeakerRole::Cds);
        assert_eq!(map.role("SIS"), SpeakerRole::Other);
    }

    #[test]
    fn overrides_take_precedence() {
        let map = RoleMap::from_tsv("SIS\tCDS\n# comment\nchi\tOTHER\n".as_bytes()).unwrap();
        assert_eq!(map.role("sis"), SpeakerRole::Cds);
        assert_eq!(map.role("CHI"), SpeakerRole::Other);
        assert_eq!(map.role("MOT"), SpeakerRole::Cds);
    }

    #[test]
    fn bad_role_file() {
        assert!(RoleMap::from_tsv("SIS\tSIBLING\n".as_bytes()).is_err());
        assert!(RoleMap::from_tsv("SIS\n".as_bytes()).is_err());
    }

    #[test]
    fn chat_ages() {
        assert_eq!(parse_child_age("2;06."), Some(30.0));
        assert_eq!(parse_child_age("2;"), Some(24.0));
        assert_eq!(parse_child_age("3;00.00"), Some(36.0));
        let age = parse_child_age("2;01.15").unwrap();
        assert!((age - (25.0 + 15.0 / 30.4375)).abs() < 1e-12);
        assert_eq!(parse_child_age("2;13.00"), None);
        assert_eq!(parse_child_age("two"), None);
    }
}
