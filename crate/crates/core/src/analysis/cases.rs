use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::metrics::ScoredRecord;
use crate::qa::TaskId;

/// Correctness of the three tasks for one pair in one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OutcomeBits {
    pub t1: u8,
    pub t2: u8,
    pub t3: u8,
}

impl OutcomeBits {
    pub fn new(t1: u8, t2: u8, t3: u8) -> Self {
        OutcomeBits { t1, t2, t3 }
    }
}

/// "C" followed by the T1, T2 and T3 bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CaseLabel(String);

impl CaseLabel {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn parse(text: &str) -> Result<(CaseLabel, OutcomeBits)> {
        let b = text.as_bytes();
        if b.len() != 4 || b[0] != b'C' {
            return Err(CoreError::InvalidBits);
        }
        let bit = |c: u8| c.checked_sub(b'0').filter(|v| *v <= 1).ok_or(CoreError::InvalidBits);
        let bits = OutcomeBits::new(bit(b[1])?, bit(b[2])?, bit(b[3])?);
        Ok((outcome_case(bits)?, bits))
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn outcome_case(bits: OutcomeBits) -> Result<CaseLabel> {
    if bits.t1 > 1 || bits.t2 > 1 || bits.t3 > 1 {
        return Err(CoreError::InvalidBits);
    }
    Ok(CaseLabel(format!("C{}{}{}", bits.t1, bits.t2, bits.t3)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum T3Group {
    #[serde(rename = "T3=1")]
    Success,
    #[serde(rename = "T3=0")]
    Failure,
}

impl T3Group {
    pub fn bit(self) -> u8 {
        match self {
            T3Group::Success => 1,
            T3Group::Failure => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            T3Group::Success => "T3=1",
            T3Group::Failure => "T3=0",
        }
    }

    /// The four cases that can occur in this group.
    pub fn cases(self) -> [CaseLabel; 4] {
        let t3 = self.bit();
        [(0, 0), (1, 0), (0, 1), (1, 1)].map(|(t1, t2)| CaseLabel(format!("C{t1}{t2}{t3}")))
    }
}

/// Case proportions within one T3 group. Empty groups have no entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseDistribution {
    pub group: T3Group,
    pub samples: usize,
    pub proportions: BTreeMap<CaseLabel, f64>,
}

impl CaseDistribution {
    pub fn is_empty(&self) -> bool {
        self.proportions.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.proportions.values().sum()
    }
}

/// Splits keyed samples by T3 outcome and reports each group's case mix.
pub fn case_composition(
    samples: &[(String, OutcomeBits)],
) -> Result<(CaseDistribution, CaseDistribution)> {
    let mut seen = HashMap::new();
    for (key, bits) in samples {
        outcome_case(*bits)?;
        if seen.insert(key.as_str(), ()).is_some() {
            return Err(CoreError::DuplicateSample(key.clone()));
        }
    }
    let group = |g: T3Group| {
        let members: Vec<&OutcomeBits> = samples
            .iter()
            .map(|(_, b)| b)
            .filter(|b| b.t3 == g.bit())
            .collect();
        let mut proportions = BTreeMap::new();
        if !members.is_empty() {
            let mut counts: BTreeMap<CaseLabel, usize> =
                g.cases().into_iter().map(|c| (c, 0)).collect();
            for b in &members {
                *counts.get_mut(&outcome_case(**b).unwrap()).unwrap() += 1;
            }
            let n = members.len() as f64;
            proportions = counts.into_iter().map(|(c, k)| (c, k as f64 / n)).collect();
        }
        CaseDistribution {
            group: g,
            samples: members.len(),
            proportions,
        }
    };
    Ok((group(T3Group::Success), group(T3Group::Failure)))
}

/// Aligned outcome bits keyed `"{pair_id}#{run}"`, plus the number of
/// (pair, run) keys dropped because a task was missing.
pub fn align_outcomes(records: &[ScoredRecord]) -> (Vec<(String, OutcomeBits)>, usize) {
    let mut by_key: BTreeMap<(String, u32), [Option<u8>; 3]> = BTreeMap::new();
    for r in records {
        let slot = match r.task {
            TaskId::T1 => 0,
            TaskId::T2 => 1,
            TaskId::T3 => 2,
        };
        by_key.entry((r.pair_id.clone(), r.run)).or_default()[slot] = Some(u8::from(r.scores.correct()));
    }
    let mut out = Vec::new();
    let mut excluded = 0;
    for ((pair, run), bits) in by_key {
        match bits {
            [Some(t1), Some(t2), Some(t3)] => out.push((format!("{pair}#{run}"), OutcomeBits { t1, t2, t3 })),
            _ => excluded += 1,
        }
    }
    if excluded > 0 {
        log::info!("{excluded} pair/run keys lack one of the three tasks and were excluded");
    }
    (out, excluded)
}

#[derive(Deserialize)]
struct FixtureRow {
    group: String,
    case: String,
    proportion: f64,
}

/// Reads a published composition (`group,case,proportion`). Every listed
/// case must belong to its group and each group must sum to 1 within the
/// rounding of the source (1e-6).
pub fn load_case_fixture(path: &Path) -> Result<(CaseDistribution, CaseDistribution)> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut groups = [T3Group::Success, T3Group::Failure].map(|g| CaseDistribution {
        group: g,
        samples: 0,
        proportions: BTreeMap::new(),
    });
    for row in rdr.deserialize::<FixtureRow>() {
        let row = row?;
        let g = match row.group.as_str() {
            "T3=1" => 0,
            "T3=0" => 1,
            other => return Err(CoreError::Schema(format!("unknown group {other}"))),
        };
        let (label, bits) = CaseLabel::parse(&row.case)?;
        if bits.t3 != groups[g].group.bit() {
            return Err(CoreError::Schema(format!("{label} does not belong to {}", row.group)));
        }
        groups[g].proportions.insert(label, row.proportion);
    }
    for g in &groups {
        if !g.is_empty() && (g.total() - 1.0).abs() > 1e-6 {
            return Err(CoreError::Schema(format!(
                "{} proportions sum to {}",
                g.group.name(),
                g.total()
            )));
        }
    }
    let [success, failure] = groups;
    Ok((success, failure))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(outcome_case(OutcomeBits::new(1, 0, 1)).unwrap().as_str(), "C101");
        assert_eq!(outcome_case(OutcomeBits::new(0, 0, 0)).unwrap().as_str(), "C000");
        assert_eq!(outcome_case(OutcomeBits::new(1, 1, 1)).unwrap().as_str(), "C111");
        assert!(outcome_case(OutcomeBits::new(2, 0, 0)).is_err());
        assert!(CaseLabel::parse("C121").is_err());
        assert_eq!(CaseLabel::parse("C011").unwrap().1, OutcomeBits::new(0, 1, 1));
    }

    #[test]
    fn single_success() {
        let (ok, fail) = case_composition(&[("p".into(), OutcomeBits::new(1, 1, 1))]).unwrap();
        assert_eq!(ok.proportions[&CaseLabel("C111".into())], 1.0);
        assert_eq!(ok.proportions.len(), 4);
        assert!(fail.is_empty());
    }

    #[test]
    fn duplicate_key_rejected() {
        let s = vec![
            ("p".to_string(), OutcomeBits::new(1, 1, 1)),
            ("p".to_string(), OutcomeBits::new(0, 1, 1)),
        ];
        assert!(matches!(case_composition(&s), Err(CoreError::DuplicateSample(_))));
    }
}
