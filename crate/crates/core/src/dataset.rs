//! Labelled molecule records and CSV ingestion.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toxcliff_chem::{canonicalize, CanonicalSmiles};

use crate::error::{CoreError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Label {
    Nontoxic,
    Toxic,
}

impl From<Label> for u8 {
    fn from(l: Label) -> u8 {
        match l {
            Label::Nontoxic => 0,
            Label::Toxic => 1,
        }
    }
}

impl TryFrom<u8> for Label {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            0 => Ok(Label::Nontoxic),
            1 => Ok(Label::Toxic),
            _ => Err(format!("label must be 0 or 1, got {v}")),
        }
    }
}

impl Label {
    /// Accepts "0"/"1" and their float spellings ("1.0").
    pub fn parse(text: &str) -> Option<Label> {
        let v: f64 = text.trim().parse().ok()?;
        if v == 0.0 {
            Some(Label::Nontoxic)
        } else if v == 1.0 {
            Some(Label::Toxic)
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabeledMolecule {
    pub smiles: CanonicalSmiles,
    pub label: Label,
    pub endpoint: String,
    pub source: String,
}

/// Why an input row or a pair was dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    BadLabel,
    BadSmiles,
    EmptyEndpoint,
    DuplicateRow,
    SafeEncoding,
    NoCommonFragment,
    NoFragmentDifference,
    FragmentTooLong,
    TooManyFragments,
    DescriptorFailure,
    PropertyOutlier,
    EmptyToxicOnly,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok();
        f.write_str(s.as_ref().and_then(|v| v.as_str()).unwrap_or("unknown"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    pub reason: Reason,
    /// Row number (1-based, header excluded) or pair id.
    pub subject: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Ingested {
    pub molecules: Vec<LabeledMolecule>,
    pub rejections: Vec<Rejection>,
}

#[derive(Deserialize)]
struct Row {
    smiles: String,
    label: String,
    endpoint: String,
    source: String,
}

const COLUMNS: [&str; 4] = ["smiles", "label", "endpoint", "source"];

/// Reads `smiles,label,endpoint,source` rows. Bad rows are dropped and
/// reported; exact duplicates keep their first occurrence.
pub fn ingest_reader<R: std::io::Read>(reader: R) -> Result<Ingested> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let got: Vec<&str> = headers.iter().collect();
    if got != COLUMNS {
        return Err(CoreError::Schema(format!(
            "expected columns {}, found {}",
            COLUMNS.join(","),
            got.join(",")
        )));
    }
    let mut out = Ingested::default();
    let mut seen = HashSet::new();
    for (i, row) in rdr.deserialize::<Row>().enumerate() {
        let line = (i + 1).to_string();
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                out.rejections.push(Rejection {
                    reason: Reason::BadSmiles,
                    subject: line,
                    detail: e.to_string(),
                });
                continue;
            }
        };
        let reject = |reason, detail: String| Rejection {
            reason,
            subject: line.clone(),
            detail,
        };
        let Some(label) = Label::parse(&row.label) else {
            out.rejections
                .push(reject(Reason::BadLabel, row.label.clone()));
            continue;
        };
        if row.endpoint.is_empty() {
            out.rejections
                .push(reject(Reason::EmptyEndpoint, String::new()));
            continue;
        }
        let smiles = match canonicalize(&row.smiles) {
            Ok(s) => s,
            Err(e) => {
                out.rejections
                    .push(reject(Reason::BadSmiles, e.to_string()));
                continue;
            }
        };
        let mol = LabeledMolecule {
            smiles,
            label,
            endpoint: row.endpoint,
            source: row.source,
        };
        if !seen.insert((mol.smiles.clone(), mol.label, mol.endpoint.clone())) {
            out.rejections
                .push(reject(Reason::DuplicateRow, mol.smiles.to_string()));
            continue;
        }
        out.molecules.push(mol);
    }
    for r in &out.rejections {
        log::warn!("row {} dropped ({}): {}", r.subject, r.reason, r.detail);
    }
    if out.molecules.is_empty() {
        return Err(CoreError::EmptyDataset);
    }
    Ok(out)
}

pub fn ingest_dataset(path: &Path) -> Result<Ingested> {
    ingest_reader(std::fs::File::open(path)?)
}
