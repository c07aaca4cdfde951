use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toxcliff_chem::{
    canonicalize, fingerprint, strip_attachments, tanimoto, CanonicalSmiles, Fingerprint,
    FingerprintKind, FragmentToken,
};

use crate::error::{CoreError, Result};
use crate::miner::CliffPair;

const ALERT_BITS: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapBand {
    ExactOrHigh,
    Moderate,
    Low,
}

impl OverlapBand {
    pub fn of(similarity: f64) -> OverlapBand {
        if similarity >= 0.8 {
            OverlapBand::ExactOrHigh
        } else if similarity >= 0.5 {
            OverlapBand::Moderate
        } else {
            OverlapBand::Low
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlertRecord {
    pub alert_smiles: String,
    pub endpoint: String,
    pub source: String,
}

/// Reads `alert_smiles,endpoint,source`. Rows whose SMILES do not parse are
/// skipped with a warning.
pub fn load_alerts(path: &Path) -> Result<Vec<AlertRecord>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in rdr.deserialize::<AlertRecord>() {
        let row = row?;
        if canonicalize(&row.alert_smiles).is_err() {
            log::warn!("skipping unparseable alert {}", row.alert_smiles);
            continue;
        }
        out.push(row);
    }
    Ok(out)
}

/// Canonical alerts with precomputed fingerprints.
#[derive(Clone, Debug)]
pub struct AlertSet {
    alerts: Vec<(CanonicalSmiles, Fingerprint)>,
}

impl AlertSet {
    pub fn new<'a>(smiles: impl IntoIterator<Item = &'a str>) -> Result<AlertSet> {
        let mut alerts = Vec::new();
        for s in smiles {
            let c = canonicalize(s)?;
            let fp = fingerprint(&c, FingerprintKind::Circular, ALERT_BITS)?;
            alerts.push((c, fp));
        }
        if alerts.is_empty() {
            return Err(CoreError::EmptyAlertSet);
        }
        Ok(AlertSet { alerts })
    }

    /// Alerts for one endpoint; an empty endpoint filter keeps all.
    pub fn for_endpoint(records: &[AlertRecord], endpoint: Option<&str>) -> Result<AlertSet> {
        AlertSet::new(
            records
                .iter()
                .filter(|r| endpoint.map_or(true, |e| r.endpoint == e))
                .map(|r| r.alert_smiles.as_str()),
        )
    }

    pub fn len(&self) -> usize {
        self.alerts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alerts.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapResult {
    pub fragment: FragmentToken,
    pub stripped: CanonicalSmiles,
    pub exact_match: bool,
    pub max_similarity: f64,
    pub best_alert: CanonicalSmiles,
    pub band: OverlapBand,
}

/// Compares a fragment, attachment points removed, with every alert. Exact
/// canonical matches score 1; otherwise the best circular-fingerprint
/// Tanimoto wins, first alert on ties.
pub fn alert_overlap(fragment: &FragmentToken, alerts: &AlertSet) -> Result<OverlapResult> {
    if alerts.is_empty() {
        return Err(CoreError::EmptyAlertSet);
    }
    let unparseable = || CoreError::UnparseableFragment(fragment.as_str().to_string());
    let stripped = strip_attachments(fragment).map_err(|_| unparseable())?;
    if stripped.is_empty() {
        return Err(unparseable());
    }
    if let Some((a, _)) = alerts.alerts.iter().find(|(a, _)| *a == stripped) {
        return Ok(OverlapResult {
            fragment: fragment.clone(),
            best_alert: a.clone(),
            stripped,
            exact_match: true,
            max_similarity: 1.0,
            band: OverlapBand::ExactOrHigh,
        });
    }
    let fp = fingerprint(&stripped, FingerprintKind::Circular, ALERT_BITS).map_err(|_| unparseable())?;
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, (_, afp)) in alerts.alerts.iter().enumerate() {
        let s = tanimoto(&fp, afp)?;
        if s > best.1 {
            best = (i, s);
        }
    }
    Ok(OverlapResult {
        fragment: fragment.clone(),
        stripped,
        exact_match: false,
        max_similarity: best.1,
        best_alert: alerts.alerts[best.0].0.clone(),
        band: OverlapBand::of(best.1),
    })
}

/// The `k` most frequent toxic-only fragments of one endpoint, counted with
/// multiplicity across pairs; ties break lexically.
pub fn top_toxic_fragments(pairs: &[CliffPair], endpoint: &str, k: usize) -> Vec<(FragmentToken, usize)> {
    let mut counts: BTreeMap<FragmentToken, usize> = BTreeMap::new();
    for p in pairs.iter().filter(|p| p.endpoint() == endpoint) {
        for (t, c) in p.fragments.toxic_only.iter() {
            *counts.entry(t.clone()).or_default() += c;
        }
    }
    let mut ranked: Vec<_> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    ranked
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AlertSummary {
    pub endpoint: String,
    pub results: Vec<(OverlapResult, usize)>,
    /// Fragments that could not be compared, with the reason.
    pub skipped: Vec<(FragmentToken, String)>,
    pub bands: BTreeMap<OverlapBand, usize>,
}

/// Overlap of the endpoint's top fragments with an alert set.
pub fn alert_summary(
    pairs: &[CliffPair],
    endpoint: &str,
    alerts: &AlertSet,
    k: usize,
) -> AlertSummary {
    let mut out = AlertSummary {
        endpoint: endpoint.to_string(),
        ..AlertSummary::default()
    };
    for (frag, count) in top_toxic_fragments(pairs, endpoint, k) {
        match alert_overlap(&frag, alerts) {
            Ok(r) => {
                *out.bands.entry(r.band).or_default() += 1;
                out.results.push((r, count));
            }
            Err(e) => out.skipped.push((frag, e.to_string())),
        }
    }
    out
}
