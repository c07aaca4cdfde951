use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use toxcliff_core::analysis::{
    alert_summary, align_outcomes, case_composition, endpoint_breakdown, load_alerts, AlertSet,
    AlertSummary, CaseDistribution,
};
use toxcliff_core::metrics::{aggregate, MetricReport, ScoredRecord};
use toxcliff_core::miner::CliffPair;

use crate::config::HarnessConfig;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseSummary {
    pub success: CaseDistribution,
    pub failure: CaseDistribution,
    /// Aligned (pair, run) samples.
    pub samples: usize,
    /// Keys dropped because a task was missing.
    pub excluded: usize,
}

/// Everything the report renders.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisBundle {
    pub runs: u32,
    pub main: MetricReport,
    pub endpoints: BTreeMap<String, MetricReport>,
    pub cases: Option<CaseSummary>,
    pub alerts: Vec<AlertSummary>,
}

pub fn case_summary(records: &[ScoredRecord]) -> Result<CaseSummary> {
    let (aligned, excluded) = align_outcomes(records);
    let (success, failure) = case_composition(&aligned)?;
    Ok(CaseSummary {
        success,
        failure,
        samples: aligned.len(),
        excluded,
    })
}

/// Aggregates, case composition and, when an alert file is configured,
/// the alert overlap of each endpoint's most frequent toxic fragments.
pub fn analyze(
    cfg: &HarnessConfig,
    records: &[ScoredRecord],
    pairs: &[CliffPair],
) -> Result<AnalysisBundle> {
    let mut bundle = AnalysisBundle {
        runs: cfg.runs,
        main: aggregate(records, cfg.runs),
        endpoints: endpoint_breakdown(records, cfg.runs),
        cases: Some(case_summary(records)?),
        alerts: Vec::new(),
    };
    if let Some(path) = &cfg.analysis.alerts {
        let alerts = load_alerts(path)?;
        let endpoints: BTreeSet<&str> = pairs.iter().map(|p| p.endpoint()).collect();
        for ep in endpoints {
            match AlertSet::for_endpoint(&alerts, Some(ep)) {
                Ok(set) => bundle.alerts.push(alert_summary(pairs, ep, &set, cfg.analysis.top_k)),
                Err(e) => log::warn!("alert overlap skipped for {ep}: {e}"),
            }
        }
    }
    Ok(bundle)
}
