//! Outcome-case composition, structural-alert overlap and per-endpoint
//! breakdowns.

mod alerts;
mod cases;
mod endpoints;

pub use alerts::{
    alert_overlap, alert_summary, load_alerts, top_toxic_fragments, AlertRecord, AlertSet,
    AlertSummary, OverlapBand, OverlapResult,
};
pub use cases::{
    align_outcomes, case_composition, load_case_fixture, outcome_case, CaseDistribution,
    CaseLabel, OutcomeBits, T3Group,
};
pub use endpoints::endpoint_breakdown;
