use std::collections::BTreeMap;

use crate::metrics::{slice_rows, MetricReport, ScoredRecord};

/// One report per endpoint, sliced the same way as the pooled report.
pub fn endpoint_breakdown(records: &[ScoredRecord], runs: u32) -> BTreeMap<String, MetricReport> {
    let mut by_ep: BTreeMap<&str, Vec<&ScoredRecord>> = BTreeMap::new();
    for r in records {
        by_ep.entry(r.endpoint.as_str()).or_default().push(r);
    }
    by_ep
        .into_iter()
        .map(|(ep, recs)| {
            let rows = slice_rows(&recs, runs, Some(ep));
            (ep.to_string(), MetricReport { rows })
        })
        .collect()
}
