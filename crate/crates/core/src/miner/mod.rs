//! Toxicity-cliff mining: similarity pairing, SAFE fragment comparison,
//! structural and property filters, and the scaffold split.

mod config;
mod filters;
mod iqr;
mod pair;
mod pairing;
mod split;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use toxcliff_chem::{encode_safe, CanonicalSmiles, SafeString};

pub use config::{MinerConfig, SplitScaffold};
pub use filters::{
    apply_property_filters, apply_structural_filters, derive_cuts, property_deltas,
    property_violation, structural_violation, Cuts, FilterOutcome, PropertyBounds,
};
pub use iqr::{iqr_bounds, is_outlier, quantile};
pub use pair::{diff_fragments, pair_id, Candidate, CliffPair, FragmentSets, MatchCriterion};
pub use pairing::pair_candidates;
pub use split::{scaffold_split, split_key, SplitName, SplitResult};

use crate::dataset::{LabeledMolecule, Reason, Rejection};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub molecules: usize,
    pub endpoints: usize,
    pub candidates: usize,
    pub safe_converted: usize,
    pub post_structural: usize,
    pub post_property: usize,
}

#[derive(Clone, Debug, Default)]
pub struct MineOutput {
    pub pairs: Vec<CliffPair>,
    pub rejections: Vec<Rejection>,
    pub counts: StageCounts,
    pub cuts: Option<Cuts>,
    pub property_bounds: Option<PropertyBounds>,
}

/// Pairs every endpoint, converts to SAFE and applies both filter stages.
/// Fragment-length, fragment-count and property fences are estimated over
/// the pooled population of all endpoints.
pub fn mine(dataset: &[LabeledMolecule], cfg: &MinerConfig) -> MineOutput {
    let mut by_endpoint: BTreeMap<&str, Vec<LabeledMolecule>> = BTreeMap::new();
    for m in dataset {
        by_endpoint
            .entry(m.endpoint.as_str())
            .or_default()
            .push(m.clone());
    }
    let mut out = MineOutput::default();
    out.counts.molecules = dataset.len();
    out.counts.endpoints = by_endpoint.len();

    let candidates: Vec<Candidate> = by_endpoint
        .values()
        .flat_map(|mols| pair_candidates(mols, cfg))
        .collect();
    out.counts.candidates = candidates.len();

    let mut structures: Vec<&CanonicalSmiles> = candidates
        .iter()
        .flat_map(|c| [&c.toxic.smiles, &c.nontoxic.smiles])
        .collect();
    structures.sort();
    structures.dedup();
    let safe: HashMap<&CanonicalSmiles, Result<SafeString, String>> = structures
        .par_iter()
        .map(|s| (*s, encode_safe(s).map_err(|e| e.to_string())))
        .collect();

    let mut pairs = Vec::with_capacity(candidates.len());
    for c in candidates.iter() {
        let ts = &safe[&c.toxic.smiles];
        let ns = &safe[&c.nontoxic.smiles];
        let built = match (ts, ns) {
            (Ok(t), Ok(n)) => CliffPair::from_candidate(c.clone(), t.clone(), n.clone())
                .map_err(|e| e.to_string()),
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        };
        match built {
            Ok(p) => pairs.push(p),
            Err(detail) => out.rejections.push(Rejection {
                reason: Reason::SafeEncoding,
                subject: pair_id(
                    &c.toxic.endpoint,
                    c.toxic.smiles.as_str(),
                    c.nontoxic.smiles.as_str(),
                ),
                detail,
            }),
        }
    }
    out.counts.safe_converted = pairs.len();

    let (structural, cuts) = apply_structural_filters(pairs, cfg);
    out.cuts = Some(cuts);
    out.counts.post_structural = structural.kept.len();
    out.rejections.extend(structural.rejected);

    let (property, bounds) = apply_property_filters(structural.kept, cfg);
    out.property_bounds = bounds;
    out.counts.post_property = property.kept.len();
    out.rejections.extend(property.rejected);

    out.pairs = property.kept;
    out.pairs.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out
}
