use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use toxcliff_chem::{descriptors, CanonicalSmiles, DescriptorVector};

use super::config::MinerConfig;
use super::iqr::{iqr_bounds, is_outlier};
use super::pair::CliffPair;
use crate::dataset::{Reason, Rejection};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cuts {
    /// Diff fragments must be strictly shorter than this.
    pub frag_len_cut: usize,
    /// Maximum toxic-only and nontoxic-only fragment counts.
    pub frag_count_cut: usize,
    pub derived: bool,
}

#[derive(Clone, Debug, Default)]
pub struct FilterOutcome {
    pub kept: Vec<CliffPair>,
    pub rejected: Vec<Rejection>,
}

fn reject(pair: &CliffPair, reason: Reason, detail: String) -> Rejection {
    Rejection {
        reason,
        subject: pair.id.clone(),
        detail,
    }
}

fn diff_lengths(pair: &CliffPair) -> impl Iterator<Item = usize> + '_ {
    let f = &pair.fragments;
    f.toxic_only
        .iter()
        .chain(f.nontoxic_only.iter())
        .map(|(t, _)| t.len())
}

fn basic_violation(pair: &CliffPair) -> Option<Reason> {
    let f = &pair.fragments;
    if f.n_common() == 0 {
        Some(Reason::NoCommonFragment)
    } else if f.n_toxic_only() == 0 && f.n_nontoxic_only() == 0 {
        Some(Reason::NoFragmentDifference)
    } else {
        None
    }
}

/// First structural rule the pair breaks under `cuts`, if any.
pub fn structural_violation(pair: &CliffPair, cuts: &Cuts) -> Option<Reason> {
    if let Some(r) = basic_violation(pair) {
        return Some(r);
    }
    let f = &pair.fragments;
    if diff_lengths(pair).any(|l| l >= cuts.frag_len_cut) {
        Some(Reason::FragmentTooLong)
    } else if f.n_toxic_only() > cuts.frag_count_cut || f.n_nontoxic_only() > cuts.frag_count_cut {
        Some(Reason::TooManyFragments)
    } else {
        None
    }
}

/// Length and count cuts from the upper IQR fence of the pairs that pass the
/// shared-core and non-trivial-edit rules. Falls back to the configured cuts
/// when there is nothing to measure.
pub fn derive_cuts(pairs: &[CliffPair], cfg: &MinerConfig) -> Cuts {
    let configured = Cuts {
        frag_len_cut: cfg.frag_len_cut,
        frag_count_cut: cfg.frag_count_cut,
        derived: false,
    };
    let base: Vec<&CliffPair> = pairs
        .iter()
        .filter(|p| basic_violation(p).is_none())
        .collect();
    let lengths: Vec<f64> = base
        .iter()
        .flat_map(|p| {
            let f = &p.fragments;
            f.toxic_only
                .to_vec()
                .into_iter()
                .chain(f.nontoxic_only.to_vec())
        })
        .map(|t| t.len() as f64)
        .collect();
    let counts: Vec<f64> = base
        .iter()
        .flat_map(|p| {
            [
                p.fragments.n_toxic_only() as f64,
                p.fragments.n_nontoxic_only() as f64,
            ]
        })
        .collect();
    match (
        iqr_bounds(&lengths, cfg.iqr_k),
        iqr_bounds(&counts, cfg.iqr_k),
    ) {
        (Ok(len), Ok(cnt)) => Cuts {
            // integer lengths above the fence are exactly those >= floor(hi) + 1
            frag_len_cut: len.1.floor() as usize + 1,
            frag_count_cut: (cnt.1.floor() as usize).max(1),
            derived: true,
        },
        _ => configured,
    }
}

pub fn apply_structural_filters(pairs: Vec<CliffPair>, cfg: &MinerConfig) -> (FilterOutcome, Cuts) {
    let cuts = if cfg.derive_cuts_from_data {
        derive_cuts(&pairs, cfg)
    } else {
        Cuts {
            frag_len_cut: cfg.frag_len_cut,
            frag_count_cut: cfg.frag_count_cut,
            derived: false,
        }
    };
    let mut out = FilterOutcome::default();
    for p in pairs {
        match structural_violation(&p, &cuts) {
            None => out.kept.push(p),
            Some(reason) => {
                let f = &p.fragments;
                let detail = format!(
                    "common={} toxic_only={} nontoxic_only={}",
                    f.n_common(),
                    f.n_toxic_only(),
                    f.n_nontoxic_only()
                );
                out.rejected.push(reject(&p, reason, detail));
            }
        }
    }
    (out, cuts)
}

/// Per-descriptor fences over the population of |delta p|, in
/// [`DescriptorVector::NAMES`] order.
pub type PropertyBounds = [(f64, f64); 6];

pub fn property_deltas(pair: &CliffPair) -> Result<[f64; 6], toxcliff_chem::ChemError> {
    Ok(descriptors(&pair.toxic.smiles)?.abs_diff(&descriptors(&pair.nontoxic.smiles)?))
}

/// Index of the first descriptor whose delta falls outside its fence.
pub fn property_violation(deltas: &[f64; 6], bounds: &PropertyBounds) -> Option<usize> {
    (0..6).find(|&i| is_outlier(deltas[i], bounds[i]))
}

pub fn apply_property_filters(
    pairs: Vec<CliffPair>,
    cfg: &MinerConfig,
) -> (FilterOutcome, Option<PropertyBounds>) {
    let mut unique: Vec<CanonicalSmiles> = pairs
        .iter()
        .flat_map(|p| [p.toxic.smiles.clone(), p.nontoxic.smiles.clone()])
        .collect();
    unique.sort();
    unique.dedup();
    let cache: HashMap<CanonicalSmiles, Option<DescriptorVector>> = unique
        .into_par_iter()
        .map(|s| {
            let d = descriptors(&s).ok();
            (s, d)
        })
        .collect();
    let mut out = FilterOutcome::default();
    let mut measured = Vec::new();
    for p in pairs {
        match (&cache[&p.toxic.smiles], &cache[&p.nontoxic.smiles]) {
            (Some(a), Some(b)) => {
                let d = a.abs_diff(b);
                measured.push((p, d));
            }
            _ => out
                .rejected
                .push(reject(&p, Reason::DescriptorFailure, String::new())),
        }
    }
    if measured.is_empty() {
        return (out, None);
    }
    let mut bounds = [(0.0, 0.0); 6];
    for (i, b) in bounds.iter_mut().enumerate() {
        let col: Vec<f64> = measured.iter().map(|(_, d)| d[i]).collect();
        *b = iqr_bounds(&col, cfg.iqr_k).expect("non-empty");
    }
    for (p, d) in measured {
        match property_violation(&d, &bounds) {
            None => out.kept.push(p),
            Some(i) => {
                let detail = format!(
                    "{} delta {:.4} outside [{:.4}, {:.4}]",
                    DescriptorVector::NAMES[i],
                    d[i],
                    bounds[i].0,
                    bounds[i].1
                );
                out.rejected
                    .push(reject(&p, Reason::PropertyOutlier, detail));
            }
        }
    }
    (out, Some(bounds))
}
