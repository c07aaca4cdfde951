use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use toxcliff_chem::{
    fingerprint, murcko_scaffold, normalized_similarity, tanimoto, CanonicalSmiles, Fingerprint,
    FingerprintKind,
};

use super::config::MinerConfig;
use super::pair::{Candidate, MatchCriterion};
use crate::dataset::{Label, LabeledMolecule};

struct Prepared<'a> {
    mol: &'a LabeledMolecule,
    full: Option<Fingerprint>,
    /// `None` for acyclic molecules: the scaffold criterion does not apply.
    scaffold: Option<Fingerprint>,
}

fn prepare(mol: &LabeledMolecule, bits: usize) -> Prepared<'_> {
    let fp = |s: &CanonicalSmiles| fingerprint(s, FingerprintKind::Circular, bits).ok();
    let scaffold = murcko_scaffold(&mol.smiles)
        .ok()
        .filter(|s| !s.is_empty())
        .and_then(|s| fp(&s));
    Prepared {
        mol,
        full: fp(&mol.smiles),
        scaffold,
    }
}

fn score(t: &Prepared, n: &Prepared) -> BTreeMap<MatchCriterion, f64> {
    let mut scores = BTreeMap::new();
    if let (Some(a), Some(b)) = (&t.scaffold, &n.scaffold) {
        if let Ok(s) = tanimoto(a, b) {
            scores.insert(MatchCriterion::ScaffoldFp, s);
        }
    }
    if let (Some(a), Some(b)) = (&t.full, &n.full) {
        if let Ok(s) = tanimoto(a, b) {
            scores.insert(MatchCriterion::FullFp, s);
        }
    }
    scores.insert(
        MatchCriterion::StringSim,
        normalized_similarity(t.mol.smiles.as_str(), n.mol.smiles.as_str()),
    );
    scores
}

/// Every (toxic, nontoxic) combination of one endpoint that meets at least
/// one similarity criterion, sorted by (toxic, nontoxic) structure and
/// deduplicated on that key.
pub fn pair_candidates(dataset: &[LabeledMolecule], cfg: &MinerConfig) -> Vec<Candidate> {
    let prepared: Vec<Prepared> = dataset
        .par_iter()
        .map(|m| prepare(m, cfg.fingerprint_bits))
        .collect();
    let (toxic, nontoxic): (Vec<&Prepared>, Vec<&Prepared>) =
        prepared.iter().partition(|p| p.mol.label == Label::Toxic);
    let mut out: Vec<Candidate> = toxic
        .par_iter()
        .flat_map_iter(|t| {
            nontoxic.iter().filter_map(move |n| {
                let scores = score(t, n);
                let passed: BTreeSet<MatchCriterion> = scores
                    .iter()
                    .filter(|(_, &s)| s >= cfg.sim_threshold)
                    .map(|(&c, _)| c)
                    .collect();
                (!passed.is_empty()).then(|| Candidate {
                    toxic: t.mol.clone(),
                    nontoxic: n.mol.clone(),
                    match_criteria: passed,
                    similarity_scores: scores,
                })
            })
        })
        .collect();
    out.sort_by(|a, b| {
        (a.toxic.smiles.as_str(), a.nontoxic.smiles.as_str())
            .cmp(&(b.toxic.smiles.as_str(), b.nontoxic.smiles.as_str()))
    });
    out.dedup_by(|a, b| a.toxic.smiles == b.toxic.smiles && a.nontoxic.smiles == b.nontoxic.smiles);
    out
}
