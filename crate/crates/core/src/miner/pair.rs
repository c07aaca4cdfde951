use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toxcliff_chem::{fragment_multiset, FragmentMultiset, SafeString};

use crate::dataset::LabeledMolecule;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchCriterion {
    ScaffoldFp,
    FullFp,
    StringSim,
}

/// Pair that passed the global similarity screen, before fragmenting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub toxic: LabeledMolecule,
    pub nontoxic: LabeledMolecule,
    pub match_criteria: BTreeSet<MatchCriterion>,
    pub similarity_scores: BTreeMap<MatchCriterion, f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FragmentSets {
    pub common: FragmentMultiset,
    pub toxic_only: FragmentMultiset,
    pub nontoxic_only: FragmentMultiset,
}

impl FragmentSets {
    pub fn n_common(&self) -> usize {
        self.common.total()
    }

    pub fn n_toxic_only(&self) -> usize {
        self.toxic_only.total()
    }

    pub fn n_nontoxic_only(&self) -> usize {
        self.nontoxic_only.total()
    }
}

pub fn diff_fragments(toxic_safe: &SafeString, nontoxic_safe: &SafeString) -> Result<FragmentSets> {
    let t = fragment_multiset(toxic_safe.as_str())?;
    let nt = fragment_multiset(nontoxic_safe.as_str())?;
    Ok(FragmentSets {
        common: t.intersection(&nt),
        toxic_only: t.difference(&nt),
        nontoxic_only: nt.difference(&t),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliffPair {
    pub id: String,
    pub toxic: LabeledMolecule,
    pub nontoxic: LabeledMolecule,
    pub toxic_safe: SafeString,
    pub nontoxic_safe: SafeString,
    pub fragments: FragmentSets,
    pub match_criteria: BTreeSet<MatchCriterion>,
    pub similarity_scores: BTreeMap<MatchCriterion, f64>,
}

/// Stable id from the endpoint and both canonical structures.
pub fn pair_id(endpoint: &str, toxic: &str, nontoxic: &str) -> String {
    let mut h = Sha256::new();
    for part in [endpoint, toxic, nontoxic] {
        h.update(part.as_bytes());
        h.update([0u8]);
    }
    h.finalize()
        .iter()
        .take(6)
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl CliffPair {
    pub fn from_candidate(
        c: Candidate,
        toxic_safe: SafeString,
        nontoxic_safe: SafeString,
    ) -> Result<Self> {
        let fragments = diff_fragments(&toxic_safe, &nontoxic_safe)?;
        Ok(CliffPair {
            id: pair_id(
                &c.toxic.endpoint,
                c.toxic.smiles.as_str(),
                c.nontoxic.smiles.as_str(),
            ),
            toxic: c.toxic,
            nontoxic: c.nontoxic,
            toxic_safe,
            nontoxic_safe,
            fragments,
            match_criteria: c.match_criteria,
            similarity_scores: c.similarity_scores,
        })
    }

    pub fn endpoint(&self) -> &str {
        &self.toxic.endpoint
    }

    /// Key used for deterministic ordering.
    pub fn sort_key(&self) -> (&str, &str, &str) {
        (
            self.endpoint(),
            self.toxic.smiles.as_str(),
            self.nontoxic.smiles.as_str(),
        )
    }
}
