use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use toxcliff_chem::murcko_scaffold;

use super::config::{MinerConfig, SplitScaffold};
use super::pair::CliffPair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitName {
    Train,
    Test,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SplitResult {
    pub train: Vec<CliffPair>,
    pub test: Vec<CliffPair>,
}

impl SplitResult {
    /// Pair id to side.
    pub fn assignment(&self) -> BTreeMap<String, SplitName> {
        let mut m = BTreeMap::new();
        for p in &self.train {
            m.insert(p.id.clone(), SplitName::Train);
        }
        for p in &self.test {
            m.insert(p.id.clone(), SplitName::Test);
        }
        m
    }
}

/// Scaffold that decides the pair's side. Acyclic molecules share the empty
/// scaffold group.
pub fn split_key(pair: &CliffPair, cfg: &MinerConfig) -> String {
    let smiles = match cfg.split_scaffold {
        SplitScaffold::Toxic => &pair.toxic.smiles,
        SplitScaffold::Nontoxic => &pair.nontoxic.smiles,
    };
    murcko_scaffold(smiles)
        .map(|s| s.into_string())
        .unwrap_or_default()
}

/// Per endpoint: whole scaffold groups go to test, largest first (ties by
/// scaffold text), until test holds at least `1 - split_ratio` of the pairs.
/// Endpoints with fewer than `min_train_pairs` pairs go entirely to test.
pub fn scaffold_split(pairs: &[CliffPair], cfg: &MinerConfig) -> SplitResult {
    let mut by_endpoint: BTreeMap<&str, Vec<&CliffPair>> = BTreeMap::new();
    for p in pairs {
        by_endpoint.entry(p.endpoint()).or_default().push(p);
    }
    let mut out = SplitResult::default();
    for (endpoint, group) in by_endpoint {
        if group.len() < cfg.min_train_pairs {
            log::info!(
                "endpoint {endpoint}: {} pairs, all assigned to test",
                group.len()
            );
            out.test.extend(group.into_iter().cloned());
            continue;
        }
        let mut scaffolds: BTreeMap<String, Vec<&CliffPair>> = BTreeMap::new();
        for p in group.iter().copied() {
            scaffolds.entry(split_key(p, cfg)).or_default().push(p);
        }
        let mut groups: Vec<(String, Vec<&CliffPair>)> = scaffolds.into_iter().collect();
        groups.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.0.cmp(&b.0)));
        let target = (1.0 - cfg.split_ratio) * group.len() as f64;
        let mut in_test = 0usize;
        for (_, members) in groups {
            if (in_test as f64) < target - 1e-9 {
                in_test += members.len();
                out.test.extend(members.into_iter().cloned());
            } else {
                out.train.extend(members.into_iter().cloned());
            }
        }
    }
    out.train.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out.test.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out
}
