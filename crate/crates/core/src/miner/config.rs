use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Which molecule's scaffold decides a pair's side of the split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitScaffold {
    Toxic,
    Nontoxic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MinerConfig {
    pub sim_threshold: f64,
    pub frag_len_cut: usize,
    pub frag_count_cut: usize,
    pub iqr_k: f64,
    pub derive_cuts_from_data: bool,
    pub split_ratio: f64,
    pub min_train_pairs: usize,
    /// Circular fingerprint size used for pairing.
    pub fingerprint_bits: usize,
    pub split_scaffold: SplitScaffold,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            sim_threshold: 0.9,
            frag_len_cut: 28,
            frag_count_cut: 4,
            iqr_k: 1.5,
            derive_cuts_from_data: true,
            split_ratio: 0.9,
            min_train_pairs: 5,
            fingerprint_bits: 1024,
            split_scaffold: SplitScaffold::Toxic,
        }
    }
}

impl MinerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(CoreError::Config(m.to_string()));
        if !(self.sim_threshold > 0.0 && self.sim_threshold <= 1.0) {
            return bad("sim_threshold must be in (0, 1]");
        }
        if self.frag_len_cut == 0 || self.frag_count_cut == 0 {
            return bad("fragment cuts must be positive");
        }
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return bad("split_ratio must be in (0, 1)");
        }
        if !(self.iqr_k >= 0.0) {
            return bad("iqr_k must be non-negative");
        }
        if !self.fingerprint_bits.is_power_of_two() {
            return bad("fingerprint_bits must be a power of two");
        }
        Ok(())
    }
}
