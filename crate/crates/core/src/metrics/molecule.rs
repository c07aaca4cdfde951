use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use toxcliff_chem::{
    canonicalize, decode_safe, edit_distance, fingerprint, tanimoto, CanonicalSmiles,
    FingerprintKind, SafeString,
};

use super::property::{prs, PropertyScoreConfig};
use crate::qa::GenerationMode;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Task3Record {
    pub em: u8,
    pub bleu1: f64,
    pub lev: usize,
    pub fts_path: f64,
    pub fts_keys: f64,
    pub fts_circular: f64,
    pub validity: u8,
    pub prs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricConfig {
    pub property: PropertyScoreConfig,
    /// Apply the brevity penalty in BLEU1.
    pub bleu_brevity_penalty: bool,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            property: PropertyScoreConfig::default(),
            bleu_brevity_penalty: true,
        }
    }
}

/// Character-unigram BLEU: clipped precision of `pred` characters against
/// `reference`, times the brevity penalty when enabled.
pub fn bleu1(pred: &str, reference: &str, brevity_penalty: bool) -> f64 {
    let (c, r) = (pred.chars().count(), reference.chars().count());
    if c == 0 {
        return 0.0;
    }
    let mut counts: HashMap<char, usize> = HashMap::new();
    for ch in reference.chars() {
        *counts.entry(ch).or_default() += 1;
    }
    let mut clipped = 0usize;
    for ch in pred.chars() {
        if let Some(n) = counts.get_mut(&ch) {
            if *n > 0 {
                *n -= 1;
                clipped += 1;
            }
        }
    }
    let precision = clipped as f64 / c as f64;
    let bp = if !brevity_penalty || c > r {
        1.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    };
    bp * precision
}

/// Canonical form of a prediction in the given mode, or `None` if invalid.
pub fn canonical_prediction(pred: &str, mode: GenerationMode) -> Option<CanonicalSmiles> {
    let text = pred.trim();
    if text.is_empty() {
        return None;
    }
    match mode {
        GenerationMode::Smiles => canonicalize(text).ok(),
        GenerationMode::Safe => decode_safe(&SafeString::new(text)).ok(),
    }
    .filter(|c| !c.is_empty())
}

fn fts(a: &CanonicalSmiles, b: &CanonicalSmiles, kind: FingerprintKind) -> f64 {
    let bits = kind.default_bits();
    match (fingerprint(a, kind, bits), fingerprint(b, kind, bits)) {
        (Ok(x), Ok(y)) => tanimoto(&x, &y).unwrap_or(0.0),
        _ => 0.0,
    }
}

/// Scores a Task 3 answer. Valid predictions compare canonical SMILES with
/// the canonical gold; invalid ones compare the raw text with `gold_text`
/// (the gold in the requested representation) and score zero on every
/// structure metric.
pub fn eval_task3(
    pred_raw: &str,
    gold_smiles: &CanonicalSmiles,
    gold_text: &str,
    toxic_smiles: &CanonicalSmiles,
    mode: GenerationMode,
    cfg: &MetricConfig,
) -> Task3Record {
    let bp = cfg.bleu_brevity_penalty;
    let Some(pred) = canonical_prediction(pred_raw, mode) else {
        let raw = pred_raw.trim();
        return Task3Record {
            bleu1: bleu1(raw, gold_text, bp),
            lev: edit_distance(raw, gold_text),
            ..Task3Record::default()
        };
    };
    Task3Record {
        em: u8::from(&pred == gold_smiles),
        bleu1: bleu1(pred.as_str(), gold_smiles.as_str(), bp),
        lev: edit_distance(pred.as_str(), gold_smiles.as_str()),
        fts_path: fts(&pred, gold_smiles, FingerprintKind::Path),
        fts_keys: fts(&pred, gold_smiles, FingerprintKind::StructuralKeys),
        fts_circular: fts(&pred, gold_smiles, FingerprintKind::Circular),
        validity: 1,
        prs: prs(&pred, toxic_smiles, &cfg.property).unwrap_or(0.0),
    }
}
