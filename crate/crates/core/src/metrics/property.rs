use serde::{Deserialize, Serialize};
use toxcliff_chem::{descriptors, CanonicalSmiles, DescriptorVector};

use crate::error::{CoreError, Result};

/// Property order used for weights and desirabilities.
pub const PROPERTY_NAMES: [&str; 6] = ["MW", "logP", "HBA", "HBD", "PSA", "RotB"];

/// Piecewise-linear desirability: 1 up to `ideal_upper`, falling linearly to
/// 0 at `zero_at`, 0 beyond.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Desirability {
    pub ideal_upper: f64,
    pub zero_at: f64,
}

impl Desirability {
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.ideal_upper {
            1.0
        } else if x >= self.zero_at {
            0.0
        } else {
            (self.zero_at - x) / (self.zero_at - self.ideal_upper)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropertyScoreConfig {
    pub weights: [f64; 6],
    pub desirability: [Desirability; 6],
}

impl Default for PropertyScoreConfig {
    fn default() -> Self {
        let ramp = |t: f64| Desirability {
            ideal_upper: t,
            zero_at: 2.0 * t,
        };
        PropertyScoreConfig {
            weights: [1.0 / 6.0; 6],
            desirability: [
                ramp(500.0),
                ramp(5.0),
                ramp(10.0),
                ramp(5.0),
                ramp(140.0),
                ramp(10.0),
            ],
        }
    }
}

impl PropertyScoreConfig {
    pub fn validate(&self) -> Result<()> {
        let sum: f64 = self.weights.iter().sum();
        if self.weights.iter().any(|w| !(*w >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
            return Err(CoreError::Config(
                "property weights must be non-negative and sum to 1".into(),
            ));
        }
        if self
            .desirability
            .iter()
            .any(|d| !(d.ideal_upper < d.zero_at))
        {
            return Err(CoreError::Config(
                "desirability needs ideal_upper < zero_at".into(),
            ));
        }
        Ok(())
    }

    /// Per-property desirabilities in [`PROPERTY_NAMES`] order.
    pub fn desirabilities(&self, d: &DescriptorVector) -> [f64; 6] {
        let x = [
            d.mw,
            d.logp,
            d.hba as f64,
            d.hbd as f64,
            d.tpsa,
            d.rotb as f64,
        ];
        std::array::from_fn(|i| self.desirability[i].eval(x[i]))
    }

    pub fn score_descriptors(&self, d: &DescriptorVector) -> f64 {
        self.desirabilities(d)
            .iter()
            .zip(self.weights)
            .map(|(d, w)| d * w)
            .sum()
    }
}

/// Weighted desirability S(m) in [0, 1].
pub fn property_score(mol: &CanonicalSmiles, cfg: &PropertyScoreConfig) -> Result<f64> {
    Ok(cfg.score_descriptors(&descriptors(mol)?))
}

/// exp(-|S(toxic) - S(pred)|).
pub fn prs_from_scores(s_pred: f64, s_toxic: f64) -> f64 {
    (-(s_toxic - s_pred).abs()).exp()
}

pub fn prs(
    pred: &CanonicalSmiles,
    toxic: &CanonicalSmiles,
    cfg: &PropertyScoreConfig,
) -> Result<f64> {
    Ok(prs_from_scores(
        property_score(pred, cfg)?,
        property_score(toxic, cfg)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use toxcliff_chem::canonicalize;

    #[test]
    fn ramp_shape() {
        let d = Desirability {
            ideal_upper: 5.0,
            zero_at: 10.0,
        };
        assert_eq!(d.eval(-3.0), 1.0);
        assert_eq!(d.eval(5.0), 1.0);
        assert_eq!(d.eval(7.5), 0.5);
        assert_eq!(d.eval(10.0), 0.0);
        assert_eq!(d.eval(40.0), 0.0);
    }

    #[test]
    fn all_ones_and_all_zeros() {
        let cfg = PropertyScoreConfig::default();
        let small = DescriptorVector::default();
        assert!((cfg.score_descriptors(&small) - 1.0).abs() < 1e-12);
        let huge = DescriptorVector {
            mw: 5000.0,
            logp: 50.0,
            tpsa: 1000.0,
            hbd: 50,
            hba: 50,
            rotb: 50,
        };
        assert_eq!(cfg.score_descriptors(&huge), 0.0);
    }

    #[test]
    fn aspirin_by_hand() {
        // MW 180.16, logP 1.31, HBA 3, HBD 1, TPSA 63.6, RotB 2: all inside
        // their ideal ranges.
        let cfg = PropertyScoreConfig::default();
        let s = property_score(&canonicalize("CC(=O)Oc1ccccc1C(=O)O").unwrap(), &cfg).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        // hand-made profile: MW 750 (0.5), logP 7.5 (0.5), HBA 15 (0.5),
        // HBD 2 (1), PSA 210 (0.5), RotB 25 (0) -> 3/6
        let d = DescriptorVector {
            mw: 750.0,
            logp: 7.5,
            tpsa: 210.0,
            hbd: 2,
            hba: 15,
            rotb: 25,
        };
        assert!((cfg.score_descriptors(&d) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn prs_examples() {
        let cfg = PropertyScoreConfig::default();
        let m = canonicalize("CCO").unwrap();
        assert_eq!(prs(&m, &m, &cfg).unwrap(), 1.0);
        assert!((prs_from_scores(0.2 + std::f64::consts::LN_2, 0.2) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(PropertyScoreConfig::default().validate().is_ok());
        let mut c = PropertyScoreConfig::default();
        c.weights[0] = 0.5;
        assert!(c.validate().is_err());
    }
}
