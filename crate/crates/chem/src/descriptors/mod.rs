//! Physicochemical descriptors used for property filtering and scoring.

mod crippen;
mod lipinski;
mod tpsa;

use crate::element;
use crate::error::ChemError;
use crate::mol::Mol;
use crate::smiles::CanonicalSmiles;

pub use crippen::{logp, logp_contribs};
pub use lipinski::{h_acceptors, h_donors, rotatable_bonds};
pub use tpsa::tpsa;

#[derive(Clone, Copy, Debug, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct DescriptorVector {
    pub mw: f64,
    pub logp: f64,
    pub tpsa: f64,
    pub hbd: u32,
    pub hba: u32,
    pub rotb: u32,
}

impl DescriptorVector {
    pub const NAMES: [&'static str; 6] = ["MW", "logP", "TPSA", "HBD", "HBA", "RotB"];

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.mw,
            self.logp,
            self.tpsa,
            self.hbd as f64,
            self.hba as f64,
            self.rotb as f64,
        ]
    }

    /// Element-wise absolute difference.
    pub fn abs_diff(&self, other: &DescriptorVector) -> [f64; 6] {
        let (a, b) = (self.to_array(), other.to_array());
        std::array::from_fn(|i| (a[i] - b[i]).abs())
    }
}

/// Average molecular weight including hydrogens. Isotope-labelled atoms use
/// their mass number.
pub fn mol_weight(mol: &Mol) -> f64 {
    mol.atoms()
        .iter()
        .map(|a| {
            let heavy = if a.isotope > 0 {
                a.isotope as f64
            } else {
                element::atomic_weight(a.atomic_num)
            };
            heavy + a.hydrogens as f64 * element::atomic_weight(1)
        })
        .sum()
}

pub fn descriptors_mol(mol: &Mol) -> DescriptorVector {
    DescriptorVector {
        mw: mol_weight(mol),
        logp: logp(mol),
        tpsa: tpsa(mol),
        hbd: h_donors(mol),
        hba: h_acceptors(mol),
        rotb: rotatable_bonds(mol),
    }
}

pub fn descriptors(smiles: &CanonicalSmiles) -> Result<DescriptorVector, ChemError> {
    Ok(descriptors_mol(&smiles.to_mol()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::canonicalize;

    fn desc(s: &str) -> DescriptorVector {
        descriptors(&canonicalize(s).unwrap()).unwrap()
    }

    #[test]
    fn documented_examples() {
        let m = desc("C");
        assert_eq!((m.hbd, m.hba, m.rotb), (0, 0, 0));
        assert_eq!(m.tpsa, 0.0);
        let e = desc("CCO");
        assert!((e.mw - 46.069).abs() < 0.01);
        assert_eq!((e.hbd, e.rotb), (1, 0));
        assert_eq!(desc("c1ccccc1").tpsa, 0.0);
    }
}
