//! SMILES reading and canonical writing.

mod parse;
pub(crate) mod write;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canon::canonical_ranks;
use crate::error::ChemError;
use crate::mol::Mol;

pub use parse::{parse, parse_open};

/// Canonical line notation. Chemically identical inputs produce identical
/// text, and canonicalizing the text again is a no-op. The empty string is
/// the empty molecule (used as the acyclic scaffold sentinel).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalSmiles(String);

impl CanonicalSmiles {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn empty() -> Self {
        CanonicalSmiles(String::new())
    }

    pub fn to_mol(&self) -> Result<Mol, ChemError> {
        if self.0.is_empty() {
            Ok(Mol::empty())
        } else {
            parse(&self.0)
        }
    }

    /// Wraps text that is already known to be canonical (e.g. read back from
    /// our own output files) without re-parsing it.
    pub fn from_trusted(text: impl Into<String>) -> Self {
        CanonicalSmiles(text.into())
    }
}

impl fmt::Display for CanonicalSmiles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for CanonicalSmiles {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

pub fn canonical_smiles(mol: &Mol) -> CanonicalSmiles {
    if mol.is_empty() {
        return CanonicalSmiles::empty();
    }
    CanonicalSmiles(write::write_smiles(mol, &canonical_ranks(mol)))
}

pub fn canonicalize(smiles: &str) -> Result<CanonicalSmiles, ChemError> {
    Ok(canonical_smiles(&parse(smiles)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canon(s: &str) -> String {
        canonicalize(s).unwrap().into_string()
    }

    #[test]
    fn documented_examples() {
        assert_eq!(canon("C"), "C");
        assert_eq!(canon("OCC"), "CCO");
        assert!(canonicalize("C1CC").is_err());
    }

    #[test]
    fn equivalent_inputs_agree() {
        let groups: &[&[&str]] = &[
            &["c1ccccc1", "C1=CC=CC=C1", "C1C=CC=CC=1"],
            &["Cc1ccccc1", "c1ccccc1C", "C1=CC=CC(C)=C1"],
            &["CC(=O)Oc1ccccc1C(=O)O", "OC(=O)c1ccccc1OC(C)=O"],
            &["c1ccc2[nH]ccc2c1", "C1=CC=C2C(=C1)C=CN2"],
            &["[NH4+]", "[H][N+]([H])([H])[H]"],
            &["O=[N+]([O-])c1ccccc1", "[O-][N+](=O)C1=CC=CC=C1"],
            &["C1CC1C1CC1", "C1CC1C2CC2"],
            &["Oc1ccncc1", "c1cc(O)ccn1"],
        ];
        for g in groups {
            let first = canon(g[0]);
            for s in g.iter() {
                assert_eq!(canon(s), first, "{s} vs {}", g[0]);
            }
        }
    }

    #[test]
    fn idempotent_on_samples() {
        for s in [
            "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
            "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
            "c1ccc2cc3ccccc3cc2c1",
            "c1ccc2cccc2cc1",
            "O=c1cc[nH]cc1",
            "C[n+]1ccccc1",
            "FC(F)(F)c1ccc(Cl)cc1",
            "C1CC2CCC1C2",
            "[Na+].[O-]C(=O)c1ccccc1",
            "[2H]C([2H])([2H])O",
            "c1ccc(-c2ccccc2)cc1",
            "S=C=S",
            "C#N",
        ] {
            let once = canon(s);
            assert_eq!(canon(&once), once, "{s}");
        }
    }
}
