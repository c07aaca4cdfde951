//! Bit-vector fingerprints and Tanimoto similarity.

mod circular;
mod keys;
mod path;

use std::fmt;
use std::str::FromStr;

use crate::error::ChemError;
use crate::mol::Mol;
use crate::smiles::CanonicalSmiles;

pub use keys::KEY_COUNT;

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "kebab-case")]
pub enum FingerprintKind {
    /// Morgan / ECFP4-style atom environments up to radius 2.
    Circular,
    /// Fixed dictionary of substructure keys (MACCS-like).
    StructuralKeys,
    /// Hashed linear bond paths (RDK-like topological).
    Path,
}

impl FingerprintKind {
    pub const ALL: [FingerprintKind; 3] = [
        FingerprintKind::Path,
        FingerprintKind::StructuralKeys,
        FingerprintKind::Circular,
    ];

    pub fn default_bits(self) -> usize {
        match self {
            FingerprintKind::Circular => 1024,
            FingerprintKind::StructuralKeys => KEY_COUNT,
            FingerprintKind::Path => 2048,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FingerprintKind::Circular => "circular",
            FingerprintKind::StructuralKeys => "keys",
            FingerprintKind::Path => "path",
        }
    }
}

impl fmt::Display for FingerprintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FingerprintKind {
    type Err = ChemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "circular" | "morgan" | "ecfp4" => Ok(FingerprintKind::Circular),
            "keys" | "maccs" | "structural-keys" => Ok(FingerprintKind::StructuralKeys),
            "path" | "rdk" | "topological" => Ok(FingerprintKind::Path),
            other => Err(ChemError::UnsupportedKind(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    kind: FingerprintKind,
    nbits: usize,
    words: Vec<u64>,
}

impl Fingerprint {
    pub fn new(kind: FingerprintKind, nbits: usize) -> Self {
        Fingerprint {
            kind,
            nbits,
            words: vec![0; nbits.div_ceil(64)],
        }
    }

    /// Builds a fingerprint from explicit on-bit indices; indices are taken
    /// modulo `nbits`.
    pub fn from_indices(
        kind: FingerprintKind,
        nbits: usize,
        on: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut fp = Fingerprint::new(kind, nbits);
        for i in on {
            fp.set(i % nbits);
        }
        fp
    }

    pub fn kind(&self) -> FingerprintKind {
        self.kind
    }

    pub fn nbits(&self) -> usize {
        self.nbits
    }

    pub fn set(&mut self, bit: usize) {
        assert!(bit < self.nbits, "bit {bit} out of range {}", self.nbits);
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    pub fn get(&self, bit: usize) -> bool {
        bit < self.nbits && self.words[bit / 64] & (1 << (bit % 64)) != 0
    }

    pub fn popcount(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn on_bits(&self) -> Vec<usize> {
        (0..self.nbits).filter(|&i| self.get(i)).collect()
    }
}

pub fn fingerprint_mol(
    mol: &Mol,
    kind: FingerprintKind,
    nbits: usize,
) -> Result<Fingerprint, ChemError> {
    match kind {
        FingerprintKind::Circular | FingerprintKind::Path => {
            if nbits == 0 || !nbits.is_power_of_two() {
                return Err(ChemError::UnsupportedKind(format!(
                    "{kind} fingerprints fold to a power of two, got {nbits} bits"
                )));
            }
        }
        FingerprintKind::StructuralKeys => {
            if nbits != KEY_COUNT {
                return Err(ChemError::UnsupportedKind(format!(
                    "structural keys have exactly {KEY_COUNT} bits, got {nbits}"
                )));
            }
        }
    }
    let mut fp = Fingerprint::new(kind, nbits);
    match kind {
        FingerprintKind::Circular => circular::fill(mol, 2, &mut fp),
        FingerprintKind::StructuralKeys => keys::fill(mol, &mut fp),
        FingerprintKind::Path => path::fill(mol, 7, &mut fp),
    }
    Ok(fp)
}

pub fn fingerprint(
    smiles: &CanonicalSmiles,
    kind: FingerprintKind,
    nbits: usize,
) -> Result<Fingerprint, ChemError> {
    fingerprint_mol(&smiles.to_mol()?, kind, nbits)
}

/// Tanimoto coefficient `|a & b| / |a | b|`. Two empty fingerprints are
/// treated as identical and score 1.
pub fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> Result<f64, ChemError> {
    if a.kind != b.kind || a.nbits != b.nbits {
        return Err(ChemError::KindMismatch);
    }
    let (mut both, mut either) = (0u32, 0u32);
    for (x, y) in a.words.iter().zip(&b.words) {
        both += (x & y).count_ones();
        either += (x | y).count_ones();
    }
    if either == 0 {
        return Ok(1.0);
    }
    Ok(both as f64 / either as f64)
}

/// Boost-style hash mixing, used for stable environment hashes.
pub(crate) fn mix(seed: u32, value: u32) -> u32 {
    seed ^ value
        .wrapping_add(0x9e37_79b9)
        .wrapping_add(seed << 6)
        .wrapping_add(seed >> 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::canonicalize;

    fn fp(s: &str, kind: FingerprintKind) -> Fingerprint {
        fingerprint(&canonicalize(s).unwrap(), kind, kind.default_bits()).unwrap()
    }

    #[test]
    fn documented_examples() {
        for kind in FingerprintKind::ALL {
            assert_eq!(fp("c1ccccc1O", kind), fp("Oc1ccccc1", kind));
        }
        assert!(fp("C", FingerprintKind::Circular).popcount() >= 1);
        assert_ne!(
            fp("CCO", FingerprintKind::Circular),
            fp("c1ccccc1", FingerprintKind::Circular)
        );
    }

    #[test]
    fn tanimoto_examples() {
        let k = FingerprintKind::Circular;
        let x = Fingerprint::from_indices(k, 64, [1, 2, 3]);
        let y = Fingerprint::from_indices(k, 64, [2, 3, 4]);
        let z = Fingerprint::from_indices(k, 64, [9]);
        assert_eq!(tanimoto(&x, &x).unwrap(), 1.0);
        assert_eq!(tanimoto(&x, &y).unwrap(), 0.5);
        assert_eq!(tanimoto(&x, &z).unwrap(), 0.0);
        let e = Fingerprint::new(k, 64);
        assert_eq!(tanimoto(&e, &e).unwrap(), 1.0);
        let other = Fingerprint::new(FingerprintKind::Path, 64);
        assert!(matches!(tanimoto(&e, &other), Err(ChemError::KindMismatch)));
        assert!(matches!(
            tanimoto(&e, &Fingerprint::new(k, 128)),
            Err(ChemError::KindMismatch)
        ));
    }

    #[test]
    fn bad_sizes_rejected() {
        let m = canonicalize("CCO").unwrap();
        assert!(fingerprint(&m, FingerprintKind::Circular, 1000).is_err());
        assert!(fingerprint(&m, FingerprintKind::StructuralKeys, 1024).is_err());
    }

    #[test]
    fn kind_names_parse() {
        for kind in FingerprintKind::ALL {
            assert_eq!(kind.name().parse::<FingerprintKind>().unwrap(), kind);
        }
        assert!("bogus".parse::<FingerprintKind>().is_err());
    }
}
