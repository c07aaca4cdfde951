//! SAFE fragment strings: a molecule written as dot-separated fragments whose
//! cut sites are matched ring-closure digits, so the whole string still
//! parses as ordinary SMILES.

mod brics;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canon::canonical_ranks;
use crate::error::ChemError;
use crate::mol::{Atom, Mol};
use crate::smiles::write::{write_component, Piece};
use crate::smiles::{canonical_smiles, parse, parse_open, CanonicalSmiles};

pub use brics::brics_bonds;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SafeString(String);

impl SafeString {
    /// Wraps arbitrary text, e.g. a model prediction. Nothing is validated.
    pub fn new(text: impl Into<String>) -> Self {
        SafeString(text.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    pub fn tokens(&self) -> Result<Vec<FragmentToken>, ChemError> {
        tokenize_fragments(&self.0)
    }
}

impl fmt::Display for SafeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FragmentToken(String);

impl FragmentToken {
    pub fn new(text: &str) -> Self {
        FragmentToken(text.trim().to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Character count, attachment digits included.
    pub fn len(&self) -> usize {
        self.0.chars().count()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for FragmentToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Token counts. Zero counts are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FragmentMultiset {
    counts: BTreeMap<FragmentToken, usize>,
}

impl FragmentMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, token: FragmentToken, n: usize) {
        if n > 0 {
            *self.counts.entry(token).or_insert(0) += n;
        }
    }

    pub fn count(&self, token: &FragmentToken) -> usize {
        self.counts.get(token).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Number of distinct tokens.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FragmentToken, usize)> {
        self.counts.iter().map(|(t, &c)| (t, c))
    }

    /// Elementwise minimum.
    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (t, c) in self.iter() {
            out.add(t.clone(), c.min(other.count(t)));
        }
        out
    }

    /// Elementwise saturating subtraction.
    pub fn difference(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (t, c) in self.iter() {
            out.add(t.clone(), c.saturating_sub(other.count(t)));
        }
        out
    }

    /// Disjoint union (counts add).
    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in other.iter() {
            out.add(t.clone(), c);
        }
        out
    }

    /// Tokens with multiplicity, in sorted order.
    pub fn to_vec(&self) -> Vec<FragmentToken> {
        self.iter()
            .flat_map(|(t, c)| std::iter::repeat(t.clone()).take(c))
            .collect()
    }

    /// Dot-joined tokens (sorted, with multiplicity). Empty set gives "".
    pub fn join(&self) -> String {
        self.to_vec()
            .iter()
            .map(FragmentToken::as_str)
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl FromIterator<FragmentToken> for FragmentMultiset {
    fn from_iter<I: IntoIterator<Item = FragmentToken>>(iter: I) -> Self {
        let mut out = Self::new();
        for t in iter {
            out.add(t, 1);
        }
        out
    }
}

pub fn tokenize_fragments(safe: &str) -> Result<Vec<FragmentToken>, ChemError> {
    let tokens: Vec<FragmentToken> = safe
        .split('.')
        .map(FragmentToken::new)
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        Err(ChemError::EmptyInput)
    } else {
        Ok(tokens)
    }
}

pub fn fragment_multiset(safe: &str) -> Result<FragmentMultiset, ChemError> {
    Ok(tokenize_fragments(safe)?.into_iter().collect())
}

/// Rebuilds the molecule with every cut bond replaced by a pair of dummy
/// atoms labelled with the cut number.
fn cut(mol: &Mol, cuts: &[usize]) -> Mol {
    let mut atoms: Vec<Atom> = mol.atoms().to_vec();
    let mut bonds = Vec::new();
    let mut label = HashMap::new();
    for (k, &bi) in cuts.iter().enumerate() {
        label.insert(bi, k as u16 + 1);
    }
    for (bi, b) in mol.bonds().iter().enumerate() {
        match label.get(&bi) {
            None => bonds.push((b.a, b.b, b.kekule)),
            Some(&l) => {
                for end in [b.a, b.b] {
                    let mut d = Atom::new(0);
                    d.map_class = l;
                    atoms.push(d);
                    bonds.push((end, atoms.len() - 1, b.kekule));
                }
            }
        }
    }
    for a in atoms.iter_mut() {
        a.aromatic = false;
    }
    Mol::from_parts(atoms, bonds)
}

fn fragment_pieces(frag: &Mol) -> (Vec<Piece>, u32) {
    let mut blank = frag.clone();
    blank.clear_dummy_classes();
    let ranks = canonical_ranks(&blank);
    let root = (0..frag.atom_count())
        .filter(|&i| !frag.atom(i).is_dummy())
        .min_by_key(|&i| ranks[i])
        .unwrap_or(0);
    let w = write_component(frag, &ranks, root, true);
    (w.pieces, w.max_digit)
}

pub fn encode_mol(mol: &Mol) -> Result<SafeString, ChemError> {
    if mol.is_empty() {
        return Err(ChemError::Encoding("empty molecule".into()));
    }
    let cuts = brics_bonds(mol);
    if cuts.is_empty() {
        return Ok(SafeString(canonical_smiles(mol).into_string()));
    }
    let pieces = cut(mol, &cuts);
    let mut comps = pieces.components();
    comps.sort_by_key(|c| (std::cmp::Reverse(c.len()), c[0]));
    let frags: Vec<(Vec<Piece>, u32)> = comps
        .iter()
        .map(|c| {
            let mut keep = vec![false; pieces.atom_count()];
            for &a in c {
                keep[a] = true;
            }
            fragment_pieces(&pieces.subgraph(&keep))
        })
        .collect();
    let base = frags.iter().map(|f| f.1).max().unwrap_or(0) + 1;
    let mut digits: HashMap<u16, u32> = HashMap::new();
    let mut out = Vec::with_capacity(frags.len());
    for (frag, _) in &frags {
        let mut s = String::new();
        for p in frag {
            match p {
                Piece::Text(t) => s.push_str(t),
                Piece::Attach { label, bond } => {
                    let next = base + digits.len() as u32;
                    let d = *digits.entry(*label).or_insert(next);
                    s.push_str(bond);
                    if d < 10 {
                        s.push_str(&d.to_string());
                    } else if d < 100 {
                        s.push_str(&format!("%{d}"));
                    } else {
                        return Err(ChemError::Encoding("too many attachment points".into()));
                    }
                }
            }
        }
        out.push(s);
    }
    let safe = SafeString(out.join("."));
    let back = decode_safe(&safe).map_err(|e| ChemError::Encoding(e.to_string()))?;
    if back != canonical_smiles(mol) {
        return Err(ChemError::Encoding(format!(
            "{} does not reconstruct the input",
            safe.as_str()
        )));
    }
    Ok(safe)
}

/// The fragment as a standalone molecule: open attachment digits are
/// replaced by hydrogens.
pub fn strip_attachments(token: &FragmentToken) -> Result<CanonicalSmiles, ChemError> {
    let mol = parse_open(token.as_str())?;
    let keep: Vec<bool> = mol
        .atoms()
        .iter()
        .map(|a| !(a.is_dummy() && a.map_class > 0))
        .collect();
    Ok(canonical_smiles(&mol.subgraph(&keep)))
}

pub fn encode_safe(smiles: &CanonicalSmiles) -> Result<SafeString, ChemError> {
    encode_mol(&smiles.to_mol()?)
}

pub fn decode_safe(safe: &SafeString) -> Result<CanonicalSmiles, ChemError> {
    let text = safe.as_str().trim();
    if text.is_empty() {
        return Err(ChemError::Decode("empty string".into()));
    }
    match parse(text) {
        Ok(m) => Ok(canonical_smiles(&m)),
        Err(ChemError::Parse { reason, .. }) => Err(ChemError::Decode(reason)),
        Err(e) => Err(ChemError::Decode(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::canonicalize;

    fn enc(s: &str) -> String {
        encode_safe(&canonicalize(s).unwrap())
            .unwrap()
            .into_string()
    }

    #[test]
    fn ring_without_cuts_is_one_fragment() {
        assert_eq!(enc("c1ccccc1"), "c1ccccc1");
    }

    #[test]
    fn ether_splits_and_round_trips() {
        let s = enc("CCOc1ccccc1");
        assert!(tokenize_fragments(&s).unwrap().len() >= 2, "{s}");
        assert_eq!(
            decode_safe(&SafeString::new(s)).unwrap(),
            canonicalize("CCOc1ccccc1").unwrap()
        );
    }

    #[test]
    fn dangling_digit_fails() {
        assert!(matches!(
            decode_safe(&SafeString::new("c1ccccc12.CC")),
            Err(ChemError::Decode(_))
        ));
    }

    #[test]
    fn permuted_fragments_decode_alike() {
        let s = enc("CC(=O)Nc1ccc(OCC)cc1");
        let mut toks: Vec<String> = s.split('.').map(str::to_string).collect();
        let want = decode_safe(&SafeString::new(s.clone())).unwrap();
        toks.reverse();
        assert_eq!(decode_safe(&SafeString::new(toks.join("."))).unwrap(), want);
    }

    #[test]
    fn identical_fragments_differ_only_by_digit() {
        let s = enc("c1ccc(cc1)Oc1ccccc1");
        assert_eq!(s, "c1ccc-2cc1.c1ccc-3cc1.O23");
    }

    #[test]
    fn stripped_fragments_are_capped_with_hydrogen() {
        let strip = |t: &str| {
            strip_attachments(&FragmentToken::new(t))
                .unwrap()
                .into_string()
        };
        assert_eq!(strip("c1ccc-2cc1"), "c1ccccc1");
        assert_eq!(strip("O23"), "O");
        assert_eq!(strip("C2(=O)C"), "CC=O");
        assert_eq!(strip("CCO"), "CCO");
    }

    #[test]
    fn tokenizer_examples() {
        let t = |s: &str| -> Vec<String> {
            tokenize_fragments(s)
                .unwrap()
                .iter()
                .map(|t| t.to_string())
                .collect()
        };
        assert_eq!(t("frag1.frag2"), ["frag1", "frag2"]);
        assert_eq!(t("C1CC1"), ["C1CC1"]);
        assert_eq!(t("a..b "), ["a", "b"]);
        assert_eq!(tokenize_fragments(" . "), Err(ChemError::EmptyInput));
    }

    #[test]
    fn multiset_examples() {
        let m = fragment_multiset("a.b.a").unwrap();
        assert_eq!(m.count(&FragmentToken::new("a")), 2);
        assert_eq!(m.count(&FragmentToken::new("b")), 1);
        assert_eq!(
            fragment_multiset("b.a").unwrap(),
            fragment_multiset("a.b").unwrap()
        );
        assert_eq!(fragment_multiset(""), Err(ChemError::EmptyInput));
    }

    #[test]
    fn multiset_algebra() {
        let a = fragment_multiset("x.x.y.z").unwrap();
        let b = fragment_multiset("x.y.y.w").unwrap();
        let common = a.intersection(&b);
        assert_eq!(common.join(), "x.y");
        assert_eq!(a.difference(&b).join(), "x.z");
        assert_eq!(common.sum(&a.difference(&b)), a);
        assert_eq!(common.sum(&b.difference(&a)), b);
    }
}
