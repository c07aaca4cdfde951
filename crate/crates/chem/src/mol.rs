//! Molecular graph with resolved hydrogens, ring membership and aromaticity.

use crate::element;
use crate::error::ChemError;
use crate::rings::RingInfo;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Small integer class used by hashing and ranking.
    pub fn code(self) -> u8 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Aromatic => 4,
        }
    }

    pub fn from_valence(v: u8) -> BondOrder {
        match v {
            2 => BondOrder::Double,
            3 => BondOrder::Triple,
            _ => BondOrder::Single,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub atomic_num: u8,
    pub isotope: u16,
    pub charge: i8,
    /// Total attached hydrogens (implicit and explicit).
    pub hydrogens: u8,
    pub aromatic: bool,
    pub map_class: u16,
}

impl Atom {
    pub fn new(atomic_num: u8) -> Self {
        Atom {
            atomic_num,
            isotope: 0,
            charge: 0,
            hydrogens: 0,
            aromatic: false,
            map_class: 0,
        }
    }

    pub fn symbol(&self) -> &'static str {
        element::symbol(self.atomic_num)
    }

    pub fn is_dummy(&self) -> bool {
        self.atomic_num == element::DUMMY
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
    /// Localized order (1, 2 or 3); equals `order` for non-aromatic bonds.
    pub kekule: u8,
}

impl Bond {
    pub fn other(&self, atom: usize) -> usize {
        if self.a == atom {
            self.b
        } else {
            self.a
        }
    }
}

/// A sanitized molecule. Construct with [`Mol::from_smiles`] or
/// [`Mol::from_parts`]; both resolve hydrogens, kekulize and perceive rings
/// and aromaticity, so every `Mol` in circulation is chemically valid.
#[derive(Clone, Debug)]
pub struct Mol {
    pub(crate) atoms: Vec<Atom>,
    pub(crate) bonds: Vec<Bond>,
    pub(crate) adj: Vec<Vec<(usize, usize)>>,
    pub(crate) rings: RingInfo,
}

impl Mol {
    pub fn empty() -> Self {
        Mol {
            atoms: Vec::new(),
            bonds: Vec::new(),
            adj: Vec::new(),
            rings: RingInfo::default(),
        }
    }

    pub fn from_smiles(smiles: &str) -> Result<Mol, ChemError> {
        crate::smiles::parse(smiles)
    }

    /// Builds a molecule from atoms with already-final hydrogen counts and
    /// localized bond orders, then perceives rings and aromaticity.
    pub(crate) fn from_parts(atoms: Vec<Atom>, bonds: Vec<(usize, usize, u8)>) -> Mol {
        let mut adj = vec![Vec::new(); atoms.len()];
        let bonds: Vec<Bond> = bonds
            .into_iter()
            .enumerate()
            .map(|(i, (a, b, k))| {
                adj[a].push((b, i));
                adj[b].push((a, i));
                Bond {
                    a,
                    b,
                    order: BondOrder::from_valence(k),
                    kekule: k,
                }
            })
            .collect();
        let mut mol = Mol {
            atoms,
            bonds,
            adj,
            rings: RingInfo::default(),
        };
        mol.rings = RingInfo::perceive(&mol);
        crate::aromaticity::perceive(&mut mol);
        mol
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, idx: usize) -> &Atom {
        &self.atoms[idx]
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn bond(&self, idx: usize) -> &Bond {
        &self.bonds[idx]
    }

    /// `(neighbour, bond index)` pairs of an atom.
    pub fn neighbors(&self, idx: usize) -> &[(usize, usize)] {
        &self.adj[idx]
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.adj[idx].len()
    }

    /// Heavy degree plus hydrogens.
    pub fn total_degree(&self, idx: usize) -> usize {
        self.adj[idx].len() + self.atoms[idx].hydrogens as usize
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adj[a].iter().find(|(n, _)| *n == b).map(|(_, bi)| *bi)
    }

    /// Sum of localized bond orders plus hydrogens.
    pub fn valence(&self, idx: usize) -> u8 {
        self.adj[idx]
            .iter()
            .map(|(_, b)| self.bonds[*b].kekule)
            .sum::<u8>()
            + self.atoms[idx].hydrogens
    }

    pub fn rings(&self) -> &RingInfo {
        &self.rings
    }

    pub fn is_ring_atom(&self, idx: usize) -> bool {
        self.rings.atom_in_ring(idx)
    }

    pub fn is_ring_bond(&self, idx: usize) -> bool {
        self.rings.bond_in_ring(idx)
    }

    /// Connected components as sorted atom index lists, ordered by first atom.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.atoms.len()];
        let mut out = Vec::new();
        for start in 0..self.atoms.len() {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                for &(v, _) in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Induced copy over `keep` (sorted or not). Hydrogens are added to atoms
    /// that lose bonds so each kept atom retains its valence.
    pub fn subgraph(&self, keep: &[bool]) -> Mol {
        let mut map = vec![usize::MAX; self.atoms.len()];
        let mut atoms = Vec::new();
        for (i, a) in self.atoms.iter().enumerate() {
            if keep[i] {
                map[i] = atoms.len();
                let mut a = a.clone();
                a.aromatic = false;
                atoms.push(a);
            }
        }
        let mut bonds = Vec::new();
        for b in &self.bonds {
            match (keep[b.a], keep[b.b]) {
                (true, true) => bonds.push((map[b.a], map[b.b], b.kekule)),
                (true, false) => atoms[map[b.a]].hydrogens += b.kekule,
                (false, true) => atoms[map[b.b]].hydrogens += b.kekule,
                _ => {}
            }
        }
        Mol::from_parts(atoms, bonds)
    }

    /// Drops atom classes from dummy atoms, so attachment labels do not
    /// influence ranking.
    pub(crate) fn clear_dummy_classes(&mut self) {
        for a in self.atoms.iter_mut().filter(|a| a.is_dummy()) {
            a.map_class = 0;
        }
    }

    pub fn heavy_atom_count(&self) -> usize {
        self.atoms.iter().filter(|a| a.atomic_num > 1).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hydrogens_resolved() {
        let m = Mol::from_smiles("CCO").unwrap();
        let h: Vec<u8> = m.atoms().iter().map(|a| a.hydrogens).collect();
        assert_eq!(h, vec![3, 2, 1]);
        let m = Mol::from_smiles("c1ccccc1").unwrap();
        assert!(m.atoms().iter().all(|a| a.hydrogens == 1 && a.aromatic));
        assert!(m.bonds().iter().all(|b| b.order == BondOrder::Aromatic));
    }

    #[test]
    fn subgraph_caps_with_hydrogen() {
        let m = Mol::from_smiles("CCO").unwrap();
        let sub = m.subgraph(&[true, true, false]);
        assert_eq!(sub.atom(1).hydrogens, 3);
    }

    #[test]
    fn components_split_on_dot() {
        let m = Mol::from_smiles("CC.O").unwrap();
        assert_eq!(m.components(), vec![vec![0, 1], vec![2]]);
    }
}
