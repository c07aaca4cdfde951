//! Retrosynthetic (BRICS) bond perception: sixteen atom environments and
//! the environment pairs whose connecting non-ring bond may be cut.

use crate::mol::{BondOrder, Mol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Env {
    L1,
    L3,
    L4,
    L5,
    L6,
    L7,
    L8,
    L9,
    L10,
    L11,
    L12,
    L13,
    L14,
    L15,
    L16,
}

use Env::*;

const SINGLE_RULES: &[(Env, Env)] = &[
    (L1, L3),
    (L1, L5),
    (L1, L10),
    (L3, L4),
    (L3, L13),
    (L3, L14),
    (L3, L15),
    (L3, L16),
    (L4, L5),
    (L4, L11),
    (L5, L12),
    (L5, L14),
    (L5, L16),
    (L5, L13),
    (L5, L15),
    (L6, L13),
    (L6, L14),
    (L6, L15),
    (L6, L16),
    (L8, L9),
    (L8, L10),
    (L8, L13),
    (L8, L14),
    (L8, L15),
    (L8, L16),
    (L9, L13),
    (L9, L14),
    (L9, L15),
    (L9, L16),
    (L10, L13),
    (L10, L14),
    (L10, L15),
    (L10, L16),
    (L11, L13),
    (L11, L14),
    (L11, L15),
    (L11, L16),
    (L13, L14),
    (L13, L15),
    (L13, L16),
    (L14, L14),
    (L14, L15),
    (L14, L16),
    (L15, L16),
    (L16, L16),
];

struct View<'m> {
    mol: &'m Mol,
}

impl View<'_> {
    fn z(&self, i: usize) -> u8 {
        self.mol.atom(i).atomic_num
    }

    fn aliphatic(&self, i: usize, z: u8) -> bool {
        self.z(i) == z && !self.mol.atom(i).aromatic
    }

    fn aromatic(&self, i: usize, z: u8) -> bool {
        self.z(i) == z && self.mol.atom(i).aromatic
    }

    fn d(&self, i: usize) -> usize {
        self.mol.degree(i)
    }

    fn ring(&self, i: usize) -> bool {
        self.mol.is_ring_atom(i)
    }

    fn bonds(&self, i: usize) -> impl Iterator<Item = (usize, BondOrder, bool)> + '_ {
        self.mol
            .neighbors(i)
            .iter()
            .map(|&(v, b)| (v, self.mol.bond(b).order, self.mol.is_ring_bond(b)))
    }

    fn double_to_aliphatic_o(&self, i: usize) -> bool {
        self.bonds(i)
            .any(|(v, o, _)| o == BondOrder::Double && self.aliphatic(v, 8))
    }

    fn any_double(&self, i: usize) -> bool {
        self.bonds(i).any(|(_, o, _)| o == BondOrder::Double)
    }

    /// At least one neighbour in `b`, and at least two distinct neighbours in
    /// `a` (where `b` is a subset of `a`), over bonds accepted by `bond`.
    fn two_distinct(
        &self,
        i: usize,
        bond: impl Fn(BondOrder, bool) -> bool,
        a: impl Fn(usize) -> bool,
        b: impl Fn(usize) -> bool,
    ) -> bool {
        let nbrs: Vec<usize> = self
            .bonds(i)
            .filter(|&(_, o, r)| bond(o, r))
            .map(|(v, _, _)| v)
            .collect();
        nbrs.iter().any(|&v| b(v)) && nbrs.iter().filter(|&&v| a(v)).count() >= 2
    }

    fn matches(&self, i: usize, env: Env) -> bool {
        let single = |o: BondOrder| o == BondOrder::Single;
        match env {
            L1 => {
                self.aliphatic(i, 6)
                    && self.d(i) == 3
                    && self.double_to_aliphatic_o(i)
                    && self.bonds(i).any(|(v, o, _)| {
                        o != BondOrder::Double && matches!(self.z(v), 0 | 6 | 7 | 8)
                    })
            }
            L3 => {
                self.aliphatic(i, 8)
                    && self.d(i) == 2
                    && self
                        .bonds(i)
                        .any(|(v, o, r)| single(o) && !r && matches!(self.z(v), 0 | 6))
            }
            L4 => {
                self.aliphatic(i, 6)
                    && self.d(i) != 1
                    && !self.any_double(i)
                    && self
                        .bonds(i)
                        .any(|(v, o, r)| single(o) && !r && self.z(v) == 6)
            }
            L5 => {
                self.aliphatic(i, 7)
                    && self.d(i) != 1
                    && !self.any_double(i)
                    && !self
                        .bonds(i)
                        .any(|(v, o, _)| single(o) && !matches!(self.z(v), 0 | 1 | 6 | 16))
                    && !(self.ring(i)
                        && self.bonds(i).any(|(v, _, r)| {
                            r && self.aliphatic(v, 6)
                                && self.ring(v)
                                && self.double_to_aliphatic_o(v)
                        }))
            }
            L6 => {
                self.aliphatic(i, 6)
                    && self.d(i) == 3
                    && !self.ring(i)
                    && self.double_to_aliphatic_o(i)
                    && self
                        .bonds(i)
                        .any(|(v, o, r)| single(o) && !r && matches!(self.z(v), 0 | 6 | 7 | 8))
            }
            L7 => {
                self.aliphatic(i, 6)
                    && matches!(self.d(i), 2 | 3)
                    && self.bonds(i).any(|(v, o, _)| single(o) && self.z(v) == 6)
            }
            L8 => {
                self.aliphatic(i, 6)
                    && !self.ring(i)
                    && self.d(i) != 1
                    && self.bonds(i).all(|(_, o, _)| single(o))
            }
            L9 => {
                self.aromatic(i, 7)
                    && self.mol.atom(i).charge == 0
                    && self
                        .bonds(i)
                        .filter(|&(v, o, _)| {
                            o == BondOrder::Aromatic
                                && self.mol.atom(v).aromatic
                                && matches!(self.z(v), 6 | 7 | 8 | 16)
                        })
                        .count()
                        >= 2
            }
            L10 => {
                if !(self.aliphatic(i, 7) && self.ring(i)) {
                    return false;
                }
                let ring_nbrs: Vec<usize> = self
                    .bonds(i)
                    .filter(|&(_, _, r)| r)
                    .map(|(v, _, _)| v)
                    .collect();
                ring_nbrs.iter().any(|&c| {
                    self.aliphatic(c, 6)
                        && self.double_to_aliphatic_o(c)
                        && ring_nbrs.iter().any(|&y| {
                            y != c
                                && !self.mol.atom(y).aromatic
                                && matches!(self.z(y), 6 | 7 | 8 | 16)
                        })
                })
            }
            L11 => {
                self.aliphatic(i, 16)
                    && self.d(i) == 2
                    && self
                        .bonds(i)
                        .any(|(v, o, r)| single(o) && !r && matches!(self.z(v), 0 | 6))
            }
            L12 => {
                self.aliphatic(i, 16)
                    && self.d(i) == 4
                    && self.bonds(i).any(|(v, _, _)| matches!(self.z(v), 0 | 6))
                    && self
                        .bonds(i)
                        .filter(|&(v, o, _)| o == BondOrder::Double && self.aliphatic(v, 8))
                        .count()
                        >= 2
            }
            L13 => {
                self.aliphatic(i, 6)
                    && self.two_distinct(
                        i,
                        |o, r| single(o) && r,
                        |v| !self.mol.atom(v).aromatic && matches!(self.z(v), 6 | 7 | 8 | 16),
                        |v| !self.mol.atom(v).aromatic && matches!(self.z(v), 7 | 8 | 16),
                    )
            }
            L14 => {
                self.aromatic(i, 6)
                    && self.two_distinct(
                        i,
                        |o, _| o == BondOrder::Aromatic,
                        |v| self.mol.atom(v).aromatic && matches!(self.z(v), 6 | 7 | 8 | 16),
                        |v| self.mol.atom(v).aromatic && matches!(self.z(v), 7 | 8 | 16),
                    )
            }
            L15 => {
                self.aliphatic(i, 6)
                    && self
                        .bonds(i)
                        .filter(|&(v, o, r)| single(o) && r && self.aliphatic(v, 6))
                        .count()
                        >= 2
            }
            L16 => {
                self.aromatic(i, 6)
                    && self
                        .bonds(i)
                        .filter(|&(v, o, _)| o == BondOrder::Aromatic && self.aromatic(v, 6))
                        .count()
                        >= 2
            }
        }
    }
}

/// Indices of cleavable bonds, ascending.
pub fn brics_bonds(mol: &Mol) -> Vec<usize> {
    let view = View { mol };
    let pair = |a: usize, b: usize, rules: &[(Env, Env)]| {
        rules.iter().any(|&(x, y)| {
            (view.matches(a, x) && view.matches(b, y)) || (view.matches(a, y) && view.matches(b, x))
        })
    };
    mol.bonds()
        .iter()
        .enumerate()
        .filter(|&(bi, b)| {
            if mol.is_ring_bond(bi) {
                return false;
            }
            match b.order {
                BondOrder::Single => pair(b.a, b.b, SINGLE_RULES),
                BondOrder::Double => pair(b.a, b.b, &[(L7, L7)]),
                _ => false,
            }
        })
        .map(|(bi, _)| bi)
        .collect()
}
