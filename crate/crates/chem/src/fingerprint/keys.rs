//! Structural keys in the spirit of MACCS: each bit answers one yes/no
//! question about element content, ring shape or functional groups.

use super::Fingerprint;
use crate::mol::{BondOrder, Mol};

const C: u8 = 6;
const N: u8 = 7;
const O: u8 = 8;
const F: u8 = 9;
const P: u8 = 15;
const S: u8 = 16;
const CL: u8 = 17;
const BR: u8 = 35;
const I: u8 = 53;

struct Ctx<'m> {
    mol: &'m Mol,
}

impl Ctx<'_> {
    fn z(&self, i: usize) -> u8 {
        self.mol.atom(i).atomic_num
    }

    fn atoms(&self) -> std::ops::Range<usize> {
        0..self.mol.atom_count()
    }

    fn count(&self, pred: impl Fn(usize) -> bool) -> usize {
        self.atoms().filter(|&i| pred(i)).count()
    }

    fn any(&self, pred: impl Fn(usize) -> bool) -> bool {
        self.atoms().any(pred)
    }

    fn elem(&self, z: u8) -> usize {
        self.count(|i| self.z(i) == z)
    }

    fn is_halogen(&self, i: usize) -> bool {
        matches!(self.z(i), F | CL | BR | I)
    }

    fn h(&self, i: usize) -> u8 {
        self.mol.atom(i).hydrogens
    }

    fn arom(&self, i: usize) -> bool {
        self.mol.atom(i).aromatic
    }

    /// Neighbours of `i` joined by a bond of the given localized order.
    fn nbrs_by(&self, i: usize, order: u8) -> impl Iterator<Item = usize> + '_ {
        self.mol
            .neighbors(i)
            .iter()
            .filter(move |&&(_, b)| {
                let bond = self.mol.bond(b);
                bond.order != BondOrder::Aromatic && bond.kekule == order
            })
            .map(|&(v, _)| v)
    }

    fn nbrs(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.mol.neighbors(i).iter().map(|&(v, _)| v)
    }

    fn has_double_to(&self, i: usize, z: u8) -> bool {
        self.nbrs_by(i, 2).any(|v| self.z(v) == z)
    }

    fn carbonyl(&self, i: usize) -> bool {
        self.z(i) == C && self.has_double_to(i, O)
    }

    fn bond_between(&self, za: u8, zb: u8, order: u8) -> bool {
        self.mol.bonds().iter().any(|b| {
            b.order != BondOrder::Aromatic
                && b.kekule == order
                && ((self.z(b.a) == za && self.z(b.b) == zb)
                    || (self.z(b.a) == zb && self.z(b.b) == za))
        })
    }

    fn ring_sizes(&self) -> Vec<usize> {
        self.mol
            .rings()
            .rings()
            .iter()
            .map(|r| r.atoms.len())
            .collect()
    }

    fn aromatic_rings(&self) -> usize {
        self.mol
            .rings()
            .rings()
            .iter()
            .filter(|r| r.atoms.iter().all(|&a| self.arom(a)))
            .count()
    }

    fn hydroxyl(&self, i: usize) -> bool {
        self.z(i) == O && self.h(i) >= 1 && self.mol.degree(i) == 1
    }

    fn amide_n(&self, i: usize) -> bool {
        self.z(i) == N && self.nbrs_by(i, 1).any(|v| self.carbonyl(v))
    }
}

type Key = fn(&Ctx) -> bool;

pub const KEY_COUNT: usize = 91;

const KEYS: [Key; KEY_COUNT] = [
    |c| c.any(|i| c.z(i) >= 21),
    |c| c.elem(5) > 0,
    |c| c.elem(14) > 0,
    |c| c.elem(P) > 0,
    |c| c.elem(S) > 0,
    |c| c.elem(F) > 0,
    |c| c.elem(CL) > 0,
    |c| c.elem(BR) > 0,
    |c| c.elem(I) > 0,
    |c| c.count(|i| c.is_halogen(i)) >= 2,
    |c| c.elem(N) >= 1,
    |c| c.elem(N) >= 2,
    |c| c.elem(N) >= 3,
    |c| c.elem(O) >= 1,
    |c| c.elem(O) >= 2,
    |c| c.elem(O) >= 3,
    |c| c.elem(O) >= 4,
    |c| c.any(|i| c.mol.atom(i).charge != 0),
    |c| c.any(|i| c.z(i) == N && c.mol.atom(i).charge > 0),
    |c| c.any(|i| c.z(i) == O && c.mol.atom(i).charge < 0),
    |c| c.aromatic_rings() >= 1,
    |c| c.aromatic_rings() >= 2,
    |c| c.ring_sizes().contains(&3),
    |c| c.ring_sizes().contains(&4),
    |c| c.ring_sizes().contains(&5),
    |c| c.ring_sizes().contains(&6),
    |c| c.ring_sizes().iter().any(|&s| s >= 7),
    |c| c.ring_sizes().iter().filter(|&&s| s == 6).count() >= 2,
    |c| c.ring_sizes().len() >= 3,
    |c| c.any(|i| c.mol.rings().atom_ring_count(i) >= 2),
    |c| c.any(|i| c.arom(i) && c.z(i) == N),
    |c| c.any(|i| c.arom(i) && matches!(c.z(i), O | S)),
    |c| c.any(|i| c.arom(i) && c.z(i) == N && c.h(i) > 0),
    |c| c.any(|i| !c.arom(i) && c.z(i) != C && c.mol.is_ring_atom(i)),
    |c| c.any(|i| c.carbonyl(i)),
    |c| c.count(|i| c.carbonyl(i)) >= 2,
    |c| c.any(|i| c.carbonyl(i) && c.h(i) >= 1),
    |c| c.any(|i| c.carbonyl(i) && c.nbrs_by(i, 1).filter(|&v| c.z(v) == C).count() == 2),
    |c| c.any(|i| c.carbonyl(i) && c.nbrs_by(i, 1).any(|v| c.hydroxyl(v))),
    |c| {
        c.any(|i| {
            c.carbonyl(i)
                && c.nbrs_by(i, 1).any(|v| {
                    c.z(v) == O && c.h(v) == 0 && c.nbrs_by(v, 1).any(|w| w != i && c.z(w) == C)
                })
        })
    },
    |c| c.any(|i| c.carbonyl(i) && c.nbrs_by(i, 1).any(|v| c.z(v) == N)),
    |c| c.any(|i| c.carbonyl(i) && c.nbrs_by(i, 1).filter(|&v| c.z(v) == N).count() == 2),
    |c| {
        c.any(|i| {
            c.carbonyl(i)
                && c.nbrs_by(i, 1).any(|v| c.z(v) == N)
                && c.nbrs_by(i, 1).any(|v| c.z(v) == O)
        })
    },
    |c| c.any(|i| c.hydroxyl(i)),
    |c| c.count(|i| c.hydroxyl(i)) >= 2,
    |c| c.any(|i| c.hydroxyl(i) && c.nbrs(i).any(|v| c.arom(v))),
    |c| {
        c.any(|i| {
            c.z(i) == O
                && !c.arom(i)
                && c.nbrs_by(i, 1)
                    .filter(|&v| c.z(v) == C && !c.carbonyl(v))
                    .count()
                    == 2
        })
    },
    |c| c.any(|i| c.z(i) == N && !c.arom(i) && c.h(i) == 2 && c.mol.degree(i) == 1),
    |c| {
        c.any(|i| {
            c.z(i) == N
                && !c.arom(i)
                && c.h(i) == 1
                && !c.amide_n(i)
                && c.nbrs_by(i, 1).filter(|&v| c.z(v) == C).count() == 2
        })
    },
    |c| {
        c.any(|i| {
            c.z(i) == N
                && !c.arom(i)
                && c.h(i) == 0
                && !c.amide_n(i)
                && c.nbrs_by(i, 1).filter(|&v| c.z(v) == C).count() == 3
        })
    },
    |c| c.any(|i| c.z(i) == N && !c.arom(i) && c.nbrs(i).any(|v| c.arom(v) && c.z(v) == C)),
    |c| c.bond_between(C, N, 3),
    |c| {
        c.any(|i| {
            c.z(i) == N
                && c.nbrs(i)
                    .filter(|&v| c.z(v) == O && c.mol.degree(v) == 1)
                    .count()
                    == 2
        })
    },
    |c| c.bond_between(N, N, 2),
    |c| c.bond_between(N, N, 1),
    |c| c.bond_between(N, O, 1) || c.bond_between(N, O, 2),
    |c| c.bond_between(C, N, 2),
    |c| c.bond_between(C, C, 2),
    |c| c.bond_between(C, C, 3),
    |c| c.bond_between(S, O, 2),
    |c| {
        c.any(|i| {
            c.z(i) == S
                && c.nbrs_by(i, 2).filter(|&v| c.z(v) == O).count() >= 2
                && c.nbrs_by(i, 1).any(|v| c.z(v) == N)
        })
    },
    |c| c.any(|i| c.z(i) == S && c.nbrs_by(i, 2).filter(|&v| c.z(v) == O).count() >= 2),
    |c| c.any(|i| c.z(i) == S && c.h(i) >= 1),
    |c| {
        c.any(|i| {
            c.z(i) == S && !c.arom(i) && c.nbrs_by(i, 1).filter(|&v| c.z(v) == C).count() == 2
        })
    },
    |c| c.bond_between(P, O, 2),
    |c| c.any(|i| c.z(i) == C && c.nbrs(i).filter(|&v| c.z(v) == F).count() >= 3),
    |c| c.any(|i| c.is_halogen(i) && c.nbrs(i).any(|v| c.arom(v))),
    |c| c.any(|i| c.is_halogen(i) && c.nbrs(i).any(|v| !c.arom(v) && c.z(v) == C)),
    |c| c.count(|i| c.z(i) == C && c.h(i) == 3) >= 2,
    |c| c.count(|i| c.z(i) == C && c.h(i) == 3) >= 3,
    |c| {
        c.any(|i| {
            c.z(i) == C
                && c.h(i) == 2
                && !c.arom(i)
                && c.nbrs_by(i, 1)
                    .any(|v| c.z(v) == C && c.h(v) == 2 && !c.arom(v))
        })
    },
    |c| c.any(|i| c.z(i) == C && c.nbrs_by(i, 1).count() == 4),
    |c| c.any(|i| c.z(i) == C && !c.arom(i) && c.h(i) == 1 && c.nbrs_by(i, 1).count() == 3),
    |c| c.mol.heavy_atom_count() >= 16,
    |c| c.mol.heavy_atom_count() >= 24,
    |c| 2 * c.count(|i| c.mol.is_ring_atom(i)) >= c.mol.atom_count().max(1),
    |c| {
        c.mol.bonds().iter().enumerate().any(|(bi, b)| {
            !c.mol.is_ring_bond(bi) && b.order == BondOrder::Single && c.arom(b.a) && c.arom(b.b)
        })
    },
    |c| c.any(|i| c.z(i) == C && !c.arom(i) && c.h(i) == 2 && c.nbrs(i).any(|v| c.arom(v))),
    |c| c.any(|i| c.z(i) == N && !c.arom(i) && c.mol.is_ring_atom(i)),
    |c| c.any(|i| c.z(i) == O && !c.arom(i) && c.mol.is_ring_atom(i)),
    |c| c.any(|i| c.z(i) == S && c.mol.is_ring_atom(i)),
    |c| {
        c.mol.bonds().iter().enumerate().any(|(bi, b)| {
            b.kekule == 2
                && b.order != BondOrder::Aromatic
                && !c.mol.is_ring_bond(bi)
                && (c.mol.is_ring_atom(b.a) || c.mol.is_ring_atom(b.b))
        })
    },
    |c| {
        c.any(|i| {
            c.carbonyl(i)
                && c.mol.is_ring_atom(i)
                && c.mol
                    .neighbors(i)
                    .iter()
                    .any(|&(v, b)| matches!(c.z(v), N | O) && c.mol.is_ring_bond(b))
        })
    },
    |c| c.any(|i| c.z(i) == N && c.nbrs_by(i, 1).filter(|&v| c.carbonyl(v)).count() >= 2),
    |c| c.any(|i| c.z(i) == C && c.nbrs(i).filter(|&v| c.z(v) == N).count() == 3),
    |c| {
        c.any(|i| {
            c.z(i) == C
                && c.nbrs_by(i, 2).any(|v| c.z(v) == C)
                && c.nbrs_by(i, 1).any(|v| matches!(c.z(v), N | O))
        })
    },
    |c| {
        c.any(|i| {
            c.z(i) == C
                && c.nbrs_by(i, 2).any(|v| c.z(v) == C)
                && c.nbrs_by(i, 1).any(|v| c.carbonyl(v))
        })
    },
    |c| {
        c.mol
            .rings()
            .rings()
            .iter()
            .any(|r| r.atoms.len() == 3 && r.atoms.iter().any(|&a| c.z(a) == O))
    },
    |c| {
        c.any(|i| {
            c.z(i) == C
                && !c.mol.is_ring_atom(i)
                && c.h(i) == 2
                && c.nbrs(i)
                    .filter(|&v| c.z(v) == C && !c.mol.is_ring_atom(v))
                    .count()
                    == 2
        })
    },
    |c| c.count(|i| matches!(c.z(i), N | O) && c.h(i) > 0) >= 2,
    |c| {
        c.mol
            .bonds()
            .iter()
            .any(|b| c.z(b.a) != C && c.z(b.b) != C && c.z(b.a) > 1 && c.z(b.b) > 1)
    },
];

pub(super) fn fill(mol: &Mol, fp: &mut Fingerprint) {
    let ctx = Ctx { mol };
    for (bit, key) in KEYS.iter().enumerate() {
        if key(&ctx) {
            fp.set(bit);
        }
    }
}
