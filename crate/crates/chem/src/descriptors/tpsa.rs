//! Topological polar surface area from Ertl's fragment contributions
//! (nitrogen and oxygen only).

use crate::mol::{BondOrder, Mol};

struct Env {
    nbrs: usize,
    hs: u8,
    charge: i8,
    single: usize,
    double: usize,
    triple: usize,
    aromatic: usize,
    in3: bool,
}

fn env(mol: &Mol, i: usize) -> Env {
    let mut e = Env {
        nbrs: mol.degree(i),
        hs: mol.atom(i).hydrogens,
        charge: mol.atom(i).charge,
        single: 0,
        double: 0,
        triple: 0,
        aromatic: 0,
        in3: mol.rings().atom_in_ring_of_size(i, 3),
    };
    for &(_, b) in mol.neighbors(i) {
        match mol.bond(b).order {
            BondOrder::Single => e.single += 1,
            BondOrder::Double => e.double += 1,
            BondOrder::Triple => e.triple += 1,
            BondOrder::Aromatic => e.aromatic += 1,
        }
    }
    e
}

fn nitrogen(e: &Env) -> f64 {
    let v = match (e.nbrs, e.hs, e.charge) {
        (1, 0, 0) if e.triple == 1 => Some(23.79),
        (1, 1, 0) if e.double == 1 => Some(23.85),
        (1, 2, 0) if e.single == 1 => Some(26.02),
        (1, 2, 1) if e.double == 1 => Some(25.59),
        (1, 3, 1) if e.single == 1 => Some(27.64),
        (2, 0, 0) if e.single == 1 && e.double == 1 => Some(12.36),
        (2, 0, 0) if e.triple == 1 && e.double == 1 => Some(13.60),
        (2, 1, 0) if e.single == 2 && e.in3 => Some(21.94),
        (2, 1, 0) if e.single == 2 => Some(12.03),
        (2, 0, 1) if e.triple == 1 && e.single == 1 => Some(4.36),
        (2, 1, 1) if e.double == 1 && e.single == 1 => Some(13.97),
        (2, 2, 1) if e.single == 2 => Some(16.61),
        (2, 0, 0) if e.aromatic == 2 => Some(12.89),
        (2, 1, 0) if e.aromatic == 2 => Some(15.79),
        (2, 1, 1) if e.aromatic == 2 => Some(14.14),
        (3, 0, 0) if e.single == 3 && e.in3 => Some(3.01),
        (3, 0, 0) if e.single == 3 => Some(3.24),
        (3, 0, 0) if e.single == 1 && e.double == 2 => Some(11.68),
        (3, 0, 1) if e.single == 2 && e.double == 1 => Some(3.01),
        (3, 1, 1) if e.single == 3 => Some(4.44),
        (3, 0, 0) if e.aromatic == 3 => Some(4.41),
        (3, 0, 0) if e.single == 1 && e.aromatic == 2 => Some(4.93),
        (3, 0, 0) if e.double == 1 && e.aromatic == 2 => Some(8.39),
        (3, 0, 1) if e.aromatic == 3 => Some(4.10),
        (3, 0, 1) if e.single == 1 && e.aromatic == 2 => Some(3.88),
        (4, 0, 1) if e.single == 4 => Some(0.0),
        _ => None,
    };
    v.unwrap_or_else(|| (30.5 - e.nbrs as f64 * 8.2 + e.hs as f64 * 1.5).max(0.0))
}

fn oxygen(e: &Env) -> f64 {
    let v = match (e.nbrs, e.hs, e.charge) {
        (1, 0, 0) if e.double == 1 => Some(17.07),
        (1, 1, 0) if e.single == 1 => Some(20.23),
        (1, 0, -1) if e.single == 1 => Some(23.06),
        (2, 0, 0) if e.single == 2 && e.in3 => Some(12.53),
        (2, 0, 0) if e.single == 2 => Some(9.23),
        (2, 0, 0) if e.aromatic == 2 => Some(13.14),
        _ => None,
    };
    v.unwrap_or_else(|| (28.5 - e.nbrs as f64 * 8.6 + e.hs as f64 * 1.5).max(0.0))
}

pub fn tpsa(mol: &Mol) -> f64 {
    (0..mol.atom_count())
        .map(|i| match mol.atom(i).atomic_num {
            7 => nitrogen(&env(mol, i)),
            8 => oxygen(&env(mol, i)),
            _ => 0.0,
        })
        .sum()
}
