//! Hydrogen-bond donor/acceptor and rotatable-bond counts.

use crate::mol::{BondOrder, Mol};

fn single(mol: &Mol, b: usize) -> bool {
    mol.bond(b).order == BondOrder::Single
}

fn double_nonring(mol: &Mol, b: usize) -> bool {
    mol.bond(b).order == BondOrder::Double && !mol.is_ring_bond(b)
}

/// Atoms with a (non-ring, for the acceptor rule) double bond to O, N, P or S.
fn double_to_onps(mol: &Mol, i: usize, nonring_only: bool) -> bool {
    mol.neighbors(i).iter().any(|&(v, b)| {
        let is_double = if nonring_only {
            double_nonring(mol, b)
        } else {
            mol.bond(b).order == BondOrder::Double
        };
        is_double && matches!(mol.atom(v).atomic_num, 7 | 8 | 15 | 16)
    })
}

/// N-H and O-H/S-H donors: neutral trivalent N with H, protonated
/// tetravalent N with H, neutral O or S with exactly one H, aromatic [nH].
pub fn h_donors(mol: &Mol) -> u32 {
    (0..mol.atom_count())
        .filter(|&i| {
            let a = mol.atom(i);
            let v = mol.valence(i);
            match (a.atomic_num, a.aromatic) {
                (7, false) => a.hydrogens > 0 && ((v == 3) || (a.charge == 1 && v == 4)),
                (8 | 16, false) => a.hydrogens == 1 && a.charge == 0,
                (7, true) => a.hydrogens == 1 && a.charge == 0,
                _ => false,
            }
        })
        .count() as u32
}

/// Acceptors: hydroxyl/thiol not on an acid-like centre, divalent O/S
/// without H, anionic O/S, trivalent N not conjugated to an exocyclic
/// heteroatom double bond, pyridine-type aromatic n, and neutral aromatic o/s.
pub fn h_acceptors(mol: &Mol) -> u32 {
    (0..mol.atom_count())
        .filter(|&i| {
            let a = mol.atom(i);
            let v = mol.valence(i);
            match (a.atomic_num, a.aromatic) {
                (8 | 16, false) => {
                    (a.hydrogens == 1
                        && v == 2
                        && mol
                            .neighbors(i)
                            .iter()
                            .any(|&(n, b)| single(mol, b) && !double_to_onps(mol, n, false)))
                        || (a.hydrogens == 0 && v == 2)
                        || a.charge < 0
                }
                (7, false) => {
                    v == 3
                        && !mol
                            .neighbors(i)
                            .iter()
                            .any(|&(n, b)| single(mol, b) && double_to_onps(mol, n, true))
                }
                (7, true) => a.hydrogens == 0 && a.charge == 0 && mol.degree(i) == 2,
                (8 | 16, true) => a.charge == 0,
                _ => false,
            }
        })
        .count() as u32
}

fn in_triple(mol: &Mol, i: usize) -> bool {
    mol.neighbors(i)
        .iter()
        .any(|&(_, b)| mol.bond(b).order == BondOrder::Triple)
}

/// CX3 with three identical halogens, or a carbon carrying three methyls.
fn symmetric_top(mol: &Mol, i: usize) -> bool {
    if mol.atom(i).atomic_num != 6 {
        return false;
    }
    let count =
        |pred: &dyn Fn(usize) -> bool| mol.neighbors(i).iter().filter(|&&(n, _)| pred(n)).count();
    let halo = [9u8, 17, 35]
        .iter()
        .any(|&z| count(&|n| mol.atom(n).atomic_num == z) >= 3);
    let methyls = count(&|n| {
        let a = mol.atom(n);
        a.atomic_num == 6 && !a.aromatic && a.hydrogens == 3
    });
    halo || methyls >= 3
}

/// Trigonal carbon double-bonded to N, O or S (or to a cationic N).
fn acyl_like(mol: &Mol, i: usize) -> bool {
    let a = mol.atom(i);
    a.atomic_num == 6
        && !a.aromatic
        && mol.degree(i) == 3
        && mol.neighbors(i).iter().any(|&(n, b)| {
            let x = mol.atom(n);
            mol.bond(b).order == BondOrder::Double
                && !x.aromatic
                && matches!(x.atomic_num, 7 | 8 | 16)
        })
}

fn amide_like_bond(mol: &Mol, c: usize, x: usize) -> bool {
    let xa = mol.atom(x);
    let hetero = xa.atomic_num == 7 || (!xa.aromatic && matches!(xa.atomic_num, 8 | 16));
    acyl_like(mol, c) && hetero
}

/// Strict rotatable bonds: non-ring single bonds between non-terminal heavy
/// atoms, excluding triple-bond atoms, CX3/t-butyl tops, and the C-X bond of
/// amides, esters, thioesters and amidines.
pub fn rotatable_bonds(mol: &Mol) -> u32 {
    let eligible = |i: usize| mol.degree(i) > 1 && !in_triple(mol, i) && !symmetric_top(mol, i);
    mol.bonds()
        .iter()
        .enumerate()
        .filter(|&(bi, b)| {
            matches!(b.order, BondOrder::Single | BondOrder::Aromatic)
                && !mol.is_ring_bond(bi)
                && eligible(b.a)
                && eligible(b.b)
                && !amide_like_bond(mol, b.a, b.b)
                && !amide_like_bond(mol, b.b, b.a)
        })
        .count() as u32
}
