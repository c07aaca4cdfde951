//! Canonical atom ranking by iterative neighbourhood refinement with
//! tie-breaking.

use crate::mol::Mol;

type Key = (usize, Vec<(usize, u8)>);

fn initial_invariants(mol: &Mol) -> Vec<[i64; 8]> {
    (0..mol.atom_count())
        .map(|i| {
            let a = mol.atom(i);
            [
                mol.degree(i) as i64,
                a.atomic_num as i64,
                a.isotope as i64,
                a.charge as i64,
                a.hydrogens as i64,
                a.aromatic as i64,
                mol.is_ring_atom(i) as i64,
                a.map_class as i64,
            ]
        })
        .collect()
}

fn dense_ranks<K: Ord>(keys: &[K]) -> (Vec<usize>, usize) {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut ranks = vec![0; keys.len()];
    let mut classes = 0;
    for (pos, &i) in order.iter().enumerate() {
        if pos > 0 && keys[order[pos - 1]] != keys[i] {
            classes += 1;
        }
        ranks[i] = classes;
    }
    (ranks, if keys.is_empty() { 0 } else { classes + 1 })
}

fn refine(mol: &Mol, mut ranks: Vec<usize>, mut classes: usize) -> (Vec<usize>, usize) {
    loop {
        let keys: Vec<Key> = (0..mol.atom_count())
            .map(|i| {
                let mut nb: Vec<(usize, u8)> = mol
                    .neighbors(i)
                    .iter()
                    .map(|&(n, b)| (ranks[n], mol.bond(b).order.code()))
                    .collect();
                nb.sort_unstable();
                (ranks[i], nb)
            })
            .collect();
        let (next, n) = dense_ranks(&keys);
        if n == classes {
            return (next, n);
        }
        ranks = next;
        classes = n;
    }
}

/// Canonical rank of every atom: a permutation of `0..n` that depends only on
/// the labelled graph, not on input atom order.
pub fn canonical_ranks(mol: &Mol) -> Vec<usize> {
    let n = mol.atom_count();
    let (ranks, classes) = dense_ranks(&initial_invariants(mol));
    let (mut ranks, mut classes) = refine(mol, ranks, classes);
    while classes < n {
        // break the lowest tie and propagate
        let mut counts = vec![0usize; n];
        for &r in &ranks {
            counts[r] += 1;
        }
        let tied = (0..n).find(|&r| counts[r] > 1).unwrap();
        let pick = (0..n).find(|&i| ranks[i] == tied).unwrap();
        let split: Vec<usize> = (0..n)
            .map(|i| {
                if ranks[i] == tied && i != pick {
                    2 * ranks[i] + 1
                } else {
                    2 * ranks[i]
                }
            })
            .collect();
        let (r, c) = dense_ranks(&split);
        let refined = refine(mol, r, c);
        ranks = refined.0;
        classes = refined.1;
    }
    ranks
}

/// Symmetry classes after refinement only (no tie-breaking). Atoms sharing a
/// class are topologically equivalent for all practical molecules.
pub fn symmetry_classes(mol: &Mol) -> Vec<usize> {
    let (ranks, classes) = dense_ranks(&initial_invariants(mol));
    refine(mol, ranks, classes).0
}
