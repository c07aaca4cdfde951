use std::collections::HashSet;

use super::{mix, Fingerprint};
use crate::mol::Mol;

fn atom_invariant(mol: &Mol, i: usize) -> u32 {
    let a = mol.atom(i);
    let mut h = 0;
    for v in [
        a.atomic_num as u32,
        mol.total_degree(i) as u32,
        a.hydrogens as u32,
        a.charge as i32 as u32,
        a.isotope as u32,
        mol.is_ring_atom(i) as u32,
    ] {
        h = mix(h, v);
    }
    h
}

/// Morgan iteration. An environment is identified by the set of bonds it
/// covers; an environment already seen at a lower radius (or a duplicate at
/// the same radius) does not contribute a second bit.
pub(super) fn fill(mol: &Mol, radius: usize, fp: &mut Fingerprint) {
    let n = mol.atom_count();
    let nbits = fp.nbits();
    let mut ids: Vec<u32> = (0..n).map(|i| atom_invariant(mol, i)).collect();
    for &id in &ids {
        fp.set(id as usize % nbits);
    }
    let mut envs: Vec<Vec<bool>> = vec![vec![false; mol.bond_count()]; n];
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    for layer in 0..radius {
        let mut next = ids.clone();
        let mut next_envs = envs.clone();
        let mut candidates: Vec<(Vec<bool>, u32, usize)> = Vec::with_capacity(n);
        for i in 0..n {
            let mut nbrs: Vec<(u32, u32)> = mol
                .neighbors(i)
                .iter()
                .map(|&(v, b)| (mol.bond(b).order.code() as u32, ids[v]))
                .collect();
            if nbrs.is_empty() {
                continue;
            }
            nbrs.sort_unstable();
            let mut h = mix(layer as u32, ids[i]);
            for (b, id) in nbrs {
                h = mix(mix(h, b), id);
            }
            next[i] = h;
            let env = &mut next_envs[i];
            for &(v, b) in mol.neighbors(i) {
                env[b] = true;
                for (k, covered) in envs[v].iter().enumerate() {
                    if *covered {
                        env[k] = true;
                    }
                }
            }
            candidates.push((env.clone(), h, i));
        }
        candidates.sort();
        for (env, h, _) in candidates {
            if seen.insert(env) {
                fp.set(h as usize % nbits);
            }
        }
        ids = next;
        envs = next_envs;
    }
}
