use super::{mix, Fingerprint};
use crate::mol::Mol;

fn atom_code(mol: &Mol, i: usize) -> u32 {
    let a = mol.atom(i);
    (a.atomic_num as u32) << 8 | (a.aromatic as u32) << 4 | mol.degree(i).min(15) as u32
}

fn path_hash(mol: &Mol, atoms: &[usize], bonds: &[usize]) -> u32 {
    let fwd: Vec<u32> = atoms
        .iter()
        .enumerate()
        .flat_map(|(k, &a)| {
            let bond = bonds.get(k).map(|&b| mol.bond(b).order.code() as u32);
            std::iter::once(atom_code(mol, a)).chain(bond)
        })
        .collect();
    let rev: Vec<u32> = fwd.iter().rev().copied().collect();
    let canon = fwd.min(rev);
    canon.into_iter().fold(bonds.len() as u32, mix)
}

/// Every simple linear path of 1..=`max_len` bonds sets two bits.
pub(super) fn fill(mol: &Mol, max_len: usize, fp: &mut Fingerprint) {
    let nbits = fp.nbits();
    let mut atoms = Vec::new();
    let mut bonds = Vec::new();
    let mut on_path = vec![false; mol.atom_count()];
    for start in 0..mol.atom_count() {
        atoms.push(start);
        on_path[start] = true;
        extend(
            mol,
            max_len,
            &mut atoms,
            &mut bonds,
            &mut on_path,
            &mut |atoms, bonds| {
                // each path is reached from both ends; only hash it once
                if atoms[0] < atoms[atoms.len() - 1] {
                    let h = path_hash(mol, atoms, bonds);
                    fp.set(h as usize % nbits);
                    fp.set(mix(h, 0x5bd1_e995) as usize % nbits);
                }
            },
        );
        on_path[start] = false;
        atoms.pop();
    }
}

fn extend(
    mol: &Mol,
    max_len: usize,
    atoms: &mut Vec<usize>,
    bonds: &mut Vec<usize>,
    on_path: &mut Vec<bool>,
    emit: &mut dyn FnMut(&[usize], &[usize]),
) {
    if bonds.len() == max_len {
        return;
    }
    let tail = *atoms.last().unwrap();
    for &(v, b) in mol.neighbors(tail) {
        if on_path[v] {
            continue;
        }
        atoms.push(v);
        bonds.push(b);
        on_path[v] = true;
        emit(atoms, bonds);
        extend(mol, max_len, atoms, bonds, on_path, emit);
        on_path[v] = false;
        bonds.pop();
        atoms.pop();
    }
}
