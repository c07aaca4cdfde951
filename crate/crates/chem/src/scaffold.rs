//! Bemis-Murcko frameworks.

use crate::error::ChemError;
use crate::mol::Mol;
use crate::smiles::{canonical_smiles, CanonicalSmiles};

/// Ring systems plus the linkers joining them. Side-chain atoms are pruned
/// from the leaves inwards, then any pruned atom double-bonded to the
/// framework (a carbonyl oxygen, an exocyclic alkylidene carbon) is put
/// back. Acyclic input yields the empty scaffold.
pub fn murcko_mol(mol: &Mol) -> Mol {
    let n = mol.atom_count();
    let mut keep = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|i| mol.degree(i)).collect();
    let mut queue: Vec<usize> = (0..n)
        .filter(|&i| !mol.is_ring_atom(i) && degree[i] <= 1)
        .collect();
    while let Some(u) = queue.pop() {
        if !keep[u] {
            continue;
        }
        keep[u] = false;
        for &(v, _) in mol.neighbors(u) {
            if keep[v] {
                degree[v] -= 1;
                if !mol.is_ring_atom(v) && degree[v] <= 1 {
                    queue.push(v);
                }
            }
        }
    }
    if !keep.iter().any(|&k| k) {
        return Mol::empty();
    }
    let framework = keep.clone();
    for (i, kept) in framework.iter().enumerate() {
        if *kept {
            continue;
        }
        let attached_by_double = mol
            .neighbors(i)
            .iter()
            .any(|&(v, b)| framework[v] && mol.bond(b).kekule == 2);
        if attached_by_double {
            keep[i] = true;
        }
    }
    mol.subgraph(&keep)
}

pub fn murcko_scaffold(smiles: &CanonicalSmiles) -> Result<CanonicalSmiles, ChemError> {
    let mol = smiles.to_mol()?;
    Ok(canonical_smiles(&murcko_mol(&mol)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::canonicalize;

    fn scaffold(s: &str) -> String {
        murcko_scaffold(&canonicalize(s).unwrap())
            .unwrap()
            .into_string()
    }

    #[test]
    fn documented_examples() {
        assert_eq!(scaffold("c1ccccc1"), "c1ccccc1");
        assert_eq!(scaffold("Cc1ccccc1"), "c1ccccc1");
        assert_eq!(scaffold("CCO"), "");
    }

    #[test]
    fn linkers_and_exocyclic_double_bonds_survive() {
        assert_eq!(
            scaffold("O=C(Nc1ccccc1)c1ccccc1"),
            canonicalize("O=C(Nc1ccccc1)c1ccccc1").unwrap().as_str()
        );
        assert_eq!(scaffold("CC(=O)c1ccccc1"), "c1ccccc1");
        assert_eq!(
            scaffold("O=C1CCCCC1"),
            canonicalize("O=C1CCCCC1").unwrap().as_str()
        );
    }
}
