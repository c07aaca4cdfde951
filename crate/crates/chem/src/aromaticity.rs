//! Kekulization of aromatic input and Hückel-style aromaticity perception.

use crate::element;
use crate::mol::{BondOrder, Mol};

/// Whether an aromatic atom must carry one localized double bond inside its
/// aromatic system. `arom_bonds` counts aromatic bonds, `other_valence` sums
/// the orders of the remaining bonds, `hydrogens` is the explicit count for
/// bracket atoms (0 for organic-subset atoms, whose hydrogens are derived
/// afterwards).
pub(crate) fn needs_pi_bond(
    atomic_num: u8,
    charge: i8,
    arom_bonds: u8,
    other_valence: u8,
    hydrogens: u8,
) -> bool {
    let used = arom_bonds + other_valence + hydrogens;
    match element::allowed_valences(atomic_num, charge) {
        Some(vals) => match vals.into_iter().find(|&v| v >= used) {
            Some(v) => v > used,
            None => false,
        },
        None => false,
    }
}

/// Finds a perfect matching over `candidates` using aromatic bonds, by
/// backtracking on the most constrained atom first. Returns the bond indices
/// that become double bonds.
pub(crate) fn kekule_matching(
    n_atoms: usize,
    arom_edges: &[(usize, usize, usize)],
    candidates: &[bool],
) -> Option<Vec<usize>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_atoms];
    for &(a, b, bi) in arom_edges {
        if candidates[a] && candidates[b] {
            adj[a].push((b, bi));
            adj[b].push((a, bi));
        }
    }
    let mut matched = vec![false; n_atoms];
    let mut chosen = Vec::new();
    let mut budget = 200_000usize;
    if solve(&adj, candidates, &mut matched, &mut chosen, &mut budget) {
        Some(chosen)
    } else {
        None
    }
}

fn solve(
    adj: &[Vec<(usize, usize)>],
    candidates: &[bool],
    matched: &mut Vec<bool>,
    chosen: &mut Vec<usize>,
    budget: &mut usize,
) -> bool {
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    // most constrained unmatched candidate
    let mut best: Option<(usize, usize)> = None;
    for u in 0..adj.len() {
        if !candidates[u] || matched[u] {
            continue;
        }
        let free = adj[u].iter().filter(|(v, _)| !matched[*v]).count();
        if free == 0 {
            return false;
        }
        if best.map_or(true, |(_, f)| free < f) {
            best = Some((u, free));
        }
    }
    let Some((u, _)) = best else {
        return true;
    };
    matched[u] = true;
    for &(v, bi) in &adj[u] {
        if matched[v] {
            continue;
        }
        matched[v] = true;
        chosen.push(bi);
        if solve(adj, candidates, matched, chosen, budget) {
            return true;
        }
        chosen.pop();
        matched[v] = false;
    }
    matched[u] = false;
    false
}

/// Pi electrons an atom donates to a ring, or `None` if it cannot be part of
/// an aromatic ring.
fn pi_electrons(mol: &Mol, idx: usize) -> Option<u8> {
    let atom = mol.atom(idx);
    if !mol.is_ring_atom(idx) {
        return None;
    }
    if !matches!(atom.atomic_num, 5 | 6 | 7 | 8 | 15 | 16 | 33 | 34 | 52) {
        return None;
    }
    let mut ring_double = false;
    let mut exo_double_to_hetero = false;
    let mut exo_double_to_carbon = false;
    for &(nbr, bi) in mol.neighbors(idx) {
        match mol.bond(bi).kekule {
            3 => return None,
            2 => {
                if mol.is_ring_bond(bi) {
                    ring_double = true;
                } else if matches!(mol.atom(nbr).atomic_num, 0 | 6) {
                    exo_double_to_carbon = true;
                } else {
                    exo_double_to_hetero = true;
                }
            }
            _ => {}
        }
    }
    if ring_double {
        return Some(1);
    }
    if exo_double_to_carbon {
        return None;
    }
    if exo_double_to_hetero {
        return if atom.atomic_num == 6 { Some(0) } else { None };
    }
    let conn = mol.total_degree(idx);
    match (atom.atomic_num, atom.charge) {
        (6, -1) if conn == 3 => Some(2),
        (6, 1) if conn == 3 => Some(0),
        (5, 0) if conn == 3 => Some(0),
        (7 | 15 | 33, 0) if conn == 3 => Some(2),
        (7 | 15 | 33, -1) if conn == 2 => Some(2),
        (8 | 16 | 34 | 52, 0) if conn == 2 => Some(2),
        (8 | 16 | 34 | 52, 1) if conn == 3 => Some(2),
        _ => None,
    }
}

/// Re-derives aromatic flags from the localized structure. Single SSSR rings
/// and unions of two fused rings are tested against the 4n+2 rule.
pub(crate) fn perceive(mol: &mut Mol) {
    for a in mol.atoms.iter_mut() {
        a.aromatic = false;
    }
    for b in mol.bonds.iter_mut() {
        b.order = BondOrder::from_valence(b.kekule);
    }
    let electrons: Vec<Option<u8>> = (0..mol.atom_count())
        .map(|i| pi_electrons(mol, i))
        .collect();
    let rings = mol.rings.rings().to_vec();
    let eligible: Vec<bool> = rings
        .iter()
        .map(|r| r.atoms.iter().all(|&a| electrons[a].is_some()))
        .collect();
    let huckel = |atoms: &[usize]| {
        let total: u32 = atoms
            .iter()
            .map(|&a| electrons[a].unwrap_or(0) as u32)
            .sum();
        total % 4 == 2
    };
    let mut aromatic_bond = vec![false; mol.bond_count()];
    let mut aromatic_ring = vec![false; rings.len()];
    for (i, r) in rings.iter().enumerate() {
        if eligible[i] && huckel(&r.atoms) {
            aromatic_ring[i] = true;
            for &b in &r.bonds {
                aromatic_bond[b] = true;
            }
        }
    }
    for i in 0..rings.len() {
        for j in (i + 1)..rings.len() {
            if !(eligible[i] && eligible[j]) || (aromatic_ring[i] && aromatic_ring[j]) {
                continue;
            }
            let shared = rings[i].bonds.iter().any(|b| rings[j].bonds.contains(b));
            if !shared {
                continue;
            }
            let mut atoms: Vec<usize> = rings[i]
                .atoms
                .iter()
                .chain(&rings[j].atoms)
                .copied()
                .collect();
            atoms.sort_unstable();
            atoms.dedup();
            if huckel(&atoms) {
                for &b in rings[i].bonds.iter().chain(&rings[j].bonds) {
                    aromatic_bond[b] = true;
                }
            }
        }
    }
    for (bi, arom) in aromatic_bond.iter().enumerate() {
        if *arom {
            let (a, b) = (mol.bonds[bi].a, mol.bonds[bi].b);
            mol.bonds[bi].order = BondOrder::Aromatic;
            mol.atoms[a].aromatic = true;
            mol.atoms[b].aromatic = true;
        }
    }
}
