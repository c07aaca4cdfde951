//! Ring membership (bridge detection) and a smallest set of smallest rings.

use std::collections::{HashSet, VecDeque};

use crate::mol::Mol;

#[derive(Clone, Debug, Default)]
pub struct Ring {
    pub atoms: Vec<usize>,
    pub bonds: Vec<usize>,
}

impl Ring {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

#[derive(Clone, Debug, Default)]
pub struct RingInfo {
    ring_bond: Vec<bool>,
    ring_atom: Vec<bool>,
    rings: Vec<Ring>,
}

impl RingInfo {
    pub fn atom_in_ring(&self, atom: usize) -> bool {
        self.ring_atom.get(atom).copied().unwrap_or(false)
    }

    pub fn bond_in_ring(&self, bond: usize) -> bool {
        self.ring_bond.get(bond).copied().unwrap_or(false)
    }

    /// SSSR rings, smallest first.
    pub fn rings(&self) -> &[Ring] {
        &self.rings
    }

    pub fn num_rings(&self) -> usize {
        self.rings.len()
    }

    /// Number of SSSR rings containing `atom`.
    pub fn atom_ring_count(&self, atom: usize) -> usize {
        self.rings
            .iter()
            .filter(|r| r.atoms.contains(&atom))
            .count()
    }

    pub fn atom_in_ring_of_size(&self, atom: usize, size: usize) -> bool {
        self.rings
            .iter()
            .any(|r| r.len() == size && r.atoms.contains(&atom))
    }

    pub(crate) fn perceive(mol: &Mol) -> RingInfo {
        let ring_bond = find_ring_bonds(mol);
        let mut ring_atom = vec![false; mol.atom_count()];
        for (i, b) in mol.bonds().iter().enumerate() {
            if ring_bond[i] {
                ring_atom[b.a] = true;
                ring_atom[b.b] = true;
            }
        }
        let rings = sssr(mol, &ring_bond, &ring_atom);
        RingInfo {
            ring_bond,
            ring_atom,
            rings,
        }
    }
}

/// Tarjan bridge finding; every non-bridge bond lies on a cycle.
fn find_ring_bonds(mol: &Mol) -> Vec<bool> {
    let n = mol.atom_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_bridge = vec![false; mol.bond_count()];
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (atom, parent bond, next neighbour position)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (u, pb, ref mut pos)) = stack.last_mut() {
            if *pos < mol.neighbors(u).len() {
                let (v, bi) = mol.neighbors(u)[*pos];
                *pos += 1;
                if bi == pb {
                    continue;
                }
                if disc[v] == usize::MAX {
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    stack.push((v, bi, 0));
                } else {
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] > disc[p] {
                        is_bridge[pb] = true;
                    }
                }
            }
        }
    }
    is_bridge.into_iter().map(|b| !b).collect()
}

/// BFS shortest path between `from` and `to` over ring bonds, excluding
/// `skip_bond`. Returns bond indices.
fn shortest_path(
    mol: &Mol,
    ring_bond: &[bool],
    from: usize,
    to: usize,
    skip_bond: usize,
) -> Option<Vec<usize>> {
    let n = mol.atom_count();
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        let mut nbrs: Vec<(usize, usize)> = mol.neighbors(u).to_vec();
        nbrs.sort_unstable();
        for (v, bi) in nbrs {
            if bi == skip_bond || !ring_bond[bi] || seen[v] {
                continue;
            }
            seen[v] = true;
            prev[v] = Some((u, bi));
            queue.push_back(v);
        }
    }
    if !seen[to] {
        return None;
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, bi) = prev[cur]?;
        path.push(bi);
        cur = p;
    }
    Some(path)
}

/// BFS tree from `root` over ring bonds: parent bond per atom and depth.
fn bfs_tree(
    mol: &Mol,
    ring_bond: &[bool],
    root: usize,
) -> (Vec<Option<(usize, usize)>>, Vec<usize>) {
    let n = mol.atom_count();
    let mut prev = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let mut nbrs: Vec<(usize, usize)> = mol.neighbors(u).to_vec();
        nbrs.sort_unstable();
        for (v, bi) in nbrs {
            if !ring_bond[bi] || depth[v] != usize::MAX {
                continue;
            }
            depth[v] = depth[u] + 1;
            prev[v] = Some((u, bi));
            queue.push_back(v);
        }
    }
    (prev, depth)
}

fn path_to_root(prev: &[Option<(usize, usize)>], mut atom: usize) -> Vec<usize> {
    let mut bonds = Vec::new();
    while let Some((p, bi)) = prev[atom] {
        bonds.push(bi);
        atom = p;
    }
    bonds
}

fn sssr(mol: &Mol, ring_bond: &[bool], ring_atom: &[bool]) -> Vec<Ring> {
    let ring_bonds: Vec<usize> = (0..mol.bond_count()).filter(|&i| ring_bond[i]).collect();
    if ring_bonds.is_empty() {
        return Vec::new();
    }
    // Cyclomatic number of the ring subgraph.
    let n_ring_atoms = ring_atom.iter().filter(|&&r| r).count();
    let n_comp = ring_components(mol, ring_bond, ring_atom);
    let target = ring_bonds.len() + n_comp - n_ring_atoms;

    let mut candidates: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut push = |mut cycle: Vec<usize>, candidates: &mut Vec<Vec<usize>>| {
        cycle.sort_unstable();
        cycle.dedup();
        if seen.insert(cycle.clone()) {
            candidates.push(cycle);
        }
    };
    for &bi in &ring_bonds {
        let b = mol.bond(bi);
        if let Some(mut path) = shortest_path(mol, ring_bond, b.a, b.b, bi) {
            path.push(bi);
            push(path, &mut candidates);
        }
    }
    let mut basis = select_basis(mol, &mut candidates, target);
    if basis.len() < target {
        // Horton candidates for cage-like systems.
        for root in 0..mol.atom_count() {
            if !ring_atom[root] {
                continue;
            }
            let (prev, depth) = bfs_tree(mol, ring_bond, root);
            for &bi in &ring_bonds {
                let b = mol.bond(bi);
                if depth[b.a] == usize::MAX || depth[b.b] == usize::MAX {
                    continue;
                }
                if prev[b.a].map(|p| p.1) == Some(bi) || prev[b.b].map(|p| p.1) == Some(bi) {
                    continue;
                }
                let pa = path_to_root(&prev, b.a);
                let pb = path_to_root(&prev, b.b);
                let sa: HashSet<usize> = pa.iter().copied().collect();
                if pb.iter().any(|x| sa.contains(x)) {
                    continue;
                }
                let mut cycle = pa;
                cycle.extend(pb);
                cycle.push(bi);
                push(cycle, &mut candidates);
            }
        }
        basis = select_basis(mol, &mut candidates, target);
    }
    basis
}

fn ring_components(mol: &Mol, ring_bond: &[bool], ring_atom: &[bool]) -> usize {
    let n = mol.atom_count();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if !ring_atom[s] || seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &(v, bi) in mol.neighbors(u) {
                if ring_bond[bi] && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    count
}

/// Greedy GF(2) elimination: keep the shortest linearly independent cycles.
fn select_basis(mol: &Mol, candidates: &mut [Vec<usize>], target: usize) -> Vec<Ring> {
    candidates.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let words = mol.bond_count().div_ceil(64);
    let mut reduced: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut out = Vec::new();
    for cycle in candidates.iter() {
        if out.len() == target {
            break;
        }
        let mut v = vec![0u64; words];
        for &bi in cycle {
            v[bi / 64] |= 1 << (bi % 64);
        }
        for (pivot, row) in &reduced {
            if v[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x ^= y;
                }
            }
        }
        let pivot = v
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize);
        if let Some(p) = pivot {
            // keep rows reduced so later pivots stay valid
            for (_, row) in reduced.iter_mut() {
                if row[p / 64] >> (p % 64) & 1 == 1 {
                    for (x, y) in row.iter_mut().zip(&v) {
                        *x ^= y;
                    }
                }
            }
            reduced.push((p, v));
            let mut atoms: Vec<usize> = cycle
                .iter()
                .flat_map(|&bi| [mol.bond(bi).a, mol.bond(bi).b])
                .collect();
            atoms.sort_unstable();
            atoms.dedup();
            out.push(Ring {
                atoms,
                bonds: cycle.clone(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::mol::Mol;

    fn sizes(smi: &str) -> Vec<usize> {
        let m = Mol::from_smiles(smi).unwrap();
        let mut s: Vec<usize> = m.rings().rings().iter().map(|r| r.len()).collect();
        s.sort_unstable();
        s
    }

    #[test]
    fn ring_sets() {
        assert_eq!(sizes("CCO"), Vec::<usize>::new());
        assert_eq!(sizes("c1ccccc1"), vec![6]);
        assert_eq!(sizes("c1ccc2ccccc2c1"), vec![6, 6]);
        assert_eq!(sizes("C1CC2CCC1C2"), vec![5, 5]);
        assert_eq!(sizes("C12C3C4C1C5C2C3C45"), vec![4, 4, 4, 4, 4]);
        assert_eq!(sizes("c1ccccc1-c1ccccc1"), vec![6, 6]);
    }

    #[test]
    fn ring_membership() {
        let m = Mol::from_smiles("Cc1ccccc1").unwrap();
        assert!(!m.is_ring_atom(0));
        assert!(m.is_ring_atom(1));
        assert!(!m.is_ring_bond(0));
        assert!(m.is_ring_bond(1));
    }
}
