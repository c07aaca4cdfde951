use std::collections::BTreeSet;

use crate::aromaticity::needs_pi_bond;
use crate::element;
use crate::mol::{BondOrder, Mol};

/// One piece of written SMILES. Attachment pieces are ring-bond placeholders
/// whose digits are assigned once the whole SAFE string is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Piece {
    Text(String),
    Attach { label: u16, bond: &'static str },
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Written {
    pub pieces: Vec<Piece>,
    /// Highest ring-closure digit used for intra-fragment rings.
    pub max_digit: u32,
}

impl Written {
    pub fn text(&self) -> String {
        self.pieces
            .iter()
            .map(|p| match p {
                Piece::Text(t) => t.as_str(),
                Piece::Attach { .. } => "?",
            })
            .collect()
    }
}

fn bond_symbol(mol: &Mol, bond: usize) -> &'static str {
    let b = mol.bond(bond);
    match b.order {
        BondOrder::Aromatic => "",
        BondOrder::Single => {
            if mol.atom(b.a).aromatic && mol.atom(b.b).aromatic {
                "-"
            } else {
                ""
            }
        }
        BondOrder::Double => "=",
        BondOrder::Triple => "#",
    }
}

/// Hydrogen count the parser would derive for this atom if written without
/// brackets, or `None` if it cannot be written that way.
fn organic_hydrogens(mol: &Mol, idx: usize) -> Option<u8> {
    let atom = mol.atom(idx);
    let allowed = element::allowed_valences(atom.atomic_num, 0)?;
    let mut arom = 0u8;
    let mut other = 0u8;
    let mut has_pi = false;
    for &(_, bi) in mol.neighbors(idx) {
        let b = mol.bond(bi);
        if b.order == BondOrder::Aromatic {
            arom += 1;
            has_pi |= b.kekule == 2;
        } else {
            other += b.kekule;
        }
    }
    let mut valence = arom + other;
    if atom.aromatic {
        if needs_pi_bond(atom.atomic_num, 0, arom, other, 0) != has_pi {
            return None;
        }
        if has_pi {
            valence += 1;
        }
    }
    allowed
        .into_iter()
        .find(|&v| v >= valence)
        .map(|v| v - valence)
}

pub(crate) fn atom_text(mol: &Mol, idx: usize) -> String {
    let a = mol.atom(idx);
    let plain = a.charge == 0 && a.isotope == 0 && a.map_class == 0;
    if plain && a.is_dummy() && a.hydrogens == 0 {
        return "*".to_string();
    }
    let symbol = if a.aromatic {
        a.symbol().to_ascii_lowercase()
    } else {
        a.symbol().to_string()
    };
    if plain
        && element::is_organic_subset(a.atomic_num)
        && organic_hydrogens(mol, idx) == Some(a.hydrogens)
    {
        return symbol;
    }
    let mut s = String::from("[");
    if a.isotope > 0 {
        s.push_str(&a.isotope.to_string());
    }
    s.push_str(&symbol);
    match a.hydrogens {
        0 => {}
        1 => s.push('H'),
        h => s.push_str(&format!("H{h}")),
    }
    match a.charge {
        0 => {}
        1 => s.push('+'),
        -1 => s.push('-'),
        c if c > 0 => s.push_str(&format!("+{c}")),
        c => s.push_str(&format!("-{}", -c)),
    }
    if a.map_class > 0 {
        s.push_str(&format!(":{}", a.map_class));
    }
    s.push(']');
    s
}

fn digit_text(d: u32) -> String {
    if d < 10 {
        d.to_string()
    } else {
        format!("%{d:02}")
    }
}

struct Walk<'m> {
    mol: &'m Mol,
    ranks: &'m [usize],
    attach_mode: bool,
    visited: Vec<bool>,
    /// Ring-closure bonds touching each atom.
    closures: Vec<Vec<usize>>,
    /// Tree children (atom, bond) in emission order.
    children: Vec<Vec<(usize, usize)>>,
    used_bond: Vec<bool>,
}

impl<'m> Walk<'m> {
    fn is_attachment(&self, idx: usize) -> bool {
        self.attach_mode && self.mol.atom(idx).is_dummy() && self.mol.atom(idx).map_class > 0
    }

    fn sorted_neighbors(&self, u: usize) -> Vec<(usize, usize)> {
        let mut nbrs = self.mol.neighbors(u).to_vec();
        nbrs.sort_by_key(|&(n, _)| self.ranks[n]);
        nbrs
    }

    fn classify(&mut self, root: usize) {
        // iterative DFS mirroring the emission order
        let mut stack: Vec<(usize, Vec<(usize, usize)>, usize)> = Vec::new();
        self.visited[root] = true;
        let nb = self.sorted_neighbors(root);
        stack.push((root, nb, 0));
        while let Some((u, nbrs, pos)) = stack.last_mut() {
            let u = *u;
            if *pos >= nbrs.len() {
                stack.pop();
                continue;
            }
            let (v, bi) = nbrs[*pos];
            *pos += 1;
            if self.used_bond[bi] || self.is_attachment(v) {
                continue;
            }
            self.used_bond[bi] = true;
            if self.visited[v] {
                self.closures[u].push(bi);
                self.closures[v].push(bi);
            } else {
                self.visited[v] = true;
                self.children[u].push((v, bi));
                let nb = self.sorted_neighbors(v);
                stack.push((v, nb, 0));
            }
        }
    }
}

struct Emitter<'w, 'm> {
    walk: &'w Walk<'m>,
    pieces: Vec<Piece>,
    text: String,
    emitted: Vec<bool>,
    open: Vec<Option<u32>>,
    in_use: BTreeSet<u32>,
    max_digit: u32,
}

impl<'w, 'm> Emitter<'w, 'm> {
    fn flush(&mut self) {
        if !self.text.is_empty() {
            self.pieces
                .push(Piece::Text(std::mem::take(&mut self.text)));
        }
    }

    fn emit(&mut self, root: usize) {
        // explicit stack of actions to avoid deep recursion on long chains
        enum Act {
            Atom(usize, Option<usize>),
            Text(&'static str),
        }
        let mut stack = vec![Act::Atom(root, None)];
        while let Some(act) = stack.pop() {
            match act {
                Act::Text(t) => self.text.push_str(t),
                Act::Atom(u, via) => {
                    let mol = self.walk.mol;
                    if let Some(bi) = via {
                        self.text.push_str(bond_symbol(mol, bi));
                    }
                    self.text.push_str(&atom_text(mol, u));
                    self.emitted[u] = true;
                    self.ring_bonds(u);
                    let kids = &self.walk.children[u];
                    for (k, &(v, bi)) in kids.iter().enumerate().rev() {
                        if k + 1 < kids.len() {
                            stack.push(Act::Text(")"));
                            stack.push(Act::Atom(v, Some(bi)));
                            stack.push(Act::Text("("));
                        } else {
                            stack.push(Act::Atom(v, Some(bi)));
                        }
                    }
                }
            }
        }
    }

    fn ring_bonds(&mut self, u: usize) {
        let mol = self.walk.mol;
        let mut closures = self.walk.closures[u].clone();
        closures.sort_by_key(|&bi| self.walk.ranks[mol.bond(bi).other(u)]);
        let mut freed = Vec::new();
        for bi in closures {
            let v = mol.bond(bi).other(u);
            if self.emitted[v] && v != u {
                let d = self.open[bi].take().expect("closure opened");
                self.text.push_str(&digit_text(d));
                freed.push(d);
            } else {
                let d = (1..).find(|d| !self.in_use.contains(d)).unwrap();
                self.in_use.insert(d);
                self.max_digit = self.max_digit.max(d);
                self.open[bi] = Some(d);
                self.text.push_str(bond_symbol(mol, bi));
                self.text.push_str(&digit_text(d));
            }
        }
        for d in freed {
            self.in_use.remove(&d);
        }
        if self.walk.attach_mode {
            let mut attachments: Vec<(usize, usize)> = mol
                .neighbors(u)
                .iter()
                .filter(|(v, _)| self.walk.is_attachment(*v))
                .copied()
                .collect();
            attachments.sort_by_key(|&(v, _)| self.walk.ranks[v]);
            for (v, bi) in attachments {
                let bond = match mol.bond(bi).order {
                    BondOrder::Double => "=",
                    BondOrder::Triple => "#",
                    BondOrder::Single if mol.atom(u).aromatic => "-",
                    _ => "",
                };
                self.flush();
                self.pieces.push(Piece::Attach {
                    label: mol.atom(v).map_class,
                    bond,
                });
            }
        }
    }
}

/// Writes one connected component rooted at `root`, visiting neighbours in
/// ascending rank. With `attach_mode`, dummy atoms carrying an atom class
/// are emitted as attachment placeholders on their neighbour.
pub(crate) fn write_component(
    mol: &Mol,
    ranks: &[usize],
    root: usize,
    attach_mode: bool,
) -> Written {
    let n = mol.atom_count();
    let mut walk = Walk {
        mol,
        ranks,
        attach_mode,
        visited: vec![false; n],
        closures: vec![Vec::new(); n],
        children: vec![Vec::new(); n],
        used_bond: vec![false; mol.bond_count()],
    };
    walk.classify(root);
    let mut em = Emitter {
        walk: &walk,
        pieces: Vec::new(),
        text: String::new(),
        emitted: vec![false; n],
        open: vec![None; mol.bond_count()],
        in_use: BTreeSet::new(),
        max_digit: 0,
    };
    em.emit(root);
    em.flush();
    Written {
        pieces: em.pieces,
        max_digit: em.max_digit,
    }
}

/// Writes the whole molecule, components ordered by their lowest rank.
pub(crate) fn write_smiles(mol: &Mol, ranks: &[usize]) -> String {
    let mut comps = mol.components();
    for c in comps.iter_mut() {
        c.sort_by_key(|&a| ranks[a]);
    }
    comps.sort_by_key(|c| ranks[c[0]]);
    comps
        .iter()
        .map(|c| write_component(mol, ranks, c[0], false).text())
        .collect::<Vec<_>>()
        .join(".")
}
