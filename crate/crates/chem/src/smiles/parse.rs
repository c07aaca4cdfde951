use std::collections::BTreeMap;

use crate::aromaticity::{kekule_matching, needs_pi_bond};
use crate::element;
use crate::error::ChemError;
use crate::mol::{Atom, Mol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RawBond {
    Implicit,
    Single,
    Double,
    Triple,
    Aromatic,
}

#[derive(Debug)]
struct RawAtom {
    atom: Atom,
    /// Explicit hydrogen count for bracket atoms.
    bracket_h: Option<u8>,
    /// Hydrogens folded in from explicit `[H]` neighbours.
    folded_h: u8,
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
    atoms: Vec<RawAtom>,
    bonds: Vec<(usize, usize, RawBond)>,
    open_rings: BTreeMap<u32, (usize, RawBond)>,
}

/// Parses SMILES (dot-separated components allowed; ring-closure digits may
/// span components) into a sanitized molecule. Stereo marks are accepted and
/// discarded.
pub fn parse(input: &str) -> Result<Mol, ChemError> {
    parse_with(input, false)
}

/// Like [`parse`], but every unclosed ring bond is capped with a dummy atom
/// whose atom class is the ring-bond number. Used for isolated fragments.
pub fn parse_open(input: &str) -> Result<Mol, ChemError> {
    parse_with(input, true)
}

fn parse_with(input: &str, cap_open_rings: bool) -> Result<Mol, ChemError> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(ChemError::parse(input, "empty input"));
    }
    let mut p = Parser {
        input,
        bytes: trimmed.as_bytes(),
        pos: 0,
        atoms: Vec::new(),
        bonds: Vec::new(),
        open_rings: BTreeMap::new(),
    };
    p.run()?;
    if cap_open_rings {
        for (digit, (atom, bond)) in std::mem::take(&mut p.open_rings) {
            let mut dummy = Atom::new(element::DUMMY);
            dummy.map_class = digit as u16;
            p.atoms.push(RawAtom {
                atom: dummy,
                bracket_h: Some(0),
                folded_h: 0,
            });
            p.bonds.push((atom, p.atoms.len() - 1, bond));
        }
    } else if let Some(d) = p.open_rings.keys().next() {
        return Err(ChemError::parse(input, format!("unclosed ring bond {d}")));
    }
    build(input, p.atoms, p.bonds)
}

impl<'a> Parser<'a> {
    fn err(&self, reason: impl Into<String>) -> ChemError {
        ChemError::parse(
            self.input,
            format!("{} at position {}", reason.into(), self.pos),
        )
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn run(&mut self) -> Result<(), ChemError> {
        let mut prev: Option<usize> = None;
        let mut branch_stack: Vec<Option<usize>> = Vec::new();
        let mut pending: Option<RawBond> = None;
        let mut expect_atom = true;
        while let Some(c) = self.peek() {
            match c {
                b'(' => {
                    if prev.is_none() || pending.is_some() {
                        return Err(self.err("branch without preceding atom"));
                    }
                    branch_stack.push(prev);
                    self.pos += 1;
                    expect_atom = true;
                }
                b')' => {
                    if expect_atom || pending.is_some() {
                        return Err(self.err("empty branch or dangling bond"));
                    }
                    prev = branch_stack
                        .pop()
                        .ok_or_else(|| self.err("unbalanced ')'"))?;
                    self.pos += 1;
                }
                b'.' => {
                    if pending.is_some() || expect_atom || !branch_stack.is_empty() {
                        return Err(self.err("misplaced '.'"));
                    }
                    prev = None;
                    self.pos += 1;
                    expect_atom = true;
                }
                b'-' | b'=' | b'#' | b'$' | b':' | b'/' | b'\\' => {
                    if pending.is_some() || prev.is_none() {
                        return Err(self.err("misplaced bond symbol"));
                    }
                    pending = Some(match c {
                        b'-' | b'/' | b'\\' => RawBond::Single,
                        b'=' => RawBond::Double,
                        b'#' => RawBond::Triple,
                        b':' => RawBond::Aromatic,
                        _ => return Err(self.err("quadruple bonds are not supported")),
                    });
                    self.pos += 1;
                }
                b'0'..=b'9' | b'%' => {
                    let Some(atom) = prev else {
                        return Err(self.err("ring bond without atom"));
                    };
                    if expect_atom {
                        return Err(self.err("ring bond without atom"));
                    }
                    let digit = self.ring_number()?;
                    let bond = pending.take().unwrap_or(RawBond::Implicit);
                    match self.open_rings.remove(&digit) {
                        Some((other, other_bond)) => {
                            if other == atom {
                                return Err(self.err("ring bond to itself"));
                            }
                            let order = match (bond, other_bond) {
                                (RawBond::Implicit, b) | (b, RawBond::Implicit) => b,
                                (a, b) if a == b => a,
                                _ => return Err(self.err("conflicting ring bond orders")),
                            };
                            if self.bonds.iter().any(|&(x, y, _)| {
                                (x == atom && y == other) || (x == other && y == atom)
                            }) {
                                return Err(self.err("duplicate bond"));
                            }
                            self.bonds.push((other, atom, order));
                        }
                        None => {
                            self.open_rings.insert(digit, (atom, bond));
                        }
                    }
                }
                _ => {
                    let atom = self.atom()?;
                    let idx = self.atoms.len();
                    self.atoms.push(atom);
                    if let Some(p) = prev {
                        self.bonds
                            .push((p, idx, pending.take().unwrap_or(RawBond::Implicit)));
                    } else if pending.is_some() {
                        return Err(self.err("bond without preceding atom"));
                    }
                    prev = Some(idx);
                    expect_atom = false;
                }
            }
        }
        if pending.is_some() || expect_atom {
            return Err(self.err("unexpected end of input"));
        }
        if !branch_stack.is_empty() {
            return Err(self.err("unclosed branch"));
        }
        Ok(())
    }

    fn ring_number(&mut self) -> Result<u32, ChemError> {
        let c = self.peek().unwrap();
        if c == b'%' {
            let d = self.bytes.get(self.pos + 1..self.pos + 3);
            match d {
                Some(d) if d.iter().all(u8::is_ascii_digit) => {
                    self.pos += 3;
                    Ok(((d[0] - b'0') * 10 + (d[1] - b'0')) as u32)
                }
                _ => Err(self.err("bad %nn ring bond")),
            }
        } else {
            self.pos += 1;
            Ok((c - b'0') as u32)
        }
    }

    fn atom(&mut self) -> Result<RawAtom, ChemError> {
        let c = self.peek().unwrap();
        if c == b'[' {
            return self.bracket_atom();
        }
        let two = self.bytes.get(self.pos..self.pos + 2);
        let (sym, aromatic, len) = match (c, two) {
            (b'C', Some(b"Cl")) => ("Cl", false, 2),
            (b'B', Some(b"Br")) => ("Br", false, 2),
            (b'B', _) => ("B", false, 1),
            (b'C', _) => ("C", false, 1),
            (b'N', _) => ("N", false, 1),
            (b'O', _) => ("O", false, 1),
            (b'P', _) => ("P", false, 1),
            (b'S', _) => ("S", false, 1),
            (b'F', _) => ("F", false, 1),
            (b'I', _) => ("I", false, 1),
            (b'*', _) => ("*", false, 1),
            (b'b', _) => ("B", true, 1),
            (b'c', _) => ("C", true, 1),
            (b'n', _) => ("N", true, 1),
            (b'o', _) => ("O", true, 1),
            (b'p', _) => ("P", true, 1),
            (b's', _) => ("S", true, 1),
            _ => return Err(self.err(format!("unexpected character '{}'", c as char))),
        };
        self.pos += len;
        let mut atom = Atom::new(element::from_symbol(sym).unwrap());
        atom.aromatic = aromatic;
        Ok(RawAtom {
            atom,
            bracket_h: None,
            folded_h: 0,
        })
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            std::str::from_utf8(&self.bytes[start..self.pos])
                .ok()?
                .parse()
                .ok()
        }
    }

    fn bracket_atom(&mut self) -> Result<RawAtom, ChemError> {
        self.pos += 1;
        let isotope = self.number().unwrap_or(0);
        if isotope > u16::MAX as u32 {
            return Err(self.err("isotope out of range"));
        }
        let (atomic_num, aromatic) = self.bracket_symbol()?;
        // chirality
        while self.peek() == Some(b'@') {
            self.pos += 1;
        }
        if self.bytes[self.pos..].starts_with(b"TH")
            || self.bytes[self.pos..].starts_with(b"AL")
            || self.bytes[self.pos..].starts_with(b"SP")
            || self.bytes[self.pos..].starts_with(b"TB")
            || self.bytes[self.pos..].starts_with(b"OH")
        {
            self.pos += 2;
            self.number();
        }
        let mut hydrogens = 0u8;
        if self.peek() == Some(b'H') {
            self.pos += 1;
            hydrogens = self.number().unwrap_or(1).min(8) as u8;
        }
        let mut charge: i32 = 0;
        match self.peek() {
            Some(s @ (b'+' | b'-')) => {
                let sign = if s == b'+' { 1 } else { -1 };
                self.pos += 1;
                if let Some(n) = self.number() {
                    charge = sign * n as i32;
                } else {
                    charge = sign;
                    while self.peek() == Some(s) {
                        charge += sign;
                        self.pos += 1;
                    }
                }
            }
            _ => {}
        }
        if charge.abs() > 15 {
            return Err(self.err("charge out of range"));
        }
        let mut map_class = 0u16;
        if self.peek() == Some(b':') {
            self.pos += 1;
            map_class = self
                .number()
                .ok_or_else(|| self.err("missing atom class"))?
                .min(u16::MAX as u32) as u16;
        }
        if self.peek() != Some(b']') {
            return Err(self.err("unterminated bracket atom"));
        }
        self.pos += 1;
        let mut atom = Atom::new(atomic_num);
        atom.isotope = isotope as u16;
        atom.aromatic = aromatic;
        atom.charge = charge as i8;
        atom.map_class = map_class;
        Ok(RawAtom {
            atom,
            bracket_h: Some(hydrogens),
            folded_h: 0,
        })
    }

    fn bracket_symbol(&mut self) -> Result<(u8, bool), ChemError> {
        let rest = &self.bytes[self.pos..];
        for (arom, z) in [("se", 34u8), ("as", 33), ("te", 52)] {
            if rest.starts_with(arom.as_bytes()) {
                self.pos += 2;
                return Ok((z, true));
            }
        }
        match rest.first() {
            Some(&c @ (b'b' | b'c' | b'n' | b'o' | b'p' | b's')) => {
                self.pos += 1;
                let sym = (c.to_ascii_uppercase() as char).to_string();
                return Ok((element::from_symbol(&sym).unwrap(), true));
            }
            Some(b'*') => {
                self.pos += 1;
                return Ok((element::DUMMY, false));
            }
            _ => {}
        }
        if let Some(&c) = rest.first() {
            if c.is_ascii_uppercase() {
                if let Some(&l) = rest.get(1) {
                    if l.is_ascii_lowercase() {
                        let sym = format!("{}{}", c as char, l as char);
                        if let Some(z) = element::from_symbol(&sym) {
                            self.pos += 2;
                            return Ok((z, false));
                        }
                    }
                }
                if let Some(z) = element::from_symbol(&(c as char).to_string()) {
                    self.pos += 1;
                    return Ok((z, false));
                }
            }
        }
        Err(self.err("unknown element"))
    }
}

/// Resolves bond orders, folds explicit hydrogens, kekulizes aromatic input
/// and derives implicit hydrogens with valence checking.
fn build(
    input: &str,
    raw: Vec<RawAtom>,
    raw_bonds: Vec<(usize, usize, RawBond)>,
) -> Result<Mol, ChemError> {
    // Fold plain [H] atoms bound to exactly one heavy atom.
    let mut degree = vec![0usize; raw.len()];
    for &(a, b, _) in &raw_bonds {
        degree[a] += 1;
        degree[b] += 1;
    }
    let foldable: Vec<bool> = raw
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.atom.atomic_num == 1
                && r.atom.isotope == 0
                && r.atom.charge == 0
                && r.atom.map_class == 0
                && r.bracket_h == Some(0)
                && degree[i] == 1
        })
        .collect();
    let mut extra_h = vec![0u8; raw.len()];
    let mut keep_bonds = Vec::new();
    for &(a, b, order) in &raw_bonds {
        let (fa, fb) = (foldable[a], foldable[b]);
        if fa && fb {
            // H-H: keep both atoms as written
            keep_bonds.push((a, b, order));
        } else if fa {
            extra_h[b] += 1;
        } else if fb {
            extra_h[a] += 1;
        } else {
            keep_bonds.push((a, b, order));
        }
    }
    let folded: Vec<bool> = (0..raw.len())
        .map(|i| {
            foldable[i]
                && !raw_bonds
                    .iter()
                    .any(|&(a, b, _)| (a == i && foldable[b]) || (b == i && foldable[a]))
        })
        .collect();
    let mut map = vec![usize::MAX; raw.len()];
    let mut atoms: Vec<RawAtom> = Vec::new();
    for (i, r) in raw.into_iter().enumerate() {
        if !folded[i] {
            map[i] = atoms.len();
            let mut r = r;
            r.folded_h = extra_h[i];
            atoms.push(r);
        }
    }
    let bonds: Vec<(usize, usize, RawBond)> = keep_bonds
        .into_iter()
        .map(|(a, b, o)| {
            let o = match o {
                RawBond::Implicit => {
                    if atoms[map[a]].atom.aromatic && atoms[map[b]].atom.aromatic {
                        RawBond::Aromatic
                    } else {
                        RawBond::Single
                    }
                }
                o => o,
            };
            (map[a], map[b], o)
        })
        .collect();

    let n = atoms.len();
    let mut arom_count = vec![0u8; n];
    let mut other_val = vec![0u8; n];
    let mut arom_edges = Vec::new();
    for (bi, &(a, b, o)) in bonds.iter().enumerate() {
        match o {
            RawBond::Aromatic => {
                if !(atoms[a].atom.aromatic && atoms[b].atom.aromatic) {
                    return Err(ChemError::parse(
                        input,
                        "aromatic bond between non-aromatic atoms",
                    ));
                }
                arom_count[a] += 1;
                arom_count[b] += 1;
                arom_edges.push((a, b, bi));
            }
            o => {
                let v = match o {
                    RawBond::Double => 2,
                    RawBond::Triple => 3,
                    _ => 1,
                };
                other_val[a] += v;
                other_val[b] += v;
            }
        }
    }
    for (i, r) in atoms.iter().enumerate() {
        if r.atom.aromatic && arom_count[i] < 2 {
            return Err(ChemError::parse(input, "aromatic atom outside a ring"));
        }
    }
    let candidates: Vec<bool> = atoms
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.atom.aromatic
                && needs_pi_bond(
                    r.atom.atomic_num,
                    r.atom.charge,
                    arom_count[i],
                    other_val[i],
                    r.bracket_h.unwrap_or(0) + r.folded_h,
                )
        })
        .collect();
    let doubles = kekule_matching(n, &arom_edges, &candidates)
        .ok_or_else(|| ChemError::parse(input, "cannot kekulize aromatic system"))?;
    let mut kekule: Vec<u8> = bonds
        .iter()
        .map(|&(_, _, o)| match o {
            RawBond::Double => 2,
            RawBond::Triple => 3,
            _ => 1,
        })
        .collect();
    for bi in doubles {
        kekule[bi] = 2;
    }
    let mut valence: Vec<u8> = atoms.iter().map(|r| r.folded_h).collect();
    for (bi, &(a, b, _)) in bonds.iter().enumerate() {
        valence[a] += kekule[bi];
        valence[b] += kekule[bi];
    }
    let mut final_atoms = Vec::with_capacity(n);
    for (i, r) in atoms.into_iter().enumerate() {
        let mut atom = r.atom;
        let allowed = element::allowed_valences(atom.atomic_num, atom.charge);
        match r.bracket_h {
            Some(h) => {
                atom.hydrogens = h + r.folded_h;
                if let Some(vals) = allowed {
                    let max = *vals.iter().max().unwrap();
                    if valence[i] + h > max {
                        return Err(ChemError::parse(
                            input,
                            format!(
                                "valence {} exceeds {} for {}",
                                valence[i] + h,
                                max,
                                atom.symbol()
                            ),
                        ));
                    }
                }
            }
            None => {
                atom.hydrogens = r.folded_h
                    + match allowed {
                        Some(vals) => match vals.iter().find(|&&v| v >= valence[i]) {
                            Some(&v) => v - valence[i],
                            None => {
                                return Err(ChemError::parse(
                                    input,
                                    format!(
                                        "valence {} not allowed for {}",
                                        valence[i],
                                        atom.symbol()
                                    ),
                                ))
                            }
                        },
                        None => 0,
                    };
            }
        }
        final_atoms.push(atom);
    }
    let bonds = bonds
        .iter()
        .enumerate()
        .map(|(bi, &(a, b, _))| (a, b, kekule[bi]))
        .collect();
    Ok(Mol::from_parts(final_atoms, bonds))
}

#[cfg(test)]
mod tests {
    use super::parse;

    #[test]
    fn rejects_malformed() {
        for bad in [
            "",
            "C1CC",
            "C(",
            "C)",
            "CC=",
            "C==C",
            "[C",
            "Xx",
            "C(C)(C)(C)(C)C",
            "c1ccccc",
            ".C",
            "C..C",
            "N(C)(C)(C)C",
        ] {
            assert!(parse(bad).is_err(), "{bad} should fail");
        }
    }

    #[test]
    fn accepts_common_forms() {
        for ok in [
            "C",
            "[NH4+]",
            "[Na+].[Cl-]",
            "C1.C1",
            "C%10CC%10",
            "F/C=C/F",
            "N[C@@H](C)C(=O)O",
            "[2H]C",
            "[H]OC",
            "C[N+](C)(C)C",
            "c1cc[n+]([O-])cc1",
            "CS(=O)(=O)C",
            "[*:1]CC",
            "O=[N+]([O-])c1ccccc1",
        ] {
            assert!(
                parse(ok).is_ok(),
                "{ok} should parse: {:?}",
                parse(ok).err()
            );
        }
    }

    #[test]
    fn explicit_hydrogen_folded() {
        let m = parse("[H]OC").unwrap();
        assert_eq!(m.atom_count(), 2);
        assert_eq!(m.atom(0).hydrogens, 1);
    }

    #[test]
    fn ring_bond_across_components() {
        let m = parse("C1.C1").unwrap();
        assert_eq!(m.bond_count(), 1);
        assert_eq!(m.components().len(), 1);
    }
}
