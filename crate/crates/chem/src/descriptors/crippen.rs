//! Wildman-Crippen atom-contribution logP. Atom types are assigned by the
//! first matching rule, in the same precedence as the published SMARTS
//! table; hydrogens are typed by the heavy atom they sit on.

use crate::mol::{BondOrder, Mol};

const COMMON: [u8; 9] = [6, 7, 8, 15, 16, 9, 17, 35, 53];

struct View<'m> {
    mol: &'m Mol,
}

impl View<'_> {
    fn z(&self, i: usize) -> u8 {
        self.mol.atom(i).atomic_num
    }

    fn arom(&self, i: usize) -> bool {
        self.mol.atom(i).aromatic
    }

    fn h(&self, i: usize) -> u8 {
        self.mol.atom(i).hydrogens
    }

    fn charge(&self, i: usize) -> i8 {
        self.mol.atom(i).charge
    }

    fn nbrs(&self, i: usize) -> impl Iterator<Item = (usize, BondOrder)> + '_ {
        self.mol
            .neighbors(i)
            .iter()
            .map(|&(v, b)| (v, self.mol.bond(b).order))
    }

    fn total_degree(&self, i: usize) -> usize {
        self.mol.total_degree(i)
    }

    /// Aliphatic N, O, P, S or any halogen (the `[N,O,P,S,F,Cl,Br,I]` class).
    fn polar_aliphatic(&self, i: usize) -> bool {
        !self.arom(i) && matches!(self.z(i), 7 | 8 | 15 | 16 | 9 | 17 | 35 | 53)
    }

    fn double_partner(&self, i: usize) -> Option<usize> {
        self.nbrs(i)
            .find(|&(_, o)| o == BondOrder::Double)
            .map(|(v, _)| v)
    }
}

fn carbon(v: &View, i: usize) -> f64 {
    let nbrs: Vec<(usize, BondOrder)> = v.nbrs(i).collect();
    if v.arom(i) {
        return aromatic_carbon(v, i, &nbrs);
    }
    let sp3 = v.total_degree(i) == 4 && nbrs.iter().all(|&(_, o)| o == BondOrder::Single);
    if sp3 {
        if nbrs.iter().all(|&(n, _)| v.z(n) == 6 && !v.arom(n)) {
            return if v.h(i) >= 2 { 0.1441 } else { 0.0 };
        }
        let polar = nbrs.iter().any(|&(n, _)| v.polar_aliphatic(n));
        let all_aliphatic = nbrs.iter().all(|&(n, _)| !v.arom(n));
        if polar && (v.h(i) == 3 || all_aliphatic) {
            return if v.h(i) >= 2 { -0.2035 } else { -0.2051 };
        }
    }
    if let Some(p) = v.double_partner(i) {
        if !v.arom(p) && v.z(p) != 6 {
            return -0.2783;
        }
        let aryl = v.arom(p) || nbrs.iter().any(|&(n, _)| v.arom(n));
        return if aryl { 0.2640 } else { 0.1551 };
    }
    if nbrs.iter().any(|&(_, o)| o == BondOrder::Triple) {
        return 0.0017;
    }
    if sp3 {
        if let Some(&(a, _)) = nbrs.iter().find(|&&(n, _)| v.arom(n)) {
            return match v.h(i) {
                3 if v.z(a) == 6 => 0.08452,
                3 => -0.1444,
                2 => -0.0516,
                1 => 0.1193,
                _ => -0.0967,
            };
        }
        if nbrs.iter().any(|&(n, _)| !COMMON.contains(&v.z(n))) {
            return 0.2148;
        }
    }
    0.08129
}

fn aromatic_carbon(v: &View, i: usize, nbrs: &[(usize, BondOrder)]) -> f64 {
    let exo: Vec<(usize, BondOrder)> = nbrs
        .iter()
        .copied()
        .filter(|&(_, o)| o != BondOrder::Aromatic)
        .collect();
    if v.h(i) == 0
        && exo
            .iter()
            .any(|&(n, o)| o == BondOrder::Single && !v.arom(n) && !COMMON.contains(&v.z(n)))
    {
        return -0.5443;
    }
    for &(n, _) in &exo {
        match v.z(n) {
            9 => return 0.0,
            17 => return 0.2450,
            35 => return 0.1980,
            53 => return 0.0,
            _ => {}
        }
    }
    if v.h(i) > 0 {
        return 0.1581;
    }
    if nbrs.len() == 3 && exo.is_empty() {
        return 0.2955;
    }
    match exo.first() {
        Some(&(n, BondOrder::Single)) if v.arom(n) => 0.2713,
        Some(&(n, BondOrder::Single)) => match v.z(n) {
            6 => 0.1360,
            7 => 0.4619,
            8 => 0.5437,
            16 => 0.1893,
            _ => 0.08129,
        },
        Some(&(n, BondOrder::Double)) if matches!(v.z(n), 6 | 7 | 8) => -0.8186,
        _ => 0.08129,
    }
}

fn nitrogen(v: &View, i: usize) -> f64 {
    let charge = v.charge(i);
    if v.arom(i) {
        return if charge > 0 { -1.119 } else { -0.3239 };
    }
    if charge < 0 {
        return 0.2887;
    }
    let nbrs: Vec<(usize, BondOrder)> = v.nbrs(i).collect();
    let h = v.h(i);
    if charge > 0 {
        if h > 0 {
            return -1.950;
        }
        let azide_middle = nbrs
            .iter()
            .any(|&(n, o)| o == BondOrder::Double && v.z(n) == 7 && v.charge(n) < 0);
        return if azide_middle { 0.2887 } else { -0.3396 };
    }
    let any_arom = nbrs.iter().any(|&(n, _)| v.arom(n));
    let has = |o: BondOrder| nbrs.iter().any(|&(_, x)| x == o);
    match h {
        2 if nbrs.len() == 1 && has(BondOrder::Single) => {
            if any_arom {
                -1.027
            } else {
                -1.019
            }
        }
        1 if has(BondOrder::Double) => 0.08387,
        1 if nbrs.len() == 2 => {
            if any_arom {
                -0.5188
            } else {
                -0.7096
            }
        }
        0 if has(BondOrder::Triple) => 0.01508,
        0 if has(BondOrder::Double) => 0.1836,
        0 if nbrs.len() == 3 => {
            if any_arom {
                -0.4458
            } else {
                -0.3187
            }
        }
        _ => -0.4806,
    }
}

fn oxygen(v: &View, i: usize) -> f64 {
    if v.arom(i) {
        return 0.1552;
    }
    let nbrs: Vec<(usize, BondOrder)> = v.nbrs(i).collect();
    let h = v.h(i);
    if v.charge(i) < 0 {
        let Some(&(n, _)) = nbrs.first() else {
            return -0.1188;
        };
        return match v.z(n) {
            7 => 0.0335,
            16 => -0.3339,
            6 if v
                .nbrs(n)
                .any(|(o, b)| o != i && b == BondOrder::Double && v.z(o) == 8) =>
            {
                -1.326
            }
            _ => -1.189,
        };
    }
    if h >= 1 && nbrs.len() <= 1 {
        return -0.2893;
    }
    if nbrs.len() == 2 {
        let aryl = nbrs.iter().any(|&(n, _)| v.arom(n));
        return if aryl { -0.4195 } else { -0.0684 };
    }
    if let Some(&(c, BondOrder::Double)) = nbrs.first() {
        if matches!(v.z(c), 7 | 8) {
            return 0.0335;
        }
        if v.z(c) == 16 {
            return -0.3339;
        }
        if v.arom(c) {
            return 0.1788;
        }
        if v.z(c) == 6 {
            let others: Vec<usize> = v.nbrs(c).filter(|&(n, _)| n != i).map(|(n, _)| n).collect();
            if others.iter().any(|&n| v.arom(n)) {
                return 0.1129;
            }
            if others.len() == 2 && others.iter().all(|&n| v.z(n) != 6 && v.z(n) != 1) {
                return 0.4833;
            }
            return -0.1526;
        }
    }
    -0.1188
}

fn heavy_contribution(v: &View, i: usize) -> f64 {
    let charge = v.charge(i);
    match v.z(i) {
        6 => carbon(v, i),
        7 => nitrogen(v, i),
        8 => oxygen(v, i),
        9 | 17 | 35 | 53 if charge < 0 => -2.996,
        9 => 0.4202,
        17 => 0.6895,
        35 => 0.8456,
        53 => 0.8857,
        15 => 0.8612,
        16 if v.arom(i) => 0.6237,
        16 if charge != 0 || v.mol.valence(i) > 2 => -0.0024,
        16 => 0.6482,
        _ => 0.0,
    }
}

fn hydrogen_contribution(v: &View, i: usize) -> f64 {
    match v.z(i) {
        6 => 0.1230,
        7 => 0.2142,
        8 => {
            let nbrs: Vec<usize> = v.nbrs(i).map(|(n, _)| n).collect();
            let Some(&n) = nbrs.first() else {
                return 0.1125;
            };
            match v.z(n) {
                7 => 0.2142,
                8 | 16 => 0.2980,
                6 if !v.arom(n)
                    && v.double_partner(n)
                        .is_some_and(|p| matches!(v.z(p), 6 | 7 | 8 | 16)) =>
                {
                    0.2980
                }
                _ => -0.2677,
            }
        }
        _ => -0.2677,
    }
}

pub fn logp_contribs(mol: &Mol) -> Vec<f64> {
    let v = View { mol };
    (0..mol.atom_count())
        .map(|i| heavy_contribution(&v, i) + v.h(i) as f64 * hydrogen_contribution(&v, i))
        .collect()
}

pub fn logp(mol: &Mol) -> f64 {
    let v = View { mol };
    (0..mol.atom_count())
        .map(|i| heavy_contribution(&v, i) + v.h(i) as f64 * hydrogen_contribution(&v, i))
        .sum()
}
