//! Periodic-table data needed for parsing, valence checks and molecular weight.

/// (symbol, average atomic weight) indexed by atomic number - 1.
const ELEMENTS: &[(&str, f64)] = &[
    ("H", 1.008),
    ("He", 4.003),
    ("Li", 6.941),
    ("Be", 9.012),
    ("B", 10.812),
    ("C", 12.011),
    ("N", 14.007),
    ("O", 15.999),
    ("F", 18.998),
    ("Ne", 20.18),
    ("Na", 22.99),
    ("Mg", 24.305),
    ("Al", 26.982),
    ("Si", 28.086),
    ("P", 30.974),
    ("S", 32.067),
    ("Cl", 35.453),
    ("Ar", 39.948),
    ("K", 39.098),
    ("Ca", 40.078),
    ("Sc", 44.956),
    ("Ti", 47.867),
    ("V", 50.944),
    ("Cr", 51.996),
    ("Mn", 54.938),
    ("Fe", 55.845),
    ("Co", 58.933),
    ("Ni", 58.693),
    ("Cu", 63.546),
    ("Zn", 65.39),
    ("Ga", 69.723),
    ("Ge", 72.61),
    ("As", 74.922),
    ("Se", 78.96),
    ("Br", 79.904),
    ("Kr", 83.8),
    ("Rb", 85.468),
    ("Sr", 87.62),
    ("Y", 88.906),
    ("Zr", 91.224),
    ("Nb", 92.906),
    ("Mo", 95.94),
    ("Tc", 98.0),
    ("Ru", 101.07),
    ("Rh", 102.906),
    ("Pd", 106.42),
    ("Ag", 107.868),
    ("Cd", 112.412),
    ("In", 114.818),
    ("Sn", 118.711),
    ("Sb", 121.76),
    ("Te", 127.6),
    ("I", 126.904),
    ("Xe", 131.29),
    ("Cs", 132.905),
    ("Ba", 137.328),
    ("La", 138.906),
    ("Ce", 140.116),
    ("Pr", 140.908),
    ("Nd", 144.24),
    ("Pm", 145.0),
    ("Sm", 150.36),
    ("Eu", 151.964),
    ("Gd", 157.25),
    ("Tb", 158.925),
    ("Dy", 162.5),
    ("Ho", 164.93),
    ("Er", 167.26),
    ("Tm", 168.934),
    ("Yb", 173.04),
    ("Lu", 174.967),
    ("Hf", 178.49),
    ("Ta", 180.948),
    ("W", 183.84),
    ("Re", 186.207),
    ("Os", 190.23),
    ("Ir", 192.217),
    ("Pt", 195.078),
    ("Au", 196.967),
    ("Hg", 200.59),
    ("Tl", 204.383),
    ("Pb", 207.2),
    ("Bi", 208.98),
    ("Po", 209.0),
    ("At", 210.0),
    ("Rn", 222.0),
];

/// Atomic number of a dummy / attachment atom (`*`).
pub const DUMMY: u8 = 0;

pub fn symbol(atomic_num: u8) -> &'static str {
    match atomic_num {
        DUMMY => "*",
        z => ELEMENTS.get(z as usize - 1).map(|e| e.0).unwrap_or("*"),
    }
}

pub fn from_symbol(sym: &str) -> Option<u8> {
    if sym == "*" {
        return Some(DUMMY);
    }
    ELEMENTS
        .iter()
        .position(|(s, _)| *s == sym)
        .map(|i| (i + 1) as u8)
}

pub fn atomic_weight(atomic_num: u8) -> f64 {
    match atomic_num {
        DUMMY => 0.0,
        z => ELEMENTS.get(z as usize - 1).map(|e| e.1).unwrap_or(0.0),
    }
}

/// Elements writable without brackets when their hydrogen count is implicit.
pub fn is_organic_subset(atomic_num: u8) -> bool {
    matches!(atomic_num, 5 | 6 | 7 | 8 | 9 | 15 | 16 | 17 | 35 | 53)
}

/// Main-group group number (valence electrons) for the elements we apply
/// valence rules to. `None` means "no valence model": the atom is accepted as
/// written and never receives implicit hydrogens.
fn valence_electrons(atomic_num: u8) -> Option<i32> {
    Some(match atomic_num {
        1 => 1,
        5 | 13 => 3,
        6 | 14 | 32 => 4,
        7 | 15 | 33 => 5,
        8 | 16 | 34 | 52 => 6,
        9 | 17 | 35 | 53 => 7,
        _ => return None,
    })
}

/// Allowed total valences for an atom of this element and formal charge,
/// smallest first. Charged atoms take the valences of their isoelectronic
/// neighbour in the same period.
pub fn allowed_valences(atomic_num: u8, charge: i8) -> Option<Vec<u8>> {
    let ve = valence_electrons(atomic_num)? - charge as i32;
    if atomic_num == 1 {
        return if ve == 1 {
            Some(vec![1])
        } else {
            Some(vec![0])
        };
    }
    if !(0..=8).contains(&ve) {
        return Some(vec![0]);
    }
    let base = if ve <= 4 { ve } else { 8 - ve };
    let second_period = atomic_num <= 9;
    // F, Cl and Br are kept monovalent like the common toolkits do.
    let hypervalent = !second_period && !matches!(atomic_num, 17 | 35) && ve > 4;
    let mut out = vec![base as u8];
    if hypervalent {
        let mut v = base + 2;
        while v <= ve {
            out.push(v as u8);
            v += 2;
        }
    }
    Some(out)
}
