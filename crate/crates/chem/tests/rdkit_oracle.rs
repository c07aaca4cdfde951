//! Frozen reference values produced by an established toolkit (version in
//! the JSON header) for a 105-molecule drug set.

use serde::Deserialize;
use toxcliff_chem::{canonicalize, descriptors_mol, murcko_scaffold, Mol};

#[derive(Deserialize)]
struct Oracle {
    toolkit: String,
    molecules: Vec<Entry>,
}

#[derive(Deserialize)]
struct Entry {
    name: String,
    smiles: String,
    variants: Vec<String>,
    kekule: String,
    mw: f64,
    logp: f64,
    tpsa: f64,
    hbd: u32,
    hba: u32,
    rotb: u32,
    scaffold: String,
    aromatic_atoms: usize,
    rings: usize,
    heavy_atoms: usize,
}

fn oracle() -> Oracle {
    serde_json::from_str(include_str!("data/rdkit_oracle.json")).unwrap()
}

fn tally(label: &str, failures: &[String], total: usize) {
    println!("{label}: {}/{total} agree", total - failures.len());
    for f in failures {
        println!("  {f}");
    }
}

#[test]
fn every_written_form_canonicalizes_identically() {
    let data = oracle();
    let mut failures = Vec::new();
    for e in &data.molecules {
        let reference = canonicalize(&e.smiles).unwrap();
        for v in e.variants.iter().chain(std::iter::once(&e.kekule)) {
            match canonicalize(v) {
                Ok(c) if c == reference => {}
                Ok(c) => failures.push(format!("{}: {v} -> {c}, expected {reference}", e.name)),
                Err(err) => failures.push(format!("{}: {v}: {err}", e.name)),
            }
        }
        let again = canonicalize(reference.as_str()).unwrap();
        if again != reference {
            failures.push(format!(
                "{}: not idempotent: {reference} -> {again}",
                e.name
            ));
        }
    }
    tally("canonical agreement", &failures, data.molecules.len());
    assert!(failures.is_empty());
}

#[test]
fn graph_perception_matches() {
    let data = oracle();
    let mut failures = Vec::new();
    for e in &data.molecules {
        let mol = Mol::from_smiles(&e.smiles).unwrap();
        let aromatic = mol.atoms().iter().filter(|a| a.aromatic).count();
        let got = (aromatic, mol.rings().num_rings(), mol.heavy_atom_count());
        let want = (e.aromatic_atoms, e.rings, e.heavy_atoms);
        if got != want {
            failures.push(format!(
                "{}: (aromatic, rings, heavy) {got:?} vs {want:?}",
                e.name
            ));
        }
    }
    tally(
        &format!("perception vs {}", data.toolkit),
        &failures,
        data.molecules.len(),
    );
    assert!(failures.is_empty());
}

#[test]
fn scaffolds_match() {
    let data = oracle();
    let mut failures = Vec::new();
    for e in &data.molecules {
        let got = murcko_scaffold(&canonicalize(&e.smiles).unwrap()).unwrap();
        let want = if e.scaffold.is_empty() {
            Default::default()
        } else {
            canonicalize(&e.scaffold).unwrap()
        };
        if got != want {
            failures.push(format!("{}: {got} vs {want}", e.name));
        }
    }
    tally("scaffolds", &failures, data.molecules.len());
    assert!(failures.is_empty());
}

#[test]
fn descriptors_match() {
    let data = oracle();
    let mut failures = Vec::new();
    for e in &data.molecules {
        let d = descriptors_mol(&Mol::from_smiles(&e.smiles).unwrap());
        if (d.hbd, d.hba, d.rotb) != (e.hbd, e.hba, e.rotb) {
            failures.push(format!(
                "{}: (hbd, hba, rotb) {:?} vs {:?}",
                e.name,
                (d.hbd, d.hba, d.rotb),
                (e.hbd, e.hba, e.rotb)
            ));
        }
        if (d.mw - e.mw).abs() > 1e-6 {
            failures.push(format!("{}: mw {} vs {}", e.name, d.mw, e.mw));
        }
        if (d.tpsa - e.tpsa).abs() > 1e-6 {
            failures.push(format!("{}: tpsa {} vs {}", e.name, d.tpsa, e.tpsa));
        }
        if (d.logp - e.logp).abs() > 1e-6 {
            failures.push(format!("{}: logp {} vs {}", e.name, d.logp, e.logp));
        }
    }
    tally("descriptors", &failures, data.molecules.len());
    assert!(failures.is_empty());
}
