//! One pass/fail line per acceptance criterion, printed on every run.
//! Tolerances: exact where exact is required, 1e-12 for PRS, 1e-9 for group sums.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use toxcliff_chem::{
    canonicalize, decode_safe, descriptors, edit_distance, encode_safe, fragment_multiset,
    tanimoto, CanonicalSmiles, Fingerprint, FingerprintKind, FragmentToken, SafeString,
};
use toxcliff_core::analysis::{
    case_composition, load_case_fixture, outcome_case, CaseLabel, OutcomeBits,
};
use toxcliff_core::dataset::{ingest_dataset, LabeledMolecule};
use toxcliff_core::metrics::{aggregate, overlap, prs, prs_from_scores, PropertyScoreConfig};
use toxcliff_core::miner::{
    apply_structural_filters, mine, pair_candidates, scaffold_split, split_key, CliffPair,
    MinerConfig,
};
use toxcliff_core::qa::{classify_step_mode, StepMode, TaskId};
use toxcliff_harness::evaluate::PredictionRecord;
use toxcliff_harness::predictor::build_predictor;
use toxcliff_harness::report::{render_case_csv, render_case_table};
use toxcliff_harness::{run_evaluation, run_pipeline, HarnessConfig};

fn repo(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn demo() -> Vec<LabeledMolecule> {
    ingest_dataset(&repo("data/demo.csv")).unwrap().molecules
}

fn drugs() -> Vec<CanonicalSmiles> {
    std::fs::read_to_string(repo("data/drugs.tsv"))
        .unwrap()
        .lines()
        .filter_map(|l| l.split('\t').nth(1))
        .filter_map(|s| canonicalize(s).ok())
        .collect()
}

type Outcome = (bool, String);

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let cfg = HarnessConfig {
        output_dir: dir.path().to_path_buf(),
        assets_dir: Some(repo("data")),
        runs: 3,
        ..HarnessConfig::default()
    };
    let data = ingest_dataset(&repo("data/demo.csv")).unwrap();
    let art = run_pipeline(&cfg, &data).unwrap();
    let predictor = build_predictor(&cfg, &art.instances).unwrap();
    let recs = run_evaluation(&cfg, &art.instances, &art.prompts, predictor.as_ref(), None).unwrap();
    let scored: Vec<_> = recs.iter().map(PredictionRecord::scored).collect();
    let rep = aggregate(&scored, 3);
    let mut bad = Vec::new();
    let mut expect = |task: TaskId, metric: &str, want: f64| {
        for step in [Some(StepMode::Single), Some(StepMode::Multi), None] {
            let row = rep.get(task, step, metric).unwrap();
            if row.samples == 0 {
                continue;
            }
            if row.mean != Some(want) || row.std != Some(0.0) {
                bad.push(format!("{task} {step:?} {metric} = {:?} ± {:?}", row.mean, row.std));
            }
        }
    };
    for t in [TaskId::T1, TaskId::T2] {
        expect(t, "acc", 100.0);
        expect(t, "f1", 1.0);
    }
    expect(TaskId::T2, "lev_frag", 0.0);
    expect(TaskId::T3, "acc", 100.0);
    expect(TaskId::T3, "validity", 1.0);
    for m in ["fts_path", "fts_keys", "fts_circular"] {
        expect(TaskId::T3, m, 1.0);
    }
    let elapsed = start.elapsed();
    let n_pairs = art.pairs.len();
    let ok = n_pairs >= 50
        && bad.is_empty()
        && recs.len() == 3 * art.prompts.len()
        && elapsed < Duration::from_secs(120);
    (
        ok,
        format!(
            "{n_pairs} pairs, {} records, {:.1}s, mismatches {bad:?}",
            recs.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let mols = drugs();
    let mut encoded = Vec::new();
    let mut failures = Vec::new();
    for m in &mols {
        match encode_safe(m) {
            Ok(s) => {
                if decode_safe(&s).ok().as_ref() != Some(m) {
                    failures.push(m.to_string());
                }
                encoded.push((m.clone(), s));
            }
            Err(_) => continue,
        }
    }
    let multi: Vec<_> = encoded
        .iter()
        .filter(|(_, s)| s.as_str().contains('.'))
        .collect();
    let mut rng = StdRng::seed_from_u64(2);
    let mut perm_fail = 0;
    for _ in 0..100 {
        let (m, s) = multi[rng.gen_range(0..multi.len())];
        let mut parts: Vec<&str> = s.as_str().split('.').collect();
        parts.shuffle(&mut rng);
        if decode_safe(&SafeString::new(&parts.join("."))).ok().as_ref() != Some(m) {
            perm_fail += 1;
        }
    }
    (
        mols.len() >= 100 && failures.is_empty() && perm_fail == 0,
        format!(
            "{} molecules, {} encoded, {} round-trip failures, {perm_fail}/100 permutation failures",
            mols.len(),
            encoded.len(),
            failures.len()
        ),
    )
}

fn criterion_3(pairs: &[CliffPair]) -> Outcome {
    let violations = pairs
        .iter()
        .filter(|p| {
            let f = &p.fragments;
            let t = fragment_multiset(p.toxic_safe.as_str()).unwrap();
            let n = fragment_multiset(p.nontoxic_safe.as_str()).unwrap();
            f.common.sum(&f.toxic_only) != t || f.common.sum(&f.nontoxic_only) != n
        })
        .count();
    (
        violations == 0 && !pairs.is_empty(),
        format!("{} pairs, {violations} violations", pairs.len()),
    )
}

/// Linear-interpolation quantile at position q(n-1).
fn q(sorted: &[f64], p: f64) -> f64 {
    let x = p * (sorted.len() as f64 - 1.0);
    let (i, frac) = (x.floor() as usize, x - x.floor());
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
    } else {
        sorted[i]
    }
}

fn delta(p: &CliffPair) -> [f64; 6] {
    let a = descriptors(&p.toxic.smiles).unwrap();
    let b = descriptors(&p.nontoxic.smiles).unwrap();
    [
        (a.mw - b.mw).abs(),
        (a.logp - b.logp).abs(),
        (a.tpsa - b.tpsa).abs(),
        (a.hbd as f64 - b.hbd as f64).abs(),
        (a.hba as f64 - b.hba as f64).abs(),
        (a.rotb as f64 - b.rotb as f64).abs(),
    ]
}

fn structural_breaks(p: &CliffPair, len_cut: usize, count_cut: usize) -> bool {
    let f = &p.fragments;
    let diff: Vec<FragmentToken> = f
        .toxic_only
        .to_vec()
        .into_iter()
        .chain(f.nontoxic_only.to_vec())
        .collect();
    f.common.total() == 0
        || diff.is_empty()
        || diff.iter().any(|t| t.as_str().chars().count() >= len_cut)
        || f.toxic_only.total() > count_cut
        || f.nontoxic_only.total() > count_cut
}

fn criterion_4(data: &[LabeledMolecule]) -> Outcome {
    let mut notes = Vec::new();
    let mut violations = 0;
    for derive in [false, true] {
        let cfg = MinerConfig {
            derive_cuts_from_data: derive,
            ..MinerConfig::default()
        };
        let out = mine(data, &cfg);
        let cuts = out.cuts.unwrap();
        let (len_cut, count_cut) = if derive {
            (cuts.frag_len_cut, cuts.frag_count_cut)
        } else {
            (28, 4)
        };
        if !derive && (cuts.frag_len_cut, cuts.frag_count_cut) != (28, 4) {
            violations += 1;
        }
        let structural = out
            .pairs
            .iter()
            .filter(|p| structural_breaks(p, len_cut, count_cut))
            .count();

        // rebuild the post-structural population and recompute the fences
        let mut by_ep: BTreeMap<&str, Vec<LabeledMolecule>> = BTreeMap::new();
        for m in data {
            by_ep.entry(m.endpoint.as_str()).or_default().push(m.clone());
        }
        let mut built = Vec::new();
        for mols in by_ep.values() {
            for c in pair_candidates(mols, &cfg) {
                let (Ok(t), Ok(n)) = (encode_safe(&c.toxic.smiles), encode_safe(&c.nontoxic.smiles)) else {
                    continue;
                };
                built.push(CliffPair::from_candidate(c, t, n).unwrap());
            }
        }
        let population = apply_structural_filters(built, &cfg).0.kept;
        let deltas: Vec<[f64; 6]> = population.iter().map(delta).collect();
        let fences: Vec<(f64, f64)> = (0..6)
            .map(|i| {
                let mut col: Vec<f64> = deltas.iter().map(|d| d[i]).collect();
                col.sort_by(f64::total_cmp);
                let (q1, q3) = (q(&col, 0.25), q(&col, 0.75));
                (q1 - 1.5 * (q3 - q1), q3 + 1.5 * (q3 - q1))
            })
            .collect();
        let inside = |d: &[f64; 6]| (0..6).all(|i| d[i] >= fences[i].0 && d[i] <= fences[i].1);
        let property = out.pairs.iter().filter(|p| !inside(&delta(p))).count();
        let kept: BTreeSet<&str> = out.pairs.iter().map(|p| p.id.as_str()).collect();
        let expected: BTreeSet<&str> = population
            .iter()
            .zip(&deltas)
            .filter(|(_, d)| inside(d))
            .map(|(p, _)| p.id.as_str())
            .collect();
        let mismatch = usize::from(kept != expected);
        violations += structural + property + mismatch;
        notes.push(format!(
            "{} cuts {len_cut}/{count_cut}: {} pairs, {structural} structural, {property} property, retained set {}",
            if derive { "derived" } else { "fixed" },
            out.pairs.len(),
            if mismatch == 0 { "matches" } else { "differs" }
        ));
    }
    (violations == 0, notes.join("; "))
}

fn lev_dp(a: &str, b: &str) -> usize {
    let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

fn criterion_5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let alphabet: Vec<char> = "CNOc1()=".chars().collect();
    let word = |rng: &mut StdRng| -> String {
        let n = rng.gen_range(0..=8);
        (0..n).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
    };
    let lev_bad = (0..1000)
        .filter(|_| {
            let (a, b) = (word(&mut rng), word(&mut rng));
            edit_distance(&a, &b) != lev_dp(&a, &b)
        })
        .count();

    let tan_bad = (0..1000)
        .filter(|_| {
            let nbits = [64usize, 128, 1024, 2048][rng.gen_range(0..4)];
            let density = rng.gen_range(0.0..0.5);
            let mut set = || -> BTreeSet<usize> { (0..nbits).filter(|_| rng.gen_bool(density)).collect() };
            let (a, b) = (set(), set());
            let fa = Fingerprint::from_indices(FingerprintKind::Circular, nbits, a.iter().copied());
            let fb = Fingerprint::from_indices(FingerprintKind::Circular, nbits, b.iter().copied());
            let union = a.union(&b).count();
            let want = if union == 0 {
                1.0
            } else {
                a.intersection(&b).count() as f64 / union as f64
            };
            tanimoto(&fa, &fb).unwrap() != want
        })
        .count();

    let universe: Vec<FragmentToken> = ["C1", "N2", "O3", "c1ccccc1", "Cl"]
        .iter()
        .map(|t| FragmentToken::new(t))
        .collect();
    let subset = |mask: u32| -> Vec<FragmentToken> {
        (0..5).filter(|i| mask & (1 << i) != 0).map(|i| universe[i].clone()).collect()
    };
    let mut f1_bad = 0;
    for pm in 0..32u32 {
        for gm in 0..32u32 {
            let (p, g) = (subset(pm), subset(gm));
            let tp = (pm & gm).count_ones() as f64;
            let fp = (pm & !gm).count_ones() as f64;
            let fn_ = (gm & !pm).count_ones() as f64;
            let want = match (p.is_empty(), g.is_empty()) {
                (true, true) => (1.0, 1.0, 1.0),
                (true, _) | (_, true) => (0.0, 0.0, 0.0),
                _ => (tp / (tp + fp), tp / (tp + fn_), 2.0 * tp / (2.0 * tp + fp + fn_)),
            };
            if overlap(&p, &g) != want {
                f1_bad += 1;
            }
        }
    }
    (
        lev_bad + tan_bad + f1_bad == 0,
        format!("edit distance {lev_bad}/1000, Tanimoto {tan_bad}/1000, F1 {f1_bad}/1024 mismatches"),
    )
}

fn criterion_6() -> Outcome {
    let cfg = PropertyScoreConfig::default();
    let mols: Vec<CanonicalSmiles> = drugs().into_iter().take(50).collect();
    let self_bad = mols
        .iter()
        .filter(|m| (prs(m, m, &cfg).unwrap() - 1.0).abs() > 1e-12)
        .count();
    let mut range_bad = 0;
    for a in &mols {
        for b in &mols {
            let v = prs(a, b, &cfg).unwrap();
            if !(v > 0.0 && v <= 1.0) {
                range_bad += 1;
            }
        }
    }
    let ln2 = (prs_from_scores(0.1, 0.1 + std::f64::consts::LN_2) - 0.5).abs();
    (
        mols.len() == 50 && self_bad == 0 && range_bad == 0 && ln2 <= 1e-12,
        format!(
            "{} molecules, {self_bad} self mismatches, {range_bad} out of range, |ln2 case - 0.5| = {ln2:e}",
            mols.len()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut labels = BTreeSet::new();
    let mut bijection = true;
    for t1 in 0..2u8 {
        for t2 in 0..2u8 {
            for t3 in 0..2u8 {
                let bits = OutcomeBits::new(t1, t2, t3);
                let label = outcome_case(bits).unwrap();
                bijection &= CaseLabel::parse(label.as_str()).unwrap().1 == bits;
                labels.insert(label);
            }
        }
    }
    bijection &= labels.len() == 8;

    // T3=1: C111 x4, C101 x2, C011 x1, C001 x1
    // T3=0: C000 x6, C100 x3, C010 x2, C110 x1
    let counts: [(&str, usize); 8] = [
        ("C111", 4),
        ("C101", 2),
        ("C011", 1),
        ("C001", 1),
        ("C000", 6),
        ("C100", 3),
        ("C010", 2),
        ("C110", 1),
    ];
    let mut samples = Vec::new();
    for (label, n) in counts {
        let bits = CaseLabel::parse(label).unwrap().1;
        for k in 0..n {
            samples.push((format!("{label}-{k}"), bits));
        }
    }
    let (ok_g, fail_g) = case_composition(&samples).unwrap();
    let hand: [(&str, f64); 8] = [
        ("C111", 4.0 / 8.0),
        ("C101", 2.0 / 8.0),
        ("C011", 1.0 / 8.0),
        ("C001", 1.0 / 8.0),
        ("C000", 6.0 / 12.0),
        ("C100", 3.0 / 12.0),
        ("C010", 2.0 / 12.0),
        ("C110", 1.0 / 12.0),
    ];
    let lookup = |l: &str| {
        let key = CaseLabel::parse(l).unwrap().0;
        ok_g.proportions.get(&key).or(fail_g.proportions.get(&key)).copied()
    };
    let fixture_exact = samples.len() == 20 && hand.iter().all(|(l, p)| lookup(l) == Some(*p));
    let sums = (ok_g.total() - 1.0).abs() <= 1e-9 && (fail_g.total() - 1.0).abs() <= 1e-9;

    let (s, f) = load_case_fixture(&repo("data/fixtures/gpt52_4shot_cases.csv")).unwrap();
    let table = render_case_table(&s, &f);
    let published = [
        ("T3=0", "C000", "0.6782"),
        ("T3=0", "C100", "0.2530"),
        ("T3=0", "C010", "0.0392"),
        ("T3=0", "C110", "0.0296"),
        ("T3=1", "C111", "0.5053"),
        ("T3=1", "C101", "0.2368"),
        ("T3=1", "C011", "0.2105"),
        ("T3=1", "C001", "0.0474"),
    ];
    let rendered = published
        .iter()
        .all(|(g, c, p)| table.contains(&format!("| {g} | {c} | {p} |")));
    let dir = tempfile::tempdir().unwrap();
    let back = dir.path().join("cases.csv");
    std::fs::write(&back, render_case_csv(&s, &f)).unwrap();
    let round_trip = load_case_fixture(&back).unwrap() == (s, f);
    (
        bijection && fixture_exact && sums && rendered && round_trip,
        format!(
            "bijection {bijection}, 20-sample fixture exact {fixture_exact}, group sums {sums}, published rendered {rendered}, csv round trip {round_trip}"
        ),
    )
}

fn criterion_8() -> Outcome {
    // rows n_t = 0..5, columns n_nt = 0..5; E = invalid, S = single, M = multi
    let t1 = ["EEEEEE", "SSSSSS", "MMMMMM", "MMMMMM", "MMMMMM", "MMMMMM"];
    let t23 = ["EEEEEE", "SSMMMM", "MMMMMM", "MMMMMM", "MMMMMM", "MMMMMM"];
    let mut bad = Vec::new();
    for task in TaskId::ALL {
        let table = if task == TaskId::T1 { &t1 } else { &t23 };
        for n_t in 0..=5 {
            for n_nt in 0..=5 {
                let want = table[n_t].as_bytes()[n_nt];
                let got = match classify_step_mode(task, n_t, n_nt) {
                    Err(_) => b'E',
                    Ok(StepMode::Single) => b'S',
                    Ok(StepMode::Multi) => b'M',
                };
                if got != want {
                    bad.push(format!("{task}({n_t},{n_nt})"));
                }
            }
        }
    }
    (bad.is_empty(), format!("108 combinations, mismatches {bad:?}"))
}

fn criterion_10(pairs: &[CliffPair]) -> Outcome {
    let cfg = MinerConfig::default();
    let split = scaffold_split(pairs, &cfg);
    let mut overlaps = 0;
    let endpoints: BTreeSet<&str> = pairs.iter().map(|p| p.endpoint()).collect();
    for ep in &endpoints {
        let keys = |side: &[CliffPair]| -> BTreeSet<String> {
            side.iter()
                .filter(|p| p.endpoint() == *ep)
                .map(|p| split_key(p, &cfg))
                .collect()
        };
        overlaps += keys(&split.train).intersection(&keys(&split.test)).count();
    }
    let small = pairs.iter().filter(|p| p.endpoint() == "diril").count();
    let small_in_test = split.test.iter().filter(|p| p.endpoint() == "diril").count();
    let covered = split.train.len() + split.test.len() == pairs.len();
    (
        overlaps == 0 && small == 3 && small_in_test == 3 && covered,
        format!(
            "{} endpoints, {overlaps} shared scaffolds, diril {small_in_test}/{small} pairs in test",
            endpoints.len()
        ),
    )
}

fn main() {
    let data = demo();
    let mined = mine(&data, &MinerConfig::default()).pairs;
    let results: Vec<(u32, Option<Outcome>)> = vec![
        (1, Some(criterion_1())),
        (2, Some(criterion_2())),
        (3, Some(criterion_3(&mined))),
        (4, Some(criterion_4(&data))),
        (5, Some(criterion_5())),
        (6, Some(criterion_6())),
        (7, Some(criterion_7())),
        (8, Some(criterion_8())),
        (9, None),
        (10, Some(criterion_10(&mined))),
    ];
    let mut failed = Vec::new();
    for (n, r) in &results {
        match r {
            Some((ok, detail)) => {
                println!("criterion {n:>2}: {} ({detail})", if *ok { "PASS" } else { "FAIL" });
                if !ok {
                    failed.push(*n);
                }
            }
            None => println!(
                "criterion {n:>2}: WAIVED (published dataset release not reachable from this environment)"
            ),
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
