use std::path::PathBuf;

use toxcliff_core::metrics::{
    aggregate, ScoredRecord, Scores, Task1Record, Task2Record, Task3Record,
};
use toxcliff_core::analysis::endpoint_breakdown;
use toxcliff_core::qa::{StepMode, TaskId};
use toxcliff_harness::analyze::{case_summary, AnalysisBundle};
use toxcliff_harness::report::{
    export_report, render_main_table, render_table, ReportFormat, NULL_CELL,
};

fn rec(pair: &str, ep: &str, step: StepMode, run: u32, scores: Scores) -> ScoredRecord {
    ScoredRecord {
        instance_id: format!("{pair}-{}", scores.task()),
        pair_id: pair.into(),
        task: scores.task(),
        step_mode: step,
        endpoint: ep.into(),
        run,
        scores,
    }
}

fn t1(em: u8, p: f64, r: f64) -> Scores {
    let f1 = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    Scores::T1(Task1Record { em, precision: p, recall: r, f1 })
}

fn t2(em: u8, p: f64, r: f64, lev: f64) -> Scores {
    let f1 = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    Scores::T2(Task2Record { em, precision: p, recall: r, f1, lev_frag: lev })
}

fn t3(em: u8, valid: u8, lev: usize, sim: f64) -> Scores {
    Scores::T3(Task3Record {
        em,
        bleu1: if em == 1 { 1.0 } else { 0.5 },
        lev,
        fts_path: sim,
        fts_keys: sim,
        fts_circular: sim,
        validity: valid,
        prs: if valid == 1 { 0.9 } else { 0.0 },
    })
}

/// Three pairs over two endpoints and two runs.
fn fixture() -> Vec<ScoredRecord> {
    use StepMode::{Multi, Single};
    vec![
        rec("p1", "ames", Single, 1, t1(1, 1.0, 1.0)),
        rec("p1", "ames", Single, 1, t2(1, 1.0, 1.0, 0.0)),
        rec("p1", "ames", Single, 1, t3(1, 1, 0, 1.0)),
        rec("p1", "ames", Single, 2, t1(1, 1.0, 1.0)),
        rec("p1", "ames", Single, 2, t2(0, 0.0, 0.0, 3.0)),
        rec("p1", "ames", Single, 2, t3(0, 1, 4, 0.6)),
        rec("p2", "ames", Multi, 1, t1(0, 0.5, 0.5)),
        rec("p2", "ames", Multi, 1, t2(0, 0.5, 1.0, 2.0)),
        rec("p2", "ames", Multi, 1, t3(0, 0, 9, 0.0)),
        rec("p2", "ames", Multi, 2, t1(1, 1.0, 1.0)),
        rec("p2", "ames", Multi, 2, t2(1, 1.0, 1.0, 0.0)),
        rec("p2", "ames", Multi, 2, t3(1, 1, 0, 1.0)),
        rec("p3", "herg", Single, 1, t1(0, 0.0, 0.0)),
        rec("p3", "herg", Single, 1, t2(0, 0.0, 0.0, 5.5)),
        rec("p3", "herg", Single, 1, t3(0, 1, 2, 0.8)),
        rec("p3", "herg", Single, 2, t1(1, 1.0, 1.0)),
        rec("p3", "herg", Single, 2, t2(0, 0.5, 0.5, 1.0)),
        rec("p3", "herg", Single, 2, t3(1, 1, 0, 1.0)),
    ]
}

fn bundle(records: &[ScoredRecord]) -> AnalysisBundle {
    AnalysisBundle {
        runs: 2,
        main: aggregate(records, 2),
        endpoints: endpoint_breakdown(records, 2),
        cases: Some(case_summary(records).unwrap()),
        alerts: Vec::new(),
    }
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

#[test]
fn report_matches_golden_file() {
    let text = render_table(&bundle(&fixture()));
    let path = golden("report.txt");
    if std::env::var_os("TOXCLIFF_WRITE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &text).unwrap();
    }
    let want = std::fs::read_to_string(&path).expect("golden file present");
    assert_eq!(text, want);
}

#[test]
fn exports_are_byte_stable() {
    let b = bundle(&fixture());
    let formats = [ReportFormat::Table, ReportFormat::Delimited, ReportFormat::Lines];
    let (x, y) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let fx = export_report(&b, &formats, x.path()).unwrap();
    let fy = export_report(&b, &formats, y.path()).unwrap();
    assert_eq!(fx.len(), 4);
    for (a, c) in fx.iter().zip(&fy) {
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(c).unwrap());
    }
    let mut shuffled = fixture();
    shuffled.reverse();
    assert_eq!(render_table(&bundle(&shuffled)), render_table(&b));
}

#[test]
fn empty_slice_is_an_explicit_null() {
    let single: Vec<_> = fixture()
        .into_iter()
        .filter(|r| r.step_mode == StepMode::Single)
        .collect();
    let table = render_main_table(&aggregate(&single, 2));
    let multi_rows: Vec<&str> = table.lines().filter(|l| l.starts_with("| multi |")).collect();
    assert_eq!(multi_rows.len(), 2);
    for row in multi_rows {
        let cells: Vec<&str> = row.trim_matches('|').split('|').map(str::trim).collect();
        assert!(cells[1..].iter().all(|c| *c == NULL_CELL), "{row}");
    }
    assert_eq!(aggregate(&single, 2).get(TaskId::T1, None, "acc").unwrap().samples, 4);
}
