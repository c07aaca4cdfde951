use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;
use toxcliff_core::analysis::{AlertSummary, CaseDistribution};
use toxcliff_core::metrics::{format_metric, metric_names, MetricReport, MetricRow};
use toxcliff_core::qa::{StepMode, TaskId};

use crate::analyze::AnalysisBundle;
use crate::error::Result;
use crate::io::write_atomic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    /// Plain-text tables.
    Table,
    /// CSV files.
    Delimited,
    /// One JSON object per line.
    Lines,
}

pub const NULL_CELL: &str = "null";

const STEPS: [(Option<StepMode>, &str); 3] = [
    (Some(StepMode::Single), "single"),
    (Some(StepMode::Multi), "multi"),
    (None, "overall"),
];

fn header(task: TaskId, metric: &str) -> String {
    let label = match metric {
        "acc" => "Acc",
        "precision" => "Precision",
        "recall" => "Recall",
        "f1" => "F1",
        "lev_frag" => "LevFrag",
        "bleu1" => "BLEU1",
        "lev" => "Lev",
        "fts_path" => "FTS path",
        "fts_keys" => "FTS keys",
        "fts_circular" => "FTS circular",
        "validity" => "Validity",
        "prs" => "PRS",
        other => other,
    };
    match task {
        TaskId::T3 => label.to_string(),
        _ => format!("{task} {label}"),
    }
}

fn cell(row: Option<&MetricRow>) -> String {
    match row {
        Some(MetricRow {
            mean: Some(m),
            std: Some(s),
            metric,
            ..
        }) => format!("{} ± {}", format_metric(metric, *m), format_metric(metric, *s)),
        _ => NULL_CELL.to_string(),
    }
}

fn table_line(out: &mut String, cells: &[String]) {
    let _ = writeln!(out, "| {} |", cells.join(" | "));
}

fn table(out: &mut String, title: &str, headers: &[String], rows: &[Vec<String>]) {
    let _ = writeln!(out, "{title}");
    table_line(out, headers);
    table_line(out, &vec!["---".to_string(); headers.len()]);
    for r in rows {
        table_line(out, r);
    }
    out.push('\n');
}

fn step_table(out: &mut String, title: &str, report: &MetricReport, tasks: &[TaskId]) {
    let mut headers = vec!["Setting".to_string()];
    for t in tasks {
        headers.extend(metric_names(*t).iter().map(|m| header(*t, m)));
    }
    let rows: Vec<Vec<String>> = STEPS
        .iter()
        .map(|(step, name)| {
            let mut r = vec![name.to_string()];
            for t in tasks {
                r.extend(metric_names(*t).iter().map(|m| cell(report.get(*t, *step, m))));
            }
            r
        })
        .collect();
    table(out, title, &headers, &rows);
}

/// Main results: the Task 1/2 block and the Task 3 block, each with
/// single, multi and overall rows.
pub fn render_main_table(report: &MetricReport) -> String {
    let mut out = String::new();
    step_table(&mut out, "Task 1 and Task 2", report, &[TaskId::T1, TaskId::T2]);
    step_table(&mut out, "Task 3", report, &[TaskId::T3]);
    out
}

/// One table per task, one row per endpoint, pooled over step modes.
pub fn render_endpoint_tables(bundle: &AnalysisBundle) -> String {
    let mut out = String::new();
    for task in TaskId::ALL {
        let mut headers = vec!["Endpoint".to_string()];
        headers.extend(metric_names(task).iter().map(|m| header(task, m)));
        let rows: Vec<Vec<String>> = bundle
            .endpoints
            .iter()
            .map(|(ep, rep)| {
                let mut r = vec![ep.clone()];
                r.extend(metric_names(task).iter().map(|m| cell(rep.get(task, None, m))));
                r
            })
            .collect();
        table(&mut out, &format!("Endpoint breakdown: {task}"), &headers, &rows);
    }
    out
}

fn case_rows(groups: [&CaseDistribution; 2]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for g in groups {
        if g.is_empty() {
            rows.push(vec![g.group.name().into(), NULL_CELL.into(), NULL_CELL.into()]);
        }
        for (case, p) in &g.proportions {
            rows.push(vec![g.group.name().into(), case.to_string(), format!("{p:.4}")]);
        }
    }
    rows
}

/// Case proportions within the T3=1 and T3=0 groups.
pub fn render_case_table(success: &CaseDistribution, failure: &CaseDistribution) -> String {
    let mut out = String::new();
    let headers = ["Group", "Case", "Proportion"].map(String::from);
    table(&mut out, "Case composition", &headers, &case_rows([success, failure]));
    for g in [success, failure] {
        if g.samples > 0 {
            let _ = writeln!(out, "{}: {} samples", g.group.name(), g.samples);
        }
    }
    out
}

/// `group,case,proportion`, the same layout the fixture loader reads.
pub fn render_case_csv(success: &CaseDistribution, failure: &CaseDistribution) -> String {
    let mut out = String::from("group,case,proportion\n");
    for r in case_rows([success, failure]) {
        let _ = writeln!(out, "{}", r.join(","));
    }
    out
}

pub fn render_alert_table(alerts: &[AlertSummary]) -> String {
    let mut out = String::new();
    let headers = [
        "Endpoint", "Fragment", "Count", "Stripped", "Best alert", "Similarity", "Band",
    ]
    .map(String::from);
    let mut rows = Vec::new();
    for s in alerts {
        for (r, count) in &s.results {
            rows.push(vec![
                s.endpoint.clone(),
                r.fragment.to_string(),
                count.to_string(),
                r.stripped.to_string(),
                r.best_alert.to_string(),
                format!("{:.4}", r.max_similarity),
                band_name(r.band),
            ]);
        }
        for (frag, why) in &s.skipped {
            rows.push(vec![
                s.endpoint.clone(),
                frag.to_string(),
                NULL_CELL.into(),
                NULL_CELL.into(),
                NULL_CELL.into(),
                NULL_CELL.into(),
                format!("skipped: {why}"),
            ]);
        }
    }
    table(&mut out, "Structural alert overlap", &headers, &rows);
    out
}

fn band_name(b: toxcliff_core::analysis::OverlapBand) -> String {
    serde_json::to_value(b)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

pub fn render_table(bundle: &AnalysisBundle) -> String {
    let mut out = render_main_table(&bundle.main);
    out.push_str(&render_endpoint_tables(bundle));
    if let Some(c) = &bundle.cases {
        out.push_str(&render_case_table(&c.success, &c.failure));
        if c.excluded > 0 {
            let _ = writeln!(out, "excluded (incomplete pair/run keys): {}", c.excluded);
        }
        out.push('\n');
    }
    if !bundle.alerts.is_empty() {
        out.push_str(&render_alert_table(&bundle.alerts));
    }
    out
}

fn opt_num(v: Option<f64>) -> String {
    v.map_or(NULL_CELL.to_string(), |x| x.to_string())
}

fn metric_csv_rows(out: &mut String, scope: &str, report: &MetricReport) {
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{scope},{},{},{},{},{},{},{},{}",
            r.endpoint.as_deref().unwrap_or(""),
            r.task,
            r.step_mode.map_or("overall", |s| s.as_str()),
            r.metric,
            opt_num(r.mean),
            opt_num(r.std),
            r.runs,
            r.samples
        );
    }
}

/// Every metric row, pooled and per endpoint.
pub fn render_metrics_csv(bundle: &AnalysisBundle) -> String {
    let mut out = String::from("scope,endpoint,task,step_mode,metric,mean,std,runs,samples\n");
    metric_csv_rows(&mut out, "main", &bundle.main);
    for rep in bundle.endpoints.values() {
        metric_csv_rows(&mut out, "endpoint", rep);
    }
    out
}

/// One JSON object per metric row, case proportion and alert result.
pub fn render_lines(bundle: &AnalysisBundle) -> String {
    let mut out = String::new();
    let mut push = |v: serde_json::Value| {
        out.push_str(&v.to_string());
        out.push('\n');
    };
    for r in &bundle.main.rows {
        push(json!({ "section": "main", "row": r }));
    }
    for rep in bundle.endpoints.values() {
        for r in &rep.rows {
            push(json!({ "section": "endpoint", "row": r }));
        }
    }
    if let Some(c) = &bundle.cases {
        for g in [&c.success, &c.failure] {
            push(json!({
                "section": "cases",
                "group": g.group.name(),
                "samples": g.samples,
                "proportions": g.proportions,
            }));
        }
    }
    for s in &bundle.alerts {
        push(json!({ "section": "alerts", "summary": s }));
    }
    out
}

/// Writes the requested formats under `dir` and returns the files written.
pub fn export_report(bundle: &AnalysisBundle, formats: &[ReportFormat], dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let mut put = |name: &str, text: String| -> Result<()> {
        let p = dir.join(name);
        write_atomic(&p, text.as_bytes())?;
        written.push(p);
        Ok(())
    };
    for f in formats {
        match f {
            ReportFormat::Table => put("report.txt", render_table(bundle))?,
            ReportFormat::Delimited => {
                put("metrics.csv", render_metrics_csv(bundle))?;
                if let Some(c) = &bundle.cases {
                    put("cases.csv", render_case_csv(&c.success, &c.failure))?;
                }
            }
            ReportFormat::Lines => put("report.jsonl", render_lines(bundle))?,
        }
    }
    Ok(written)
}
