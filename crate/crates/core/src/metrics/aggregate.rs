use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::fragments::{Task1Record, Task2Record};
use super::molecule::Task3Record;
use crate::qa::{StepMode, TaskId};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Scores {
    T1(Task1Record),
    T2(Task2Record),
    T3(Task3Record),
}

impl Scores {
    pub fn task(&self) -> TaskId {
        match self {
            Scores::T1(_) => TaskId::T1,
            Scores::T2(_) => TaskId::T2,
            Scores::T3(_) => TaskId::T3,
        }
    }

    /// Exact-match bit used as the task's accuracy.
    pub fn correct(&self) -> bool {
        match self {
            Scores::T1(r) => r.em == 1,
            Scores::T2(r) => r.em == 1,
            Scores::T3(r) => r.em == 1,
        }
    }

    /// Values in [`metric_names`] order; accuracy is a percentage.
    pub fn values(&self) -> Vec<f64> {
        match self {
            Scores::T1(r) => vec![100.0 * r.em as f64, r.precision, r.recall, r.f1],
            Scores::T2(r) => vec![100.0 * r.em as f64, r.precision, r.recall, r.f1, r.lev_frag],
            Scores::T3(r) => vec![
                100.0 * r.em as f64,
                r.bleu1,
                r.lev as f64,
                r.fts_path,
                r.fts_keys,
                r.fts_circular,
                r.validity as f64,
                r.prs,
            ],
        }
    }
}

pub fn metric_names(task: TaskId) -> &'static [&'static str] {
    match task {
        TaskId::T1 => &["acc", "precision", "recall", "f1"],
        TaskId::T2 => &["acc", "precision", "recall", "f1", "lev_frag"],
        TaskId::T3 => &[
            "acc",
            "bleu1",
            "lev",
            "fts_path",
            "fts_keys",
            "fts_circular",
            "validity",
            "prs",
        ],
    }
}

/// Percentages and distances print with two decimals, similarities with four.
pub fn format_metric(metric: &str, value: f64) -> String {
    match metric {
        "acc" | "lev" | "lev_frag" => format!("{value:.2}"),
        _ => format!("{value:.4}"),
    }
}

/// One scored answer: an instance in one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredRecord {
    pub instance_id: String,
    pub pair_id: String,
    pub task: TaskId,
    pub step_mode: StepMode,
    pub endpoint: String,
    /// 1-based run index.
    pub run: u32,
    pub scores: Scores,
}

/// Mean and sample std over per-run slice means. `None` marks an empty
/// slice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub task: TaskId,
    /// `None` pools single and multi.
    pub step_mode: Option<StepMode>,
    /// `None` pools every endpoint.
    pub endpoint: Option<String>,
    pub metric: String,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub runs: usize,
    pub samples: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub rows: Vec<MetricRow>,
}

impl MetricReport {
    pub fn get(&self, task: TaskId, step: Option<StepMode>, metric: &str) -> Option<&MetricRow> {
        self.rows
            .iter()
            .find(|r| r.task == task && r.step_mode == step && r.metric == metric)
    }
}

/// Mean and sample (n-1) standard deviation; a single value has std 0.
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Some((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Some((mean, var.sqrt()))
}

pub(crate) const STEP_SLICES: [Option<StepMode>; 3] =
    [Some(StepMode::Single), Some(StepMode::Multi), None];

/// Rows for every (task, step slice, metric) over `records`, which must
/// already be restricted to the wanted endpoint slice.
pub(crate) fn slice_rows(
    records: &[&ScoredRecord],
    runs: u32,
    endpoint: Option<&str>,
) -> Vec<MetricRow> {
    let mut rows = Vec::new();
    for task in TaskId::ALL {
        for step in STEP_SLICES {
            let in_slice: Vec<&&ScoredRecord> = records
                .iter()
                .filter(|r| r.task == task && step.map_or(true, |s| r.step_mode == s))
                .collect();
            let names = metric_names(task);
            // per run: (sum per metric, count)
            let mut per_run: BTreeMap<u32, (Vec<f64>, usize)> = BTreeMap::new();
            for r in &in_slice {
                if r.run == 0 || r.run > runs {
                    continue;
                }
                let e = per_run
                    .entry(r.run)
                    .or_insert_with(|| (vec![0.0; names.len()], 0));
                for (acc, v) in e.0.iter_mut().zip(r.scores.values()) {
                    *acc += v;
                }
                e.1 += 1;
            }
            for (m, name) in names.iter().enumerate() {
                let run_means: Vec<f64> = per_run.values().map(|(s, n)| s[m] / *n as f64).collect();
                let stats = mean_std(&run_means);
                rows.push(MetricRow {
                    task,
                    step_mode: step,
                    endpoint: endpoint.map(str::to_string),
                    metric: name.to_string(),
                    mean: stats.map(|s| s.0),
                    std: stats.map(|s| s.1),
                    runs: run_means.len(),
                    samples: in_slice.len(),
                });
            }
        }
    }
    rows
}

/// Pooled report over all endpoints, sliced by task and step mode.
pub fn aggregate(records: &[ScoredRecord], runs: u32) -> MetricReport {
    let refs: Vec<&ScoredRecord> = records.iter().collect();
    MetricReport {
        rows: slice_rows(&refs, runs, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t1(run: u32, em: u8, step: StepMode) -> ScoredRecord {
        ScoredRecord {
            instance_id: format!("i{run}{em}"),
            pair_id: "p".into(),
            task: TaskId::T1,
            step_mode: step,
            endpoint: "ames".into(),
            run,
            scores: Scores::T1(Task1Record {
                em,
                precision: em as f64,
                recall: em as f64,
                f1: em as f64,
            }),
        }
    }

    #[test]
    fn mean_std_examples() {
        let (m, s) = mean_std(&[40.0, 41.0, 42.0]).unwrap();
        assert!((m - 41.0).abs() < 1e-9 && (s - 1.0).abs() < 1e-9);
        assert_eq!(mean_std(&[7.0]), Some((7.0, 0.0)));
        assert_eq!(mean_std(&[]), None);
        assert_eq!(
            format!(
                "{} ± {}",
                format_metric("acc", 41.0),
                format_metric("acc", 0.0)
            ),
            "41.00 ± 0.00"
        );
    }

    #[test]
    fn per_run_means_then_spread() {
        // run 1: 1 of 2 correct (50), run 2: 2 of 2 (100), run 3: 0 of 2 (0)
        let mut recs = Vec::new();
        for (run, ems) in [(1, [1, 0]), (2, [1, 1]), (3, [0, 0])] {
            for em in ems {
                recs.push(t1(run, em, StepMode::Single));
            }
        }
        let rep = aggregate(&recs, 3);
        let row = rep.get(TaskId::T1, Some(StepMode::Single), "acc").unwrap();
        assert!((row.mean.unwrap() - 50.0).abs() < 1e-9);
        assert!((row.std.unwrap() - 50.0).abs() < 1e-9);
        assert_eq!((row.runs, row.samples), (3, 6));
        let empty = rep.get(TaskId::T1, Some(StepMode::Multi), "acc").unwrap();
        assert_eq!((empty.mean, empty.std, empty.samples), (None, None, 0));
        assert!(rep.get(TaskId::T3, None, "prs").unwrap().mean.is_none());
    }
}
