//! Task 1/2/3 scoring, property retention and run aggregation.

mod aggregate;
mod fragments;
mod molecule;
mod property;

pub use aggregate::{
    aggregate, format_metric, mean_std, metric_names, MetricReport, MetricRow, ScoredRecord, Scores,
};
pub(crate) use aggregate::slice_rows;
pub use fragments::{eval_task1, eval_task2, lev_frag, overlap, Task1Record, Task2Record};
pub use molecule::{bleu1, canonical_prediction, eval_task3, MetricConfig, Task3Record};
pub use property::{
    property_score, prs, prs_from_scores, Desirability, PropertyScoreConfig, PROPERTY_NAMES,
};
