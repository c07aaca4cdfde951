use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use toxcliff_chem::{edit_distance, tokenize_fragments, FragmentMultiset, FragmentToken};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Task1Record {
    pub em: u8,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Task2Record {
    pub em: u8,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub lev_frag: f64,
}

/// Tokens of a fragment string; unparseable or blank text gives none.
fn tokens(text: &str) -> Vec<FragmentToken> {
    tokenize_fragments(text).unwrap_or_default()
}

/// Set-based overlap. Two empty sides agree perfectly; one empty side
/// scores zero.
pub fn overlap(pred: &[FragmentToken], gold: &[FragmentToken]) -> (f64, f64, f64) {
    let p: BTreeSet<&FragmentToken> = pred.iter().collect();
    let g: BTreeSet<&FragmentToken> = gold.iter().collect();
    if p.is_empty() && g.is_empty() {
        return (1.0, 1.0, 1.0);
    }
    if p.is_empty() || g.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let hit = p.intersection(&g).count() as f64;
    let precision = hit / p.len() as f64;
    let recall = hit / g.len() as f64;
    // 2PR/(P+R) in count form, one rounding step
    let f1 = 2.0 * hit / (p.len() + g.len()) as f64;
    (precision, recall, f1)
}

fn exact(pred: &[FragmentToken], gold: &[FragmentToken]) -> u8 {
    let ms = |t: &[FragmentToken]| t.iter().cloned().collect::<FragmentMultiset>();
    u8::from(ms(pred) == ms(gold))
}

pub fn eval_task1(pred: &str, gold: &str) -> Task1Record {
    let (p, g) = (tokens(pred), tokens(gold));
    if p.is_empty() || g.is_empty() {
        return Task1Record::default();
    }
    let (precision, recall, f1) = overlap(&p, &g);
    Task1Record {
        em: exact(&p, &g),
        precision,
        recall,
        f1,
    }
}

/// Mean over predicted fragments of the closest gold fragment distance.
/// Without usable predictions the mean gold fragment length is charged.
/// An empty gold (removal-only edit) compares against the empty string.
pub fn lev_frag(pred: &[FragmentToken], gold: &[FragmentToken]) -> f64 {
    if pred.is_empty() {
        if gold.is_empty() {
            return 0.0;
        }
        return gold.iter().map(|g| g.len() as f64).sum::<f64>() / gold.len() as f64;
    }
    let total: usize = pred
        .iter()
        .map(|p| {
            gold.iter()
                .map(|g| edit_distance(p.as_str(), g.as_str()))
                .min()
                .unwrap_or_else(|| p.len())
        })
        .sum();
    total as f64 / pred.len() as f64
}

/// As Task 1, plus the fragment-level edit distance. An empty gold is the
/// removal-only case: only an empty prediction matches it.
pub fn eval_task2(pred: &str, gold: &str) -> Task2Record {
    let (p, g) = (tokens(pred), tokens(gold));
    let (precision, recall, f1) = overlap(&p, &g);
    Task2Record {
        em: exact(&p, &g),
        precision,
        recall,
        f1,
        lev_frag: lev_frag(&p, &g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn task1_examples() {
        let r = eval_task1("c1ccccc1.C1CC1", "C1CC1.c1ccccc1");
        assert_eq!((r.em, r.f1), (1, 1.0));
        let r = eval_task1("a", "a.b");
        assert!(close(r.precision, 1.0) && close(r.recall, 0.5) && close(r.f1, 2.0 / 3.0));
        assert_eq!(r.em, 0);
        let r = eval_task1("", "a");
        assert_eq!((r.em, r.f1), (0, 0.0));
        let r = eval_task1(" . ", "a");
        assert_eq!((r.em, r.f1), (0, 0.0));
    }

    #[test]
    fn multiset_exact_match_counts_duplicates() {
        assert_eq!(eval_task1("a.a", "a").em, 0);
        assert_eq!(eval_task1("a.a", "a").f1, 1.0);
        assert_eq!(eval_task1("a.b.a", "a.a.b").em, 1);
    }

    #[test]
    fn task2_examples() {
        assert_eq!(eval_task2("CCO", "CCO").lev_frag, 0.0);
        assert!(close(eval_task2("CCO", "CCN.CC").lev_frag, 1.0));
        assert!(close(eval_task2("CCO.C", "CCO").lev_frag, 1.0));
    }

    #[test]
    fn task2_unusable_prediction_pays_mean_gold_length() {
        let r = eval_task2("", "CCO.CC");
        assert_eq!((r.em, r.f1), (0, 0.0));
        assert!(close(r.lev_frag, 2.5));
    }

    #[test]
    fn task2_empty_gold() {
        let r = eval_task2("", "");
        assert_eq!((r.em, r.f1, r.lev_frag), (1, 1.0, 0.0));
        let r = eval_task2("CC2", "");
        assert_eq!((r.em, r.f1, r.lev_frag), (0, 0.0, 3.0));
    }
}
