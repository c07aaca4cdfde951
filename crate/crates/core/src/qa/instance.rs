use std::fmt;

use serde::{Deserialize, Serialize};
use toxcliff_chem::{CanonicalSmiles, SafeString};

use crate::error::{CoreError, Result};
use crate::miner::{CliffPair, SplitName};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TaskId {
    T1,
    T2,
    T3,
}

impl TaskId {
    pub const ALL: [TaskId; 3] = [TaskId::T1, TaskId::T2, TaskId::T3];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskId::T1 => "T1",
            TaskId::T2 => "T2",
            TaskId::T3 => "T3",
        }
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepMode {
    Single,
    Multi,
}

impl StepMode {
    pub fn as_str(self) -> &'static str {
        match self {
            StepMode::Single => "single",
            StepMode::Multi => "multi",
        }
    }
}

impl fmt::Display for StepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Representation the model is asked to produce for Task 3.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum GenerationMode {
    Smiles,
    #[default]
    Safe,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QAInstance {
    /// `{pair_id}-{task}`.
    pub id: String,
    pub pair_id: String,
    pub task: TaskId,
    pub step_mode: StepMode,
    pub endpoint: String,
    pub split: SplitName,
    pub toxic_smiles: CanonicalSmiles,
    pub toxic_safe: SafeString,
    /// Toxic-only fragments shown to the model (Task 2 only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub given_toxic_fragments: Option<String>,
    /// Expected answer text. Task 2 uses "" when the edit only removes
    /// fragments. Task 3 holds the molecule in `generation_mode`.
    pub gold: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_smiles: Option<CanonicalSmiles>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_safe: Option<SafeString>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generation_mode: Option<GenerationMode>,
}

/// Task 1 counts only the toxic-only fragments. Tasks 2 and 3 are single
/// step when one fragment is swapped (or dropped) and multi step as soon as
/// either side has two or more.
pub fn classify_step_mode(task: TaskId, n_t: usize, n_nt: usize) -> Result<StepMode> {
    if n_t == 0 {
        return Err(CoreError::InvalidCounts(format!(
            "{task} needs at least one toxic-only fragment (n_t=0, n_nt={n_nt})"
        )));
    }
    let multi = match task {
        TaskId::T1 => n_t >= 2,
        TaskId::T2 | TaskId::T3 => n_t >= 2 || n_nt >= 2,
    };
    Ok(if multi {
        StepMode::Multi
    } else {
        StepMode::Single
    })
}

/// The three instances of one pair.
pub fn build_instances(
    pair: &CliffPair,
    split: SplitName,
    mode: GenerationMode,
) -> Result<[QAInstance; 3]> {
    let f = &pair.fragments;
    if f.toxic_only.is_empty() {
        return Err(CoreError::EmptyGold("T1"));
    }
    let (n_t, n_nt) = (f.n_toxic_only(), f.n_nontoxic_only());
    let toxic_only = f.toxic_only.join();
    let nontoxic_only = f.nontoxic_only.join();
    let base = |task: TaskId| -> Result<QAInstance> {
        Ok(QAInstance {
            id: format!("{}-{task}", pair.id),
            pair_id: pair.id.clone(),
            task,
            step_mode: classify_step_mode(task, n_t, n_nt)?,
            endpoint: pair.endpoint().to_string(),
            split,
            toxic_smiles: pair.toxic.smiles.clone(),
            toxic_safe: pair.toxic_safe.clone(),
            given_toxic_fragments: None,
            gold: String::new(),
            gold_smiles: None,
            gold_safe: None,
            generation_mode: None,
        })
    };
    let t1 = QAInstance {
        gold: toxic_only.clone(),
        ..base(TaskId::T1)?
    };
    let t2 = QAInstance {
        given_toxic_fragments: Some(toxic_only),
        gold: nontoxic_only,
        ..base(TaskId::T2)?
    };
    let t3 = QAInstance {
        gold: match mode {
            GenerationMode::Smiles => pair.nontoxic.smiles.to_string(),
            GenerationMode::Safe => pair.nontoxic_safe.as_str().to_string(),
        },
        gold_smiles: Some(pair.nontoxic.smiles.clone()),
        gold_safe: Some(pair.nontoxic_safe.clone()),
        generation_mode: Some(mode),
        ..base(TaskId::T3)?
    };
    Ok([t1, t2, t3])
}
