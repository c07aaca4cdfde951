use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use toxcliff_chem::{fingerprint, tanimoto, CanonicalSmiles, Fingerprint, FingerprintKind};

use super::assets::ContextAssets;
use super::instance::{GenerationMode, QAInstance, TaskId};
use crate::error::{CoreError, Result};
use crate::miner::SplitName;

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[default]
    Plain,
    FourShot,
    Cot,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::FourShot => "four_shot",
            Variant::Cot => "cot",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotExample {
    pub question: String,
    pub answer: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptBundle {
    pub instance_id: String,
    pub system_text: String,
    pub user_text: String,
    pub shot_examples: Vec<ShotExample>,
    pub variant: Variant,
}

impl PromptBundle {
    /// Chat turns: system, then alternating shot question/answer, then the
    /// query.
    pub fn messages(&self) -> Vec<(&'static str, &str)> {
        let mut m = vec![("system", self.system_text.as_str())];
        for s in &self.shot_examples {
            m.push(("user", s.question.as_str()));
            m.push(("assistant", s.answer.as_str()));
        }
        m.push(("user", self.user_text.as_str()));
        m
    }
}

/// Step-wise prompts exist for Task 3 only; Tasks 1 and 2 keep their plain
/// templates under the CoT setting.
fn template_stem(inst: &QAInstance, variant: Variant) -> Result<&'static str> {
    Ok(match inst.task {
        TaskId::T1 => "task1",
        TaskId::T2 => "task2",
        TaskId::T3 => match (variant, inst.generation_mode.unwrap_or_default()) {
            (Variant::Cot, GenerationMode::Safe) => "task3_cot",
            (Variant::Cot, GenerationMode::Smiles) => {
                return Err(CoreError::Config(
                    "step-wise prompts ask for a SAFE answer; use safe generation mode".into(),
                ))
            }
            (_, GenerationMode::Safe) => "task3_safe",
            (_, GenerationMode::Smiles) => "task3_smiles",
        },
    })
}

/// Replaces `{name}` for known names in one left-to-right pass, so inserted
/// text is never re-scanned. Other braces (JSON examples) are left alone.
fn fill(template: &str, values: &BTreeMap<&str, &str>) -> String {
    let mut out = String::with_capacity(template.len() * 2);
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let name_len = after
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(after.len());
        let name = &after[..name_len];
        match (values.get(name), after[name_len..].starts_with('}')) {
            (Some(v), true) if !name.is_empty() => {
                out.push_str(v);
                rest = &after[name_len + 1..];
            }
            _ => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}

fn question_text(inst: &QAInstance, variant: Variant, assets: &ContextAssets) -> Result<String> {
    let stem = template_stem(inst, variant)?;
    let template = assets.template(&format!("{stem}_question"))?;
    let mut values = BTreeMap::new();
    values.insert(
        "endpoint_description",
        assets.endpoint_description(&inst.endpoint)?,
    );
    values.insert("safe_explanation", assets.safe_explanation.as_str());
    values.insert("pair_context", assets.pair_context.as_str());
    values.insert("preserve_property", assets.preserve_property.as_str());
    values.insert("toxic_safe_decoded_smiles", inst.toxic_smiles.as_str());
    values.insert("toxic_safe", inst.toxic_safe.as_str());
    values.insert(
        "only_toxic_safe_fragments",
        inst.given_toxic_fragments.as_deref().unwrap_or(""),
    );
    Ok(fill(template, &values))
}

/// Answer JSON exactly as the templates request it.
pub fn answer_json(answer: &str) -> String {
    serde_json::json!({ "answer": answer }).to_string()
}

/// Renders the system and user text of one instance. Shot examples are
/// attached only for the 4-shot variant.
pub fn render_prompt(
    inst: &QAInstance,
    variant: Variant,
    assets: &ContextAssets,
    shots: &[ShotExample],
) -> Result<PromptBundle> {
    let stem = template_stem(inst, variant)?;
    Ok(PromptBundle {
        instance_id: inst.id.clone(),
        system_text: assets.template(&format!("{stem}_system"))?.to_string(),
        user_text: question_text(inst, variant, assets)?,
        shot_examples: if variant == Variant::FourShot {
            shots.to_vec()
        } else {
            Vec::new()
        },
        variant,
    })
}

fn circular(smiles: &CanonicalSmiles) -> Option<Fingerprint> {
    fingerprint(smiles, FingerprintKind::Circular, 1024).ok()
}

/// Training instances grouped by (endpoint, task) with the toxic molecule's
/// circular fingerprint precomputed.
pub struct IclIndex<'a> {
    groups: HashMap<(&'a str, TaskId), Vec<(&'a QAInstance, Option<Fingerprint>)>>,
}

impl<'a> IclIndex<'a> {
    pub fn new(pool: &'a [QAInstance]) -> Self {
        let mut groups: HashMap<_, Vec<_>> = HashMap::new();
        for inst in pool.iter().filter(|i| i.split == SplitName::Train) {
            groups
                .entry((inst.endpoint.as_str(), inst.task))
                .or_default()
                .push((inst, circular(&inst.toxic_smiles)));
        }
        IclIndex { groups }
    }

    /// Top `k` same-endpoint, same-task training instances by toxic-molecule
    /// Tanimoto, ties by instance id. The query itself is never returned.
    pub fn nearest(&self, query: &QAInstance, k: usize) -> Vec<&'a QAInstance> {
        let Some(group) = self.groups.get(&(query.endpoint.as_str(), query.task)) else {
            return Vec::new();
        };
        let q = circular(&query.toxic_smiles);
        let mut scored: Vec<(f64, &QAInstance)> = group
            .iter()
            .filter(|(i, _)| i.id != query.id)
            .map(|(i, fp)| {
                let s = match (&q, fp) {
                    (Some(a), Some(b)) => tanimoto(a, b).unwrap_or(0.0),
                    _ => 0.0,
                };
                (s, *i)
            })
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.id.cmp(&b.1.id)));
        scored.into_iter().take(k).map(|(_, i)| i).collect()
    }
}

/// Renders the retrieved examples as question/answer pairs using the plain
/// template of the same task.
pub fn render_shots(examples: &[&QAInstance], assets: &ContextAssets) -> Result<Vec<ShotExample>> {
    examples
        .iter()
        .map(|e| {
            Ok(ShotExample {
                question: question_text(e, Variant::Plain, assets)?,
                answer: answer_json(&e.gold),
            })
        })
        .collect()
}

/// Retrieval plus rendering in one call.
pub fn select_icl_examples(
    inst: &QAInstance,
    train_pool: &[QAInstance],
    k: usize,
    assets: &ContextAssets,
) -> Result<Vec<ShotExample>> {
    let index = IclIndex::new(train_pool);
    render_shots(&index.nearest(inst, k), assets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qa::instance::StepMode;
    use toxcliff_chem::{canonicalize, SafeString};

    fn assets() -> ContextAssets {
        let mut a = ContextAssets::builtin();
        a.endpoint_descriptions
            .insert("ames".into(), "Ames mutagenicity.".into());
        a
    }

    fn inst(id: &str, task: TaskId, smiles: &str, split: SplitName) -> QAInstance {
        QAInstance {
            id: id.into(),
            pair_id: id.into(),
            task,
            step_mode: StepMode::Single,
            endpoint: "ames".into(),
            split,
            toxic_smiles: canonicalize(smiles).unwrap(),
            toxic_safe: SafeString::new("c1ccc2cc1.O2"),
            given_toxic_fragments: (task == TaskId::T2).then(|| "O2".to_string()),
            gold: "N2".into(),
            gold_smiles: None,
            gold_safe: None,
            generation_mode: (task == TaskId::T3).then_some(GenerationMode::Safe),
        }
    }

    #[test]
    fn fill_is_single_pass() {
        let mut v = BTreeMap::new();
        v.insert("a", "{b}");
        v.insert("b", "x");
        assert_eq!(
            fill("{a} {b} {\"answer\": 1} {c}", &v),
            "{b} x {\"answer\": 1} {c}"
        );
    }

    #[test]
    fn system_prompts_carry_hard_constraint() {
        let a = assets();
        for task in TaskId::ALL {
            let b = render_prompt(
                &inst("x", task, "Oc1ccccc1", SplitName::Test),
                Variant::Plain,
                &a,
                &[],
            )
            .unwrap();
            assert!(b.system_text.contains("Output ONLY the JSON object."));
            assert!(!b.user_text.contains("{endpoint_description}"));
        }
    }

    #[test]
    fn shared_blocks_precede_question_in_order() {
        let a = assets();
        let b = render_prompt(
            &inst("x", TaskId::T1, "Oc1ccccc1", SplitName::Test),
            Variant::Plain,
            &a,
            &[],
        )
        .unwrap();
        let pos: Vec<usize> = [
            "Ames mutagenicity.",
            a.safe_explanation.as_str(),
            a.pair_context.as_str(),
            a.preserve_property.as_str(),
            "Task:",
        ]
        .iter()
        .map(|s| b.user_text.find(s).unwrap())
        .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn task2_shows_given_fragments() {
        let b = render_prompt(
            &inst("x", TaskId::T2, "Oc1ccccc1", SplitName::Test),
            Variant::Plain,
            &assets(),
            &[],
        )
        .unwrap();
        assert!(b.user_text.contains("for this endpoint) are: O2\n"));
    }

    #[test]
    fn cot_task3_asks_for_six_keys() {
        let b = render_prompt(
            &inst("x", TaskId::T3, "Oc1ccccc1", SplitName::Test),
            Variant::Cot,
            &assets(),
            &[],
        )
        .unwrap();
        for key in [
            "step1_only_toxic_safe_fragments",
            "step1_reasoning",
            "step2_only_nontoxic_safe_fragments",
            "step2_reasoning",
            "step3_reasoning",
            "\"answer\"",
        ] {
            assert!(b.user_text.contains(key), "{key}");
        }
    }

    #[test]
    fn missing_endpoint_description() {
        let mut q = inst("x", TaskId::T1, "C", SplitName::Test);
        q.endpoint = "unknown".into();
        assert!(matches!(
            render_prompt(&q, Variant::Plain, &assets(), &[]),
            Err(CoreError::MissingAsset(_))
        ));
    }

    #[test]
    fn rendering_is_pure() {
        let a = assets();
        let q = inst("x", TaskId::T2, "Oc1ccccc1", SplitName::Test);
        assert_eq!(
            render_prompt(&q, Variant::Plain, &a, &[]).unwrap(),
            render_prompt(&q, Variant::Plain, &a, &[]).unwrap()
        );
    }

    #[test]
    fn icl_retrieval() {
        let a = assets();
        let q = inst("q", TaskId::T1, "Oc1ccccc1", SplitName::Test);
        assert!(select_icl_examples(&q, &[], 4, &a).unwrap().is_empty());

        let smiles = [
            "CCCCCC",
            "CCO",
            "Nc1ccccc1",
            "Oc1ccccc1",
            "Clc1ccccc1",
            "CC(=O)O",
            "c1ccncc1",
            "CCN",
            "Oc1ccccc1C",
            "OCc1ccccc1",
        ];
        let mut pool: Vec<QAInstance> = smiles
            .iter()
            .enumerate()
            .map(|(i, s)| inst(&format!("p{i}"), TaskId::T1, s, SplitName::Train))
            .collect();
        pool.push(inst(
            "other-task",
            TaskId::T2,
            "Oc1ccccc1",
            SplitName::Train,
        ));
        pool.push(inst("test-side", TaskId::T1, "Oc1ccccc1", SplitName::Test));
        let index = IclIndex::new(&pool);
        let top = index.nearest(&q, 4);
        assert_eq!(top.len(), 4);
        assert_eq!(top[0].id, "p3");
        assert!(top
            .iter()
            .all(|i| i.task == TaskId::T1 && i.split == SplitName::Train));
        let shots = select_icl_examples(&q, &pool, 4, &a).unwrap();
        assert_eq!(shots.len(), 4);
        assert_eq!(shots[0].answer, r#"{"answer":"N2"}"#);
        let b = render_prompt(&q, Variant::FourShot, &a, &shots).unwrap();
        assert_eq!(b.messages().len(), 1 + 2 * 4 + 1);
        let plain = render_prompt(&q, Variant::Plain, &a, &shots).unwrap();
        assert!(plain.shot_examples.is_empty());
    }
}
