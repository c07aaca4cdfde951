use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toxcliff_core::dataset::{Ingested, Reason, Rejection};
use toxcliff_core::miner::{mine, scaffold_split, CliffPair, Cuts, PropertyBounds, SplitName, SplitResult};
use toxcliff_core::qa::{
    build_instances, render_prompt, render_shots, ContextAssets, IclIndex, PromptBundle,
    QAInstance, Variant,
};

use crate::config::{EvalSplit, HarnessConfig};
use crate::error::{HarnessError, Result};
use crate::io::{read_json, read_jsonl, write_json, write_jsonl};

/// File names of every stage under the output directory.
#[derive(Clone, Debug)]
pub struct Layout {
    pub root: PathBuf,
}

impl Layout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Layout { root: root.into() }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn pairs(&self) -> PathBuf {
        self.path("pairs.jsonl")
    }

    pub fn rejections(&self) -> PathBuf {
        self.path("rejections.jsonl")
    }

    pub fn cuts(&self) -> PathBuf {
        self.path("cuts.json")
    }

    pub fn split(&self) -> PathBuf {
        self.path("split.json")
    }

    pub fn instances(&self) -> PathBuf {
        self.path("instances.jsonl")
    }

    pub fn prompts(&self) -> PathBuf {
        self.path("prompts.jsonl")
    }

    pub fn stage_counts(&self) -> PathBuf {
        self.path("stage_counts.json")
    }

    pub fn predictions(&self) -> PathBuf {
        self.path("predictions.jsonl")
    }

    pub fn analysis(&self) -> PathBuf {
        self.path("analysis.json")
    }

    pub fn run_meta(&self) -> PathBuf {
        self.path("run_meta.json")
    }
}

/// Counts after each stage; a stage that has not run yet is `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSummary {
    pub molecules: Option<usize>,
    pub rejected_rows: Option<usize>,
    pub endpoints: Option<usize>,
    pub candidates: Option<usize>,
    pub safe_converted: Option<usize>,
    pub post_structural: Option<usize>,
    pub post_property: Option<usize>,
    /// Pairs left once pairs without toxic-only fragments are dropped.
    pub usable_pairs: Option<usize>,
    pub train_pairs: Option<usize>,
    pub test_pairs: Option<usize>,
    pub instances: Option<usize>,
    pub prompts: Option<usize>,
}

impl StageSummary {
    /// Filter-stage counts in pipeline order.
    pub fn chain(&self) -> Vec<usize> {
        [
            self.candidates,
            self.safe_converted,
            self.post_structural,
            self.post_property,
            self.usable_pairs,
        ]
        .into_iter()
        .flatten()
        .collect()
    }
}

fn update_counts(layout: &Layout, f: impl FnOnce(&mut StageSummary)) -> Result<StageSummary> {
    let path = layout.stage_counts();
    let mut s: StageSummary = if path.exists() {
        read_json(&path)?
    } else {
        StageSummary::default()
    };
    f(&mut s);
    write_json(&path, &s)?;
    Ok(s)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SplitFile {
    pub train: Vec<String>,
    pub test: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CutsFile {
    pub cuts: Option<Cuts>,
    pub property_bounds: Option<PropertyBounds>,
}

/// Pairs whose toxic molecule has no fragment of its own cannot pose
/// Task 1 and are removed before the split.
pub fn drop_empty_toxic_only(pairs: Vec<CliffPair>) -> (Vec<CliffPair>, Vec<Rejection>) {
    let (kept, dropped): (Vec<_>, Vec<_>) = pairs
        .into_iter()
        .partition(|p| !p.fragments.toxic_only.is_empty());
    let rejected = dropped
        .into_iter()
        .map(|p| Rejection {
            reason: Reason::EmptyToxicOnly,
            subject: p.id.clone(),
            detail: "toxic molecule has no fragment absent from the non-toxic one".into(),
        })
        .collect();
    (kept, rejected)
}

/// Mines pairs, drops unusable ones and writes pairs, rejections, cuts and
/// counts.
pub fn mine_stage(cfg: &HarnessConfig, data: &Ingested, layout: &Layout) -> Result<Vec<CliffPair>> {
    let out = mine(&data.molecules, &cfg.miner);
    let (pairs, dropped) = drop_empty_toxic_only(out.pairs);
    let mut rejections = data.rejections.clone();
    rejections.extend(out.rejections);
    rejections.extend(dropped);
    write_jsonl(&layout.pairs(), &pairs)?;
    write_jsonl(&layout.rejections(), &rejections)?;
    write_json(
        &layout.cuts(),
        &CutsFile {
            cuts: out.cuts,
            property_bounds: out.property_bounds,
        },
    )?;
    let c = out.counts;
    update_counts(layout, |s| {
        s.molecules = Some(c.molecules);
        s.rejected_rows = Some(data.rejections.len());
        s.endpoints = Some(c.endpoints);
        s.candidates = Some(c.candidates);
        s.safe_converted = Some(c.safe_converted);
        s.post_structural = Some(c.post_structural);
        s.post_property = Some(c.post_property);
        s.usable_pairs = Some(pairs.len());
    })?;
    Ok(pairs)
}

pub fn split_stage(cfg: &HarnessConfig, pairs: &[CliffPair], layout: &Layout) -> Result<SplitResult> {
    let split = scaffold_split(pairs, &cfg.miner);
    let file = SplitFile {
        train: split.train.iter().map(|p| p.id.clone()).collect(),
        test: split.test.iter().map(|p| p.id.clone()).collect(),
    };
    write_json(&layout.split(), &file)?;
    update_counts(layout, |s| {
        s.train_pairs = Some(file.train.len());
        s.test_pairs = Some(file.test.len());
    })?;
    Ok(split)
}

/// Rebuilds the split from stored pairs and a stored assignment.
pub fn load_split(layout: &Layout) -> Result<SplitResult> {
    let pairs: Vec<CliffPair> = read_jsonl(&layout.pairs())?;
    let file: SplitFile = read_json(&layout.split())?;
    let mut by_id: BTreeMap<String, CliffPair> =
        pairs.into_iter().map(|p| (p.id.clone(), p)).collect();
    let mut take = |ids: &[String]| -> Result<Vec<CliffPair>> {
        ids.iter()
            .map(|id| {
                by_id
                    .remove(id)
                    .ok_or_else(|| HarnessError::Config(format!("split names unknown pair {id}")))
            })
            .collect()
    };
    Ok(SplitResult {
        train: take(&file.train)?,
        test: take(&file.test)?,
    })
}

/// Three instances per pair, train pairs first.
pub fn build_all_instances(cfg: &HarnessConfig, split: &SplitResult) -> Result<Vec<QAInstance>> {
    let mut out = Vec::with_capacity(3 * (split.train.len() + split.test.len()));
    for (side, pairs) in [(SplitName::Train, &split.train), (SplitName::Test, &split.test)] {
        for p in pairs.iter() {
            out.extend(build_instances(p, side, cfg.generation_mode)?);
        }
    }
    Ok(out)
}

pub fn build_stage(cfg: &HarnessConfig, split: &SplitResult, layout: &Layout) -> Result<Vec<QAInstance>> {
    let instances = build_all_instances(cfg, split)?;
    write_jsonl(&layout.instances(), &instances)?;
    update_counts(layout, |s| s.instances = Some(instances.len()))?;
    Ok(instances)
}

pub fn load_assets(cfg: &HarnessConfig) -> Result<ContextAssets> {
    Ok(match &cfg.assets_dir {
        Some(dir) => ContextAssets::load(dir)?,
        None => ContextAssets::builtin(),
    })
}

/// Instances answered during evaluation.
pub fn evaluation_set<'a>(cfg: &HarnessConfig, instances: &'a [QAInstance]) -> Vec<&'a QAInstance> {
    instances
        .iter()
        .filter(|i| cfg.eval_split == EvalSplit::All || i.split == SplitName::Test)
        .collect()
}

/// Prompts for the evaluation set. Shots, when requested, come from the
/// training instances.
pub fn render_all(
    cfg: &HarnessConfig,
    instances: &[QAInstance],
    assets: &ContextAssets,
) -> Result<Vec<PromptBundle>> {
    let index = IclIndex::new(instances);
    evaluation_set(cfg, instances)
        .into_iter()
        .map(|inst| {
            let shots = if cfg.variant == Variant::FourShot {
                render_shots(&index.nearest(inst, cfg.shots), assets)?
            } else {
                Vec::new()
            };
            Ok(render_prompt(inst, cfg.variant, assets, &shots)?)
        })
        .collect()
}

pub fn prompt_stage(
    cfg: &HarnessConfig,
    instances: &[QAInstance],
    assets: &ContextAssets,
    layout: &Layout,
) -> Result<Vec<PromptBundle>> {
    let prompts = render_all(cfg, instances, assets)?;
    write_jsonl(&layout.prompts(), &prompts)?;
    update_counts(layout, |s| s.prompts = Some(prompts.len()))?;
    Ok(prompts)
}

#[derive(Clone, Debug)]
pub struct BenchmarkArtifacts {
    pub pairs: Vec<CliffPair>,
    pub split: SplitResult,
    pub instances: Vec<QAInstance>,
    pub prompts: Vec<PromptBundle>,
    pub summary: StageSummary,
}

#[derive(Serialize)]
struct RunMeta<'a> {
    seed: u64,
    config: &'a HarnessConfig,
}

/// Runs every stage in order, writing each to `cfg.output_dir` before the
/// next starts.
pub fn run_pipeline(cfg: &HarnessConfig, data: &Ingested) -> Result<BenchmarkArtifacts> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.output_dir);
    if layout.stage_counts().exists() {
        std::fs::remove_file(layout.stage_counts()).map_err(crate::io::io_err(&layout.stage_counts()))?;
    }
    write_json(&layout.run_meta(), &RunMeta { seed: cfg.seed, config: cfg })?;
    let assets = load_assets(cfg)?;
    let pairs = mine_stage(cfg, data, &layout)?;
    let split = split_stage(cfg, &pairs, &layout)?;
    let instances = build_stage(cfg, &split, &layout)?;
    let prompts = prompt_stage(cfg, &instances, &assets, &layout)?;
    let summary = read_json(&layout.stage_counts())?;
    Ok(BenchmarkArtifacts {
        pairs,
        split,
        instances,
        prompts,
        summary,
    })
}

pub fn output_layout(cfg: &HarnessConfig) -> Layout {
    Layout::new(&cfg.output_dir)
}

pub fn ensure_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(crate::io::io_err(path))
}
