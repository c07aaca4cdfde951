use std::collections::{HashMap, HashSet};
use std::fs::OpenOptions;
use std::io::BufWriter;
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;

use serde::{Deserialize, Serialize};
use toxcliff_core::metrics::{ScoredRecord, Scores};
use toxcliff_core::qa::{ParsedAnswer, PromptBundle, QAInstance, StepMode, TaskId};

use crate::config::HarnessConfig;
use crate::error::{HarnessError, Result};
use crate::io::{append_jsonl, io_err, write_jsonl};
use crate::predictor::Predictor;
use crate::score::score_answer;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub instance_id: String,
    pub pair_id: String,
    pub task: TaskId,
    pub step_mode: StepMode,
    pub endpoint: String,
    /// 1-based.
    pub run: u32,
    /// Model output exactly as returned; empty when every attempt failed.
    pub raw_output: String,
    /// Last predictor error when every attempt failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// `None` when no answer could be recovered.
    pub parsed: Option<ParsedAnswer>,
    pub scores: Scores,
}

impl PredictionRecord {
    pub fn key(&self) -> (String, u32) {
        (self.instance_id.clone(), self.run)
    }

    pub fn scored(&self) -> ScoredRecord {
        ScoredRecord {
            instance_id: self.instance_id.clone(),
            pair_id: self.pair_id.clone(),
            task: self.task,
            step_mode: self.step_mode,
            endpoint: self.endpoint.clone(),
            run: self.run,
            scores: self.scores,
        }
    }
}

/// Records already on disk. A torn final line, left by a crash mid-write,
/// is discarded and the file rewritten without it.
pub fn load_completed(path: &Path) -> Result<Vec<PredictionRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    let mut torn = false;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    for (i, line) in lines.iter().enumerate() {
        match serde_json::from_str(line) {
            Ok(r) => out.push(r),
            Err(e) if i + 1 == lines.len() => {
                log::warn!("discarding torn last line of {}: {e}", path.display());
                torn = true;
            }
            Err(source) => {
                return Err(HarnessError::Json {
                    path: path.display().to_string(),
                    source,
                })
            }
        }
    }
    if torn || (!text.is_empty() && !text.ends_with('\n')) {
        write_jsonl(path, &out)?;
    }
    Ok(out)
}

fn call_with_retry(predictor: &dyn Predictor, prompt: &PromptBundle) -> (String, Option<String>) {
    let attempts = predictor.max_attempts().max(1);
    let mut last = String::new();
    for attempt in 0..attempts {
        match predictor.answer(prompt) {
            Ok(text) => return (text, None),
            Err(e) => {
                log::warn!(
                    "{}: attempt {}/{attempts} failed: {e}",
                    prompt.instance_id,
                    attempt + 1
                );
                last = e.to_string();
                if attempt + 1 < attempts {
                    std::thread::sleep(predictor.backoff() * 2u32.pow(attempt));
                }
            }
        }
    }
    (String::new(), Some(last))
}

fn answer_one(
    cfg: &HarnessConfig,
    inst: &QAInstance,
    prompt: &PromptBundle,
    run: u32,
    predictor: &dyn Predictor,
) -> Result<PredictionRecord> {
    let (raw, error) = call_with_retry(predictor, prompt);
    let raw_ref = error.is_none().then_some(raw.as_str());
    let (parsed, scores) = score_answer(inst, raw_ref, cfg.variant, &cfg.metrics)?;
    Ok(PredictionRecord {
        instance_id: inst.id.clone(),
        pair_id: inst.pair_id.clone(),
        task: inst.task,
        step_mode: inst.step_mode,
        endpoint: inst.endpoint.clone(),
        run,
        raw_output: raw,
        error,
        parsed,
        scores,
    })
}

/// Answers every prompt once per run. With a `sink`, records are appended
/// as they complete and (instance, run) keys already present are skipped,
/// so an interrupted evaluation resumes where it stopped. At most
/// `cfg.concurrency` predictor calls are in flight; one thread writes.
pub fn run_evaluation(
    cfg: &HarnessConfig,
    instances: &[QAInstance],
    prompts: &[PromptBundle],
    predictor: &dyn Predictor,
    sink: Option<&Path>,
) -> Result<Vec<PredictionRecord>> {
    let by_id: HashMap<&str, &QAInstance> = instances.iter().map(|i| (i.id.as_str(), i)).collect();
    let mut records = match sink {
        Some(p) => load_completed(p)?,
        None => Vec::new(),
    };
    let done: HashSet<(String, u32)> = records.iter().map(PredictionRecord::key).collect();
    let mut jobs = Vec::new();
    for run in 1..=cfg.runs {
        for p in prompts {
            let inst = by_id
                .get(p.instance_id.as_str())
                .ok_or_else(|| HarnessError::Config(format!("prompt for unknown instance {}", p.instance_id)))?;
            if !done.contains(&(p.instance_id.clone(), run)) {
                jobs.push((run, *inst, p));
            }
        }
    }
    if !records.is_empty() {
        log::info!("resuming: {} records on disk, {} to go", records.len(), jobs.len());
    }

    let mut writer = match sink {
        Some(p) => {
            if let Some(dir) = p.parent() {
                std::fs::create_dir_all(dir).map_err(io_err(dir))?;
            }
            let f = OpenOptions::new().create(true).append(true).open(p).map_err(io_err(p))?;
            Some((p, BufWriter::new(f)))
        }
        None => None,
    };

    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let workers = cfg.concurrency.min(jobs.len()).max(1);
    let mut first_err = None;
    std::thread::scope(|s| {
        let (tx, rx) = mpsc::sync_channel::<Result<PredictionRecord>>(workers * 2);
        for _ in 0..workers {
            let tx = tx.clone();
            let (jobs, next, stop) = (&jobs, &next, &stop);
            s.spawn(move || loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some((run, inst, prompt)) = jobs.get(i) else {
                    break;
                };
                if tx.send(answer_one(cfg, inst, prompt, *run, predictor)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for rec in rx {
            match rec {
                Ok(r) => {
                    if let Some((path, w)) = writer.as_mut() {
                        if let Err(e) = append_jsonl(w, &r) {
                            first_err.get_or_insert(io_err(path)(e));
                            stop.store(true, Ordering::Relaxed);
                        }
                    }
                    records.push(r);
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                    stop.store(true, Ordering::Relaxed);
                }
            }
        }
    });
    if let Some(e) = first_err {
        return Err(e);
    }
    records.sort_by(|a, b| (a.run, &a.instance_id).cmp(&(b.run, &b.instance_id)));
    Ok(records)
}
