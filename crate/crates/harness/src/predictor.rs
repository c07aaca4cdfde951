use std::collections::HashMap;
use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::Duration;

use serde_json::json;
use thiserror::Error;
use toxcliff_core::qa::{answer_json, GenerationMode, PromptBundle, QAInstance, TaskId, Variant};
use wait_timeout::ChildExt;

use crate::config::{CommandConfig, HarnessConfig, PredictorConfig};
use crate::error::{HarnessError, Result};

#[derive(Debug, Error)]
#[error("{0}")]
pub struct PredictorError(pub String);

/// A model seen as a black box: rendered prompt in, raw text out.
pub trait Predictor: Send + Sync {
    fn name(&self) -> &str;

    fn answer(&self, prompt: &PromptBundle) -> std::result::Result<String, PredictorError>;

    /// Attempts per request, including the first.
    fn max_attempts(&self) -> u32 {
        1
    }

    /// Delay before the first retry; doubled on each further retry.
    fn backoff(&self) -> Duration {
        Duration::ZERO
    }
}

/// Canned answers keyed by instance id.
pub struct TablePredictor {
    name: String,
    answers: HashMap<String, String>,
}

impl Predictor for TablePredictor {
    fn name(&self) -> &str {
        &self.name
    }

    fn answer(&self, prompt: &PromptBundle) -> std::result::Result<String, PredictorError> {
        self.answers
            .get(&prompt.instance_id)
            .cloned()
            .ok_or_else(|| PredictorError(format!("unknown instance {}", prompt.instance_id)))
    }
}

fn by_pair(instances: &[QAInstance]) -> HashMap<(&str, TaskId), &QAInstance> {
    instances
        .iter()
        .map(|i| ((i.pair_id.as_str(), i.task), i))
        .collect()
}

/// Gold answers in the requested JSON shape. The step-wise variant also
/// fills the intermediate fragment fields from the pair's other tasks.
pub fn oracle(instances: &[QAInstance], variant: Variant) -> TablePredictor {
    let index = by_pair(instances);
    let answers = instances
        .iter()
        .map(|i| {
            let text = if variant == Variant::Cot && i.task == TaskId::T3 {
                let gold_of = |t| index.get(&(i.pair_id.as_str(), t)).map(|x| x.gold.as_str());
                json!({
                    "step1_only_toxic_safe_fragments": gold_of(TaskId::T1).unwrap_or(""),
                    "step1_reasoning": "fragments absent from the non-toxic analog",
                    "step2_only_nontoxic_safe_fragments": gold_of(TaskId::T2).unwrap_or(""),
                    "step2_reasoning": "replacement fragments",
                    "step3_reasoning": "reassembled molecule",
                    "answer": i.gold,
                })
                .to_string()
            } else {
                answer_json(&i.gold)
            };
            (i.id.clone(), text)
        })
        .collect();
    TablePredictor {
        name: "oracle".into(),
        answers,
    }
}

/// Restates the input: the toxic molecule's fragments for T1, the given
/// toxic-only fragments for T2 and the toxic molecule itself for T3.
pub fn echo(instances: &[QAInstance]) -> TablePredictor {
    let answers = instances
        .iter()
        .map(|i| {
            let a = match i.task {
                TaskId::T1 => i.toxic_safe.as_str().to_string(),
                TaskId::T2 => i.given_toxic_fragments.clone().unwrap_or_default(),
                TaskId::T3 => match i.generation_mode.unwrap_or_default() {
                    GenerationMode::Smiles => i.toxic_smiles.to_string(),
                    GenerationMode::Safe => i.toxic_safe.as_str().to_string(),
                },
            };
            (i.id.clone(), answer_json(&a))
        })
        .collect();
    TablePredictor {
        name: "echo".into(),
        answers,
    }
}

pub struct FixedPredictor(pub String);

impl Predictor for FixedPredictor {
    fn name(&self) -> &str {
        "fixed"
    }

    fn answer(&self, _: &PromptBundle) -> std::result::Result<String, PredictorError> {
        Ok(self.0.clone())
    }
}

/// Runs an external program once per request.
pub struct CommandPredictor {
    cfg: CommandConfig,
    seed: u64,
}

impl CommandPredictor {
    pub fn new(cfg: CommandConfig, seed: u64) -> Result<Self> {
        if let Some(var) = &cfg.api_key_env {
            if std::env::var_os(var).is_none() {
                return Err(HarnessError::Config(format!(
                    "environment variable {var} is not set"
                )));
            }
        }
        Ok(CommandPredictor { cfg, seed })
    }

    fn request(&self, prompt: &PromptBundle) -> String {
        let messages: Vec<_> = prompt
            .messages()
            .into_iter()
            .map(|(role, content)| json!({ "role": role, "content": content }))
            .collect();
        json!({
            "instance_id": prompt.instance_id,
            "messages": messages,
            "temperature": self.cfg.temperature,
            "top_p": self.cfg.top_p,
            "max_tokens": self.cfg.max_tokens,
            "seed": self.seed,
            "api_key_env": self.cfg.api_key_env,
        })
        .to_string()
    }
}

impl Predictor for CommandPredictor {
    fn name(&self) -> &str {
        &self.cfg.program
    }

    fn answer(&self, prompt: &PromptBundle) -> std::result::Result<String, PredictorError> {
        let err = |m: String| PredictorError(m);
        let mut child = Command::new(&self.cfg.program)
            .args(&self.cfg.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| err(format!("cannot start {}: {e}", self.cfg.program)))?;
        let request = self.request(prompt);
        let mut stdin = child.stdin.take().expect("piped stdin");
        let writer = std::thread::spawn(move || stdin.write_all(request.as_bytes()));
        let mut stdout = child.stdout.take().expect("piped stdout");
        let mut stderr = child.stderr.take().expect("piped stderr");
        let reader = std::thread::spawn(move || {
            let mut s = String::new();
            stdout.read_to_string(&mut s).map(|_| s)
        });
        let err_reader = std::thread::spawn(move || {
            let mut s = String::new();
            let _ = stderr.read_to_string(&mut s);
            s
        });
        let status = match child
            .wait_timeout(Duration::from_secs(self.cfg.timeout_secs))
            .map_err(|e| err(e.to_string()))?
        {
            Some(s) => s,
            None => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(err(format!("timed out after {}s", self.cfg.timeout_secs)));
            }
        };
        let _ = writer.join();
        let out = reader
            .join()
            .map_err(|_| err("reader thread panicked".into()))?
            .map_err(|e| err(e.to_string()))?;
        if !status.success() {
            let stderr = err_reader.join().unwrap_or_default();
            return Err(err(format!("exit {status}: {}", stderr.trim())));
        }
        Ok(out)
    }

    fn max_attempts(&self) -> u32 {
        self.cfg.max_attempts
    }

    fn backoff(&self) -> Duration {
        Duration::from_millis(self.cfg.backoff_ms)
    }
}

pub fn build_predictor(cfg: &HarnessConfig, instances: &[QAInstance]) -> Result<Box<dyn Predictor>> {
    Ok(match &cfg.predictor {
        PredictorConfig::Oracle => Box::new(oracle(instances, cfg.variant)),
        PredictorConfig::Echo => Box::new(echo(instances)),
        PredictorConfig::Fixed { text } => Box::new(FixedPredictor(text.clone())),
        PredictorConfig::Command(c) => Box::new(CommandPredictor::new(c.clone(), cfg.seed)?),
    })
}
