use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toxcliff_core::metrics::MetricConfig;
use toxcliff_core::miner::MinerConfig;
use toxcliff_core::qa::{GenerationMode, Variant};

use crate::error::{HarnessError, Result};

/// Which split is answered during evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalSplit {
    #[default]
    Test,
    All,
}

/// External model process. The request goes to stdin as JSON and the raw
/// answer is read from stdout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CommandConfig {
    pub program: String,
    pub args: Vec<String>,
    /// Name of the environment variable holding the credential. The value
    /// itself never appears in the config.
    pub api_key_env: Option<String>,
    pub temperature: f64,
    pub top_p: Option<f64>,
    pub max_tokens: Option<u32>,
    pub timeout_secs: u64,
    pub max_attempts: u32,
    /// First retry delay; doubles on every further attempt.
    pub backoff_ms: u64,
}

impl Default for CommandConfig {
    fn default() -> Self {
        CommandConfig {
            program: String::new(),
            args: Vec::new(),
            api_key_env: None,
            temperature: 0.7,
            top_p: None,
            max_tokens: None,
            timeout_secs: 120,
            max_attempts: 3,
            backoff_ms: 500,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PredictorConfig {
    /// Answers with the gold JSON.
    #[default]
    Oracle,
    /// Returns the toxic molecule (T3) or its toxic-only fragments (T1, T2).
    Echo,
    Fixed { text: String },
    Command(CommandConfig),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    /// `alert_smiles,endpoint,source` file for the alert overlap study.
    pub alerts: Option<PathBuf>,
    pub top_k: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            alerts: None,
            top_k: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessConfig {
    pub miner: MinerConfig,
    pub metrics: MetricConfig,
    pub variant: Variant,
    pub generation_mode: GenerationMode,
    pub runs: u32,
    /// 0, or 4 for the retrieval-augmented variant.
    pub shots: usize,
    pub eval_split: EvalSplit,
    /// Maximum concurrent predictor calls.
    pub concurrency: usize,
    /// Recorded in run metadata. Every stage is deterministic, so the seed
    /// only feeds predictors that sample.
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Overrides for the built-in context blocks, templates and endpoint
    /// descriptions.
    pub assets_dir: Option<PathBuf>,
    pub predictor: PredictorConfig,
    pub analysis: AnalysisConfig,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            miner: MinerConfig::default(),
            metrics: MetricConfig::default(),
            variant: Variant::Plain,
            generation_mode: GenerationMode::Safe,
            runs: 3,
            shots: 0,
            eval_split: EvalSplit::Test,
            concurrency: 4,
            seed: 0,
            output_dir: PathBuf::from("out"),
            assets_dir: None,
            predictor: PredictorConfig::Oracle,
            analysis: AnalysisConfig::default(),
        }
    }
}

impl HarnessConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: HarnessConfig =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(crate::io::io_err(path))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        self.miner.validate()?;
        self.metrics.property.validate()?;
        if self.runs == 0 {
            return bad("runs must be at least 1");
        }
        if self.shots != 0 && self.shots != 4 {
            return bad("shots must be 0 or 4");
        }
        if (self.variant == Variant::FourShot) != (self.shots == 4) {
            return bad("the four_shot variant and shots = 4 go together");
        }
        if self.variant == Variant::Cot && self.generation_mode == GenerationMode::Smiles {
            return bad("the step-wise variant needs generation_mode = \"safe\"");
        }
        if self.concurrency == 0 {
            return bad("concurrency must be at least 1");
        }
        if let PredictorConfig::Command(c) = &self.predictor {
            if c.program.is_empty() {
                return bad("command predictor needs a program");
            }
            if c.max_attempts == 0 {
                return bad("max_attempts must be at least 1");
            }
        }
        Ok(())
    }
}
