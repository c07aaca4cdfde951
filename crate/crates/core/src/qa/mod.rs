//! Benchmark instances, prompt rendering and answer parsing.

mod answer;
mod assets;
mod instance;
mod prompt;

pub use answer::{parse_model_answer, CotSteps, ParsedAnswer};
pub use assets::{ContextAssets, TEMPLATE_NAMES};
pub use instance::{
    build_instances, classify_step_mode, GenerationMode, QAInstance, StepMode, TaskId,
};
pub use prompt::{
    answer_json, render_prompt, render_shots, select_icl_examples, IclIndex, PromptBundle,
    ShotExample, Variant,
};
