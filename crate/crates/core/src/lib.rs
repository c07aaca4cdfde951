//! Toxicity-cliff mining, fragment-editing QA construction, scoring and
//! outcome analysis.

pub mod analysis;
pub mod dataset;
pub mod error;
pub mod metrics;
pub mod miner;
pub mod qa;

pub use error::{CoreError, Result};
