use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{CoreError, Result};

/// Template file stems, each shipped as `templates/<stem>.txt`.
pub const TEMPLATE_NAMES: [&str; 10] = [
    "task1_system",
    "task1_question",
    "task2_system",
    "task2_question",
    "task3_smiles_system",
    "task3_smiles_question",
    "task3_safe_system",
    "task3_safe_question",
    "task3_cot_system",
    "task3_cot_question",
];

/// Shared context blocks, per-task templates and endpoint descriptions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContextAssets {
    pub safe_explanation: String,
    pub pair_context: String,
    pub preserve_property: String,
    pub templates: BTreeMap<String, String>,
    pub endpoint_descriptions: BTreeMap<String, String>,
}

macro_rules! builtin {
    ($($name:literal),*) => {
        [$(($name, include_str!(concat!("../../assets/templates/", $name, ".txt")))),*]
    };
}

impl ContextAssets {
    /// Built-in blocks and templates with no endpoint descriptions.
    pub fn builtin() -> Self {
        let templates = builtin!(
            "task1_system",
            "task1_question",
            "task2_system",
            "task2_question",
            "task3_smiles_system",
            "task3_smiles_question",
            "task3_safe_system",
            "task3_safe_question",
            "task3_cot_system",
            "task3_cot_question"
        );
        ContextAssets {
            safe_explanation: tidy(include_str!("../../assets/safe_explanation.txt")),
            pair_context: tidy(include_str!("../../assets/pair_context.txt")),
            preserve_property: tidy(include_str!("../../assets/preserve_property.txt")),
            templates: templates
                .iter()
                .map(|(k, v)| (k.to_string(), tidy(v)))
                .collect(),
            endpoint_descriptions: BTreeMap::new(),
        }
    }

    /// Built-in assets overridden by whatever exists under `dir`: the three
    /// block files, `templates/<stem>.txt`, and `endpoints/<endpoint>.txt`.
    pub fn load(dir: &Path) -> Result<Self> {
        let mut a = Self::builtin();
        let read = |p: &Path| -> Result<Option<String>> {
            if p.is_file() {
                Ok(Some(tidy(&std::fs::read_to_string(p)?)))
            } else {
                Ok(None)
            }
        };
        for (name, slot) in [
            ("safe_explanation", &mut a.safe_explanation),
            ("pair_context", &mut a.pair_context),
            ("preserve_property", &mut a.preserve_property),
        ] {
            if let Some(text) = read(&dir.join(format!("{name}.txt")))? {
                *slot = text;
            }
        }
        for name in TEMPLATE_NAMES {
            if let Some(text) = read(&dir.join("templates").join(format!("{name}.txt")))? {
                a.templates.insert(name.to_string(), text);
            }
        }
        a.load_endpoints(&dir.join("endpoints"))?;
        Ok(a)
    }

    /// Reads every `<endpoint>.txt` in `dir`.
    pub fn load_endpoints(&mut self, dir: &Path) -> Result<()> {
        if !dir.is_dir() {
            return Ok(());
        }
        let mut entries: Vec<_> = std::fs::read_dir(dir)?.collect::<std::io::Result<_>>()?;
        entries.sort_by_key(|e| e.file_name());
        for e in entries {
            let path = e.path();
            if path.extension().and_then(|x| x.to_str()) != Some("txt") {
                continue;
            }
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                let text = tidy(&std::fs::read_to_string(&path)?);
                self.endpoint_descriptions.insert(stem.to_string(), text);
            }
        }
        Ok(())
    }

    pub fn template(&self, name: &str) -> Result<&str> {
        self.templates
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| CoreError::MissingAsset(format!("template {name}")))
    }

    pub fn endpoint_description(&self, endpoint: &str) -> Result<&str> {
        self.endpoint_descriptions
            .get(endpoint)
            .map(String::as_str)
            .ok_or_else(|| CoreError::MissingAsset(format!("endpoint description for {endpoint}")))
    }
}

fn tidy(text: &str) -> String {
    text.trim_end().to_string()
}
