use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::prompt::Variant;
use crate::error::{CoreError, Result};

/// Intermediate fields requested by the step-wise prompt.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CotSteps {
    pub step1_only_toxic_safe_fragments: Option<String>,
    pub step1_reasoning: Option<String>,
    pub step2_only_nontoxic_safe_fragments: Option<String>,
    pub step2_reasoning: Option<String>,
    pub step3_reasoning: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedAnswer {
    pub answer: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<CotSteps>,
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn from_object(obj: &Map<String, Value>, variant: Variant) -> Option<ParsedAnswer> {
    let answer = scalar_text(obj.get("answer")?)?;
    let field = |k: &str| obj.get(k).and_then(scalar_text);
    let steps = (variant == Variant::Cot).then(|| CotSteps {
        step1_only_toxic_safe_fragments: field("step1_only_toxic_safe_fragments"),
        step1_reasoning: field("step1_reasoning"),
        step2_only_nontoxic_safe_fragments: field("step2_only_nontoxic_safe_fragments"),
        step2_reasoning: field("step2_reasoning"),
        step3_reasoning: field("step3_reasoning"),
    });
    Some(ParsedAnswer { answer, steps })
}

fn try_json(text: &str, variant: Variant) -> Option<ParsedAnswer> {
    match serde_json::from_str::<Value>(text.trim()).ok()? {
        Value::Object(obj) => from_object(&obj, variant),
        _ => None,
    }
}

/// Bodies of ``` fenced blocks, with an optional language tag removed.
fn fenced_blocks(raw: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = raw;
    while let Some(start) = rest.find("```") {
        let after = &rest[start + 3..];
        let Some(end) = after.find("```") else {
            break;
        };
        let body = &after[..end];
        let body = match body.find('\n') {
            Some(nl) if !body[..nl].trim_start().starts_with('{') => &body[nl + 1..],
            _ => body,
        };
        out.push(body);
        rest = &after[end + 3..];
    }
    out
}

/// Every brace-balanced `{...}` span, ignoring braces inside JSON strings.
fn balanced_spans(raw: &str) -> Vec<&str> {
    let bytes = raw.as_bytes();
    let mut spans = Vec::new();
    for (start, &b) in bytes.iter().enumerate() {
        if b != b'{' {
            continue;
        }
        let (mut depth, mut in_str, mut escaped) = (0usize, false, false);
        for (off, &c) in bytes[start..].iter().enumerate() {
            if in_str {
                match c {
                    _ if escaped => escaped = false,
                    b'\\' => escaped = true,
                    b'"' => in_str = false,
                    _ => {}
                }
                continue;
            }
            match c {
                b'"' => in_str = true,
                b'{' => depth += 1,
                b'}' => {
                    depth -= 1;
                    if depth == 0 {
                        spans.push(&raw[start..start + off + 1]);
                        break;
                    }
                }
                _ => {}
            }
        }
    }
    spans
}

/// Recovers the `answer` value from a model reply: the whole reply as JSON,
/// then fenced code blocks, then the largest brace-balanced span that parses.
pub fn parse_model_answer(raw: &str, variant: Variant) -> Result<ParsedAnswer> {
    if let Some(a) = try_json(raw, variant) {
        return Ok(a);
    }
    if let Some(a) = fenced_blocks(raw)
        .into_iter()
        .find_map(|b| try_json(b, variant))
    {
        return Ok(a);
    }
    let mut spans = balanced_spans(raw);
    spans.sort_by(|a, b| b.len().cmp(&a.len()));
    spans
        .into_iter()
        .find_map(|s| try_json(s, variant))
        .ok_or(CoreError::NoAnswer)
}
