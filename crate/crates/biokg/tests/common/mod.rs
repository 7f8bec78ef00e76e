//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use biokg::Pipeline;
use serde_json::Value;

pub const SOURCES: [(&str, &str); 3] = [
    ("compound.descriptor", "compounds.jsonl"),
    ("uniprot.descriptor", "uniprot.jsonl"),
    ("cazy.descriptor", "cazy.jsonl"),
];

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn workflow_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/trehalose.workflow")
}

pub fn manifest() -> Value {
    serde_json::from_str(&std::fs::read_to_string(fixture("manifest.json")).unwrap()).unwrap()
}

/// Raw fixture records, straight from the JSONL file.
pub fn raw_records(file: &str) -> Vec<BTreeMap<String, Value>> {
    std::fs::read_to_string(fixture(file))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

pub fn ingest_all(p: &mut Pipeline) {
    for (d, r) in SOURCES {
        p.ingest_file(&fixture(d), &fixture(r)).unwrap();
    }
    p.ingest_documents(&fixture("docs")).unwrap();
}

/// Ingested and linked fixture corpus, still in build mode.
pub fn linked() -> Pipeline {
    let mut p = Pipeline::new();
    ingest_all(&mut p);
    p.link().unwrap();
    p
}

/// String values of a raw field, whether it holds one value or a list.
pub fn strings(record: &BTreeMap<String, Value>, field: &str) -> Vec<String> {
    match record.get(field) {
        Some(Value::String(s)) => vec![s.clone()],
        Some(Value::Number(n)) => vec![n.to_string()],
        Some(Value::Array(items)) => items
            .iter()
            .filter_map(|v| match v {
                Value::String(s) => Some(s.clone()),
                Value::Number(n) => Some(n.to_string()),
                _ => None,
            })
            .collect(),
        _ => Vec::new(),
    }
}

/// Test-side EC reading, written independently of the library: strip
/// everything that is not a digit, dot or dash after removing an `ec`
/// prefix, then require four fields of digits (non-zero) or `-`.
pub fn oracle_ec(raw: &str) -> Option<String> {
    let lower = raw.to_ascii_lowercase();
    let body = lower.trim().trim_end_matches([';', ' ']).trim();
    let body = body.strip_prefix("ec").unwrap_or(body);
    let body: String = body
        .trim_start_matches(|c: char| c == ':' || c.is_whitespace())
        .to_string();
    let parts: Vec<&str> = body.split('.').collect();
    if parts.len() != 4 {
        return None;
    }
    let mut out = Vec::new();
    for p in parts {
        if p == "-" {
            out.push("-".to_string());
        } else if !p.is_empty() && p.chars().all(|c| c.is_ascii_digit()) {
            let n: u64 = p.parse().ok()?;
            if n == 0 {
                return None;
            }
            out.push(n.to_string());
        } else {
            return None;
        }
    }
    Some(out.join("."))
}
