//! Shared registry of normalized property keys.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// Keys the pipeline itself writes onto nodes and edges.
pub const BUILTIN_KEYS: &[&str] = &[
    "count",
    "doc_facts",
    "doc_id",
    "doc_title",
    "predicate",
    "segment_index",
    "segment_kind",
    "segments",
    "surface",
    "table",
    "text",
    "value",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KeyRegistry {
    keys: BTreeSet<String>,
}

impl Default for KeyRegistry {
    fn default() -> Self {
        KeyRegistry {
            keys: BUILTIN_KEYS.iter().map(|k| k.to_string()).collect(),
        }
    }
}

impl KeyRegistry {
    /// Lowercase snake-style: `[a-z][a-z0-9_]*`.
    pub fn is_normalized(key: &str) -> bool {
        let mut chars = key.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
            && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
    }

    /// Registers a key; returns false when it is not snake-style.
    pub fn register(&mut self, key: &str) -> bool {
        if !Self::is_normalized(key) {
            return false;
        }
        self.keys.insert(key.to_string());
        true
    }

    pub fn contains(&self, key: &str) -> bool {
        self.keys.contains(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.keys.iter().map(String::as_str)
    }

    pub fn extend(&mut self, other: &KeyRegistry) {
        self.keys.extend(other.keys.iter().cloned());
    }

    /// Maps a free-form header such as `Molecular weight` onto a snake-style
    /// candidate key (`molecular_weight`).
    pub fn snake_case(header: &str) -> String {
        let mut out = String::new();
        for c in header.trim().chars() {
            if c.is_alphanumeric() {
                out.extend(c.to_lowercase());
            } else if !out.ends_with('_') && !out.is_empty() {
                out.push('_');
            }
        }
        while out.ends_with('_') {
            out.pop();
        }
        out
    }
}
