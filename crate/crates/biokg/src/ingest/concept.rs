//! Concept keys and their canonicalizers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::registry::KeyRegistry;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConceptKind {
    EcNumber,
    CompoundName,
    Taxon,
    Other(String),
}

impl ConceptKind {
    pub fn canonicalize(&self, raw: &str) -> Result<String> {
        match self {
            ConceptKind::EcNumber => normalize_ec(raw),
            ConceptKind::CompoundName => {
                let out = collapse_whitespace(&raw.to_lowercase());
                if out.is_empty() {
                    return Err(self.invalid(raw));
                }
                Ok(out)
            }
            ConceptKind::Taxon => {
                let t = raw.trim();
                if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(self.invalid(raw));
                }
                Ok(t.to_string())
            }
            ConceptKind::Other(_) => {
                let out = collapse_whitespace(raw);
                if out.is_empty() {
                    return Err(self.invalid(raw));
                }
                Ok(out)
            }
        }
    }

    fn invalid(&self, raw: &str) -> Error {
        Error::InvalidConcept {
            kind: self.to_string(),
            value: raw.to_string(),
        }
    }
}

impl fmt::Display for ConceptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConceptKind::EcNumber => f.write_str("ec_number"),
            ConceptKind::CompoundName => f.write_str("compound_name"),
            ConceptKind::Taxon => f.write_str("taxon"),
            ConceptKind::Other(name) => write!(f, "other:{name}"),
        }
    }
}

impl FromStr for ConceptKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ec_number" => Ok(ConceptKind::EcNumber),
            "compound_name" => Ok(ConceptKind::CompoundName),
            "taxon" => Ok(ConceptKind::Taxon),
            other => match other.strip_prefix("other:") {
                Some(name) if KeyRegistry::is_normalized(name) => {
                    Ok(ConceptKind::Other(name.to_string()))
                }
                _ => Err(format!("unknown concept kind `{other}`")),
            },
        }
    }
}

impl Serialize for ConceptKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConceptKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// A `(kind, canonical value)` pair bridging entities across collections.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConceptKey {
    pub kind: ConceptKind,
    pub canonical: String,
}

impl ConceptKey {
    pub fn new(kind: ConceptKind, raw: &str) -> Result<Self> {
        let canonical = kind.canonicalize(raw)?;
        Ok(ConceptKey { kind, canonical })
    }
}

fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Canonicalizes an EC number to four dot-separated fields.
///
/// Accepted input: surrounding whitespace, any number of trailing `;`, an
/// optional `EC`/`ec` prefix followed by optional whitespace and an optional
/// `:`. Each field must be a positive integer or `-`. Leading zeros are
/// dropped. The output has no prefix.
pub fn normalize_ec(raw: &str) -> Result<String> {
    let invalid = || Error::InvalidEc(raw.to_string());
    let mut s = raw.trim();
    while let Some(rest) = s.strip_suffix(';') {
        s = rest.trim_end();
    }
    if s.get(..2).is_some_and(|p| p.eq_ignore_ascii_case("ec")) {
        s = s[2..].trim_start();
        if let Some(rest) = s.strip_prefix(':') {
            s = rest.trim_start();
        }
    }
    let fields: Vec<&str> = s.split('.').collect();
    if fields.len() != 4 {
        return Err(invalid());
    }
    let mut out = Vec::with_capacity(4);
    for field in fields {
        if field == "-" {
            out.push("-".to_string());
            continue;
        }
        if field.is_empty() || !field.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        match field.parse::<u64>() {
            Ok(n) if n > 0 => out.push(n.to_string()),
            _ => return Err(invalid()),
        }
    }
    Ok(out.join("."))
}
