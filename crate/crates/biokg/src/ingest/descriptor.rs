//! Declarative source descriptors.
//!
//! A descriptor is a TOML document mapping one raw record schema onto the
//! shared normalized keys:
//!
//! ```toml
//! source_name = "uniprot"
//! collection = "uniprot"
//! id_field = "Entry"
//! label_field = "Protein names"
//! synonym_fields = ["Gene names"]
//!
//! [field_map]
//! "Entry" = "accession"
//! "Protein names" = "protein_name"
//! "EC number" = "ec_number"
//!
//! [[concept_extractors]]
//! key = "ec_number"
//! kind = "ec_number"
//!
//! [[relation_fields]]
//! field = "Catalytic activity"
//! kind = "catalytic_activity"
//! target_collection = "compound"
//! resolve = "label"        # or "accession"
//! ```

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::concept::ConceptKind;
use crate::error::{Error, Result};
use crate::registry::KeyRegistry;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResolveBy {
    #[default]
    Label,
    Accession,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationField {
    pub field: String,
    pub kind: String,
    pub target_collection: String,
    #[serde(default)]
    pub resolve: ResolveBy,
    /// Source segment of target ids when resolving by accession; defaults
    /// to the target collection.
    #[serde(default)]
    pub target_source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptExtractor {
    pub key: String,
    pub kind: ConceptKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceDescriptor {
    pub source_name: String,
    pub collection: String,
    pub id_field: String,
    pub label_field: String,
    #[serde(default)]
    pub synonym_fields: Vec<String>,
    #[serde(default)]
    pub field_map: BTreeMap<String, String>,
    #[serde(default)]
    pub concept_extractors: Vec<ConceptExtractor>,
    #[serde(default)]
    pub relation_fields: Vec<RelationField>,
}

// Concept kinds are parsed by hand so that every bad kind is reported at
// once instead of failing on the first.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtractor {
    key: String,
    kind: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDescriptor {
    source_name: String,
    collection: String,
    id_field: String,
    label_field: String,
    #[serde(default)]
    synonym_fields: Vec<String>,
    #[serde(default)]
    field_map: BTreeMap<String, String>,
    #[serde(default)]
    concept_extractors: Vec<RawExtractor>,
    #[serde(default)]
    relation_fields: Vec<RelationField>,
}

fn is_id_part(s: &str) -> bool {
    !s.is_empty() && !s.contains(':') && !s.chars().any(char::is_whitespace)
}

impl SourceDescriptor {
    /// Parses and validates a descriptor, collecting every offending entry.
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawDescriptor =
            toml::from_str(text).map_err(|e| Error::Descriptor(vec![e.message().to_string()]))?;
        let mut offenders = Vec::new();

        for (what, value) in [
            ("source_name", &raw.source_name),
            ("collection", &raw.collection),
        ] {
            if !is_id_part(value) {
                offenders.push(format!(
                    "{what} `{value}` must be non-empty without `:` or whitespace"
                ));
            }
        }

        let mut targets: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (raw_key, norm) in &raw.field_map {
            if !KeyRegistry::is_normalized(norm) {
                offenders.push(format!(
                    "normalized key `{norm}` (from `{raw_key}`) is not snake_case"
                ));
            }
            targets.entry(norm).or_default().push(raw_key);
        }
        for (norm, raws) in &targets {
            if raws.len() > 1 {
                offenders.push(format!(
                    "raw keys {} all map to normalized key `{norm}`",
                    raws.iter()
                        .map(|r| format!("`{r}`"))
                        .collect::<Vec<_>>()
                        .join(", ")
                ));
            }
        }

        for (what, field) in [
            ("id_field", &raw.id_field),
            ("label_field", &raw.label_field),
        ] {
            if !raw.field_map.contains_key(field) && !KeyRegistry::is_normalized(field) {
                offenders.push(format!(
                    "{what} `{field}` is neither mapped in field_map nor a normalized key"
                ));
            }
        }

        let produced: BTreeSet<&str> = raw
            .field_map
            .values()
            .map(String::as_str)
            .chain(
                [&raw.id_field, &raw.label_field]
                    .into_iter()
                    .filter(|f| !raw.field_map.contains_key(*f))
                    .map(String::as_str),
            )
            .collect();

        let mut concept_extractors = Vec::new();
        for ex in &raw.concept_extractors {
            match ex.kind.parse::<ConceptKind>() {
                Ok(kind) => concept_extractors.push(ConceptExtractor {
                    key: ex.key.clone(),
                    kind,
                }),
                Err(msg) => offenders.push(msg),
            }
            if !produced.contains(ex.key.as_str()) {
                offenders.push(format!(
                    "concept extractor key `{}` is not a normalized key of this source",
                    ex.key
                ));
            }
        }

        for rel in &raw.relation_fields {
            if !KeyRegistry::is_normalized(&rel.kind) {
                offenders.push(format!("relation kind `{}` is not snake_case", rel.kind));
            }
            if !is_id_part(&rel.target_collection) {
                offenders.push(format!(
                    "relation target collection `{}` is invalid",
                    rel.target_collection
                ));
            }
        }

        if !offenders.is_empty() {
            return Err(Error::Descriptor(offenders));
        }
        Ok(SourceDescriptor {
            source_name: raw.source_name,
            collection: raw.collection,
            id_field: raw.id_field,
            label_field: raw.label_field,
            synonym_fields: raw.synonym_fields,
            field_map: raw.field_map,
            concept_extractors,
            relation_fields: raw.relation_fields,
        })
    }

    /// Normalized name of a raw key, if the key is kept.
    pub fn normalized_key<'a>(&'a self, raw_key: &'a str) -> Option<&'a str> {
        if let Some(norm) = self.field_map.get(raw_key) {
            return Some(norm);
        }
        if raw_key == self.id_field || raw_key == self.label_field {
            return Some(raw_key);
        }
        None
    }

    pub fn normalized_keys(&self) -> BTreeSet<&str> {
        let mut keys: BTreeSet<&str> = self.field_map.values().map(String::as_str).collect();
        for f in [&self.id_field, &self.label_field] {
            if let Some(k) = self.normalized_key(f) {
                keys.insert(k);
            }
        }
        keys
    }

    pub fn register_keys(&self, registry: &mut KeyRegistry) {
        for key in self.normalized_keys() {
            registry.register(key);
        }
    }
}

/// Parses a descriptor and registers its keys.
pub fn load_descriptor(text: &str, registry: &mut KeyRegistry) -> Result<SourceDescriptor> {
    let descriptor = SourceDescriptor::from_toml(text)?;
    descriptor.register_keys(registry);
    Ok(descriptor)
}
