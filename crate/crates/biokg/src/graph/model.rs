//! Property-graph elements: identifiers, nodes, edges and their provenance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use ordered_float::OrderedFloat;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const HAS_CONCEPT: &str = "has_concept";
pub const MENTIONED_IN: &str = "mentioned_in";
pub const COOCCURS_WITH: &str = "cooccurs_with";
pub const FACT: &str = "fact";
pub const SHARES_FACT: &str = "shares_fact";

pub const CONCEPT_COLLECTION: &str = "concept";
pub const DOCUMENT_COLLECTION: &str = "document";

/// Stable node identifier.
///
/// Entities use `<source>:<collection>:<accession>`, concepts
/// `concept:<kind>:<canonical>` and document segments `doc:<docid>:<index>`.
/// An id has at least two `:` separators and never contains whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn parse(value: impl Into<String>) -> Result<Self> {
        let value = value.into();
        let separators = value.matches(':').count();
        if value.is_empty()
            || separators < 2
            || value.chars().any(char::is_whitespace)
            || value.split(':').any(str::is_empty)
        {
            return Err(Error::MalformedNodeId(value));
        }
        Ok(NodeId(value))
    }

    /// Builds an id from parts, replacing whitespace inside each part by `_`.
    pub fn from_parts(head: &str, middle: &str, tail: &str) -> Result<Self> {
        Self::parse(format!(
            "{}:{}:{}",
            id_component(head),
            id_component(middle),
            id_component(tail)
        ))
    }

    pub fn entity(source: &str, collection: &str, accession: &str) -> Result<Self> {
        Self::from_parts(source, collection, accession)
    }

    pub fn concept(kind: &str, canonical: &str) -> Result<Self> {
        Self::from_parts(CONCEPT_COLLECTION, kind, canonical)
    }

    pub fn segment(doc_id: &str, index: usize) -> Result<Self> {
        Self::from_parts("doc", doc_id, &index.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn id_component(part: &str) -> String {
    part.split_whitespace().collect::<Vec<_>>().join("_")
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for NodeId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        NodeId::parse(raw).map_err(serde::de::Error::custom)
    }
}

/// A single property value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Float(OrderedFloat<f64>),
    Text(String),
}

impl Scalar {
    pub fn as_text(&self) -> Option<&str> {
        match self {
            Scalar::Text(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Float(v) => write!(f, "{}", v.0),
            Scalar::Text(v) => f.write_str(v),
        }
    }
}

impl From<&str> for Scalar {
    fn from(value: &str) -> Self {
        Scalar::Text(value.to_string())
    }
}

impl From<String> for Scalar {
    fn from(value: String) -> Self {
        Scalar::Text(value)
    }
}

impl From<i64> for Scalar {
    fn from(value: i64) -> Self {
        Scalar::Int(value)
    }
}

/// Scalar-or-list property value, kept as an ordered set so that merging
/// two values is a set union. Serializes as a bare scalar when it holds
/// exactly one element.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropValue(BTreeSet<Scalar>);

impl PropValue {
    pub fn single(value: impl Into<Scalar>) -> Self {
        PropValue(BTreeSet::from([value.into()]))
    }

    pub fn values(&self) -> impl Iterator<Item = &Scalar> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, value: impl Into<Scalar>) -> bool {
        self.0.insert(value.into())
    }

    /// Set union; returns true when anything new was added.
    pub fn merge(&mut self, other: &PropValue) -> bool {
        let before = self.0.len();
        self.0.extend(other.0.iter().cloned());
        self.0.len() != before
    }

    pub fn first(&self) -> Option<&Scalar> {
        self.0.iter().next()
    }
}

impl<S: Into<Scalar>> FromIterator<S> for PropValue {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        PropValue(iter.into_iter().map(Into::into).collect())
    }
}

impl Serialize for PropValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0.len() {
            1 => self.0.iter().next().unwrap().serialize(serializer),
            _ => serializer.collect_seq(self.0.iter()),
        }
    }
}

impl<'de> Deserialize<'de> for PropValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            One(Scalar),
            Many(Vec<Scalar>),
        }
        Ok(match Repr::deserialize(deserializer)? {
            Repr::One(s) => PropValue::single(s),
            Repr::Many(v) => v.into_iter().collect(),
        })
    }
}

pub type Properties = BTreeMap<String, PropValue>;

/// Canonical string form of a property map, used in edge identity.
pub fn canonical_properties(props: &Properties) -> String {
    // BTreeMap and BTreeSet iterate in order, so JSON output is canonical.
    serde_json::to_string(props).expect("property maps always serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub id: NodeId,
    pub collection: String,
    pub label: String,
    #[serde(default)]
    pub synonyms: Vec<String>,
    #[serde(default)]
    pub properties: Properties,
}

impl Node {
    pub fn new(id: NodeId, collection: impl Into<String>, label: impl Into<String>) -> Self {
        Node {
            id,
            collection: collection.into(),
            label: label.into(),
            synonyms: Vec::new(),
            properties: Properties::new(),
        }
    }

    pub fn with_synonym(mut self, synonym: impl Into<String>) -> Self {
        self.add_synonym(synonym.into());
        self
    }

    pub fn with_property(mut self, key: impl Into<String>, value: impl Into<Scalar>) -> Self {
        self.properties
            .entry(key.into())
            .or_default()
            .insert(value.into());
        self
    }

    /// Adds a synonym unless an equal one (after case-folding) is present.
    pub fn add_synonym(&mut self, synonym: String) -> bool {
        let folded = synonym.to_lowercase();
        if synonym.trim().is_empty() || self.synonyms.iter().any(|s| s.to_lowercase() == folded) {
            return false;
        }
        self.synonyms.push(synonym);
        true
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: &str| Error::InvalidNode {
            id: self.id.to_string(),
            reason: reason.to_string(),
        };
        if self.collection.is_empty() {
            return Err(invalid("empty collection"));
        }
        if self.label.trim().is_empty() {
            return Err(invalid("empty label"));
        }
        let mut seen = BTreeSet::new();
        for s in &self.synonyms {
            if !seen.insert(s.to_lowercase()) {
                return Err(invalid(&format!("duplicate synonym `{s}`")));
            }
        }
        Ok(())
    }

    /// Merges synonyms and properties by set union; the label is kept.
    /// Returns true when anything changed.
    pub fn merge_from(&mut self, other: &Node) -> bool {
        let mut changed = false;
        for s in &other.synonyms {
            changed |= self.add_synonym(s.clone());
        }
        for (key, value) in &other.properties {
            changed |= self.properties.entry(key.clone()).or_default().merge(value);
        }
        changed
    }

    /// Label followed by synonyms.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.label.as_str()).chain(self.synonyms.iter().map(String::as_str))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Declared,
    Concept,
    Ner,
    Cooccurrence,
    Fact,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub origin: String,
    #[serde(default)]
    pub locator: String,
    pub method: Method,
}

impl Provenance {
    pub fn new(origin: impl Into<String>, locator: impl Into<String>, method: Method) -> Self {
        Provenance {
            origin: origin.into(),
            locator: locator.into(),
            method,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub kind: String,
    #[serde(default)]
    pub properties: Properties,
    pub provenance: Provenance,
}

/// Identity of an edge within the store.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    pub src: NodeId,
    pub dst: NodeId,
    pub kind: String,
    pub properties: String,
}

impl Edge {
    pub fn new(src: NodeId, dst: NodeId, kind: impl Into<String>, provenance: Provenance) -> Self {
        Edge {
            src,
            dst,
            kind: kind.into(),
            properties: Properties::new(),
            provenance,
        }
    }

    pub fn with_property(mut self, key: impl Into<String>, value: impl Into<Scalar>) -> Self {
        self.properties
            .entry(key.into())
            .or_default()
            .insert(value.into());
        self
    }

    /// `(src, dst, kind, canonical properties)`. Co-occurrence edges carry
    /// running counters, so their properties are excluded from identity.
    pub fn key(&self) -> EdgeKey {
        let properties = if self.kind == COOCCURS_WITH {
            String::new()
        } else {
            canonical_properties(&self.properties)
        };
        EdgeKey {
            src: self.src.clone(),
            dst: self.dst.clone(),
            kind: self.kind.clone(),
            properties,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub per_collection: BTreeMap<String, usize>,
    pub per_kind: BTreeMap<String, usize>,
}
