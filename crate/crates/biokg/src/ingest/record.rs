//! Raw record normalization and per-source ingestion.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Lines};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::concept::ConceptKey;
use super::descriptor::{ResolveBy, SourceDescriptor};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Method, Node, NodeId, PropValue, Provenance, Scalar, Upsert};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRecord {
    pub source_name: String,
    /// Where the record came from, e.g. `uniprot.jsonl:7`.
    #[serde(default)]
    pub locator: String,
    pub payload: BTreeMap<String, Value>,
}

impl RawRecord {
    pub fn new(source_name: impl Into<String>, payload: BTreeMap<String, Value>) -> Self {
        RawRecord {
            source_name: source_name.into(),
            locator: String::new(),
            payload,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "by", content = "value")]
pub enum RelationTarget {
    Node(NodeId),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Relation {
    pub kind: String,
    pub target_collection: String,
    pub target: RelationTarget,
}

/// One normalized entity, its extracted concepts and outgoing relations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityDocument {
    pub source: String,
    pub node: Node,
    pub concepts: Vec<ConceptKey>,
    pub relations: Vec<Relation>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalizeWarnings {
    pub unmapped_keys: Vec<String>,
    pub invalid_concepts: Vec<String>,
}

impl NormalizeWarnings {
    pub fn count(&self) -> usize {
        self.unmapped_keys.len() + self.invalid_concepts.len()
    }
}

fn flatten_value(value: &Value, out: &mut Vec<Scalar>) {
    match value {
        Value::String(s) if !s.trim().is_empty() => out.push(Scalar::Text(s.trim().to_string())),
        Value::Number(n) => match n.as_i64() {
            Some(i) => out.push(Scalar::Int(i)),
            None => out.push(Scalar::Float(n.as_f64().unwrap_or(f64::NAN).into())),
        },
        Value::Bool(b) => out.push(Scalar::Text(b.to_string())),
        Value::Array(items) => items.iter().for_each(|v| flatten_value(v, out)),
        _ => {}
    }
}

fn scalars(value: &Value) -> Vec<Scalar> {
    let mut out = Vec::new();
    flatten_value(value, &mut out);
    out
}

/// Rewrites a raw record as an entity document with normalized keys.
pub fn normalize_record(
    record: &RawRecord,
    descriptor: &SourceDescriptor,
) -> Result<(EntityDocument, NormalizeWarnings)> {
    let reject = |reason: String| Error::RecordRejected {
        locator: if record.locator.is_empty() {
            record.source_name.clone()
        } else {
            record.locator.clone()
        },
        reason,
    };
    if record.source_name != descriptor.source_name {
        return Err(reject(format!(
            "record from `{}` given to descriptor `{}`",
            record.source_name, descriptor.source_name
        )));
    }

    let accession = match record
        .payload
        .get(&descriptor.id_field)
        .map(scalars)
        .as_deref()
    {
        Some([one]) => one.to_string(),
        Some([]) | None => {
            return Err(reject(format!(
                "missing id field `{}`",
                descriptor.id_field
            )))
        }
        Some(_) => {
            return Err(reject(format!(
                "id field `{}` holds several values",
                descriptor.id_field
            )))
        }
    };
    let id = NodeId::entity(&descriptor.source_name, &descriptor.collection, &accession)
        .map_err(|e| reject(e.to_string()))?;

    let label = record
        .payload
        .get(&descriptor.label_field)
        .map(scalars)
        .and_then(|v| v.first().map(ToString::to_string))
        .unwrap_or_else(|| accession.clone());

    let mut node = Node::new(id, &descriptor.collection, label);
    for field in &descriptor.synonym_fields {
        if let Some(v) = record.payload.get(field) {
            for s in scalars(v) {
                node.add_synonym(s.to_string());
            }
        }
    }

    let consumed: BTreeSet<&str> = descriptor
        .synonym_fields
        .iter()
        .chain(descriptor.relation_fields.iter().map(|r| &r.field))
        .map(String::as_str)
        .collect();
    let mut warnings = NormalizeWarnings::default();
    for (raw_key, value) in &record.payload {
        match descriptor.normalized_key(raw_key) {
            Some(norm) => {
                let values = scalars(value);
                if !values.is_empty() {
                    node.properties
                        .entry(norm.to_string())
                        .or_default()
                        .merge(&values.into_iter().collect::<PropValue>());
                }
            }
            None if consumed.contains(raw_key.as_str()) => {}
            None => warnings.unmapped_keys.push(raw_key.clone()),
        }
    }

    let mut concepts = BTreeSet::new();
    for ex in &descriptor.concept_extractors {
        let Some(values) = node.properties.get(&ex.key) else {
            continue;
        };
        for v in values.values() {
            match ConceptKey::new(ex.kind.clone(), &v.to_string()) {
                Ok(key) => {
                    concepts.insert(key);
                }
                Err(e) => {
                    log::warn!("{}: {e}; concept skipped", node.id);
                    warnings.invalid_concepts.push(v.to_string());
                }
            }
        }
    }

    let mut relations = BTreeSet::new();
    for rel in &descriptor.relation_fields {
        let Some(value) = record.payload.get(&rel.field) else {
            continue;
        };
        for v in scalars(value) {
            let text = v.to_string();
            let target = match rel.resolve {
                ResolveBy::Label => RelationTarget::Label(text),
                ResolveBy::Accession => {
                    let source = rel
                        .target_source
                        .as_deref()
                        .unwrap_or(&rel.target_collection);
                    RelationTarget::Node(
                        NodeId::entity(source, &rel.target_collection, &text)
                            .map_err(|e| reject(e.to_string()))?,
                    )
                }
            };
            relations.insert(Relation {
                kind: rel.kind.clone(),
                target_collection: rel.target_collection.clone(),
                target,
            });
        }
    }

    Ok((
        EntityDocument {
            source: descriptor.source_name.clone(),
            node,
            concepts: concepts.into_iter().collect(),
            relations: relations.into_iter().collect(),
        },
        warnings,
    ))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub source: String,
    pub inserted: usize,
    pub merged: usize,
    pub rejected: usize,
    pub warnings: usize,
    pub relation_edges: usize,
}

/// Ingests one source into a graph in build mode.
///
/// Per-record problems are tallied in the report; only I/O failures from the
/// record stream abort the run. Relations whose target node already exists
/// become edges immediately; the rest wait for
/// [`crate::linker::resolve_relations`].
pub fn ingest_source<I>(
    records: I,
    descriptor: &SourceDescriptor,
    graph: &mut Graph,
) -> Result<(IngestReport, Vec<EntityDocument>)>
where
    I: IntoIterator<Item = Result<RawRecord>>,
{
    graph.register_collection(&descriptor.collection)?;
    descriptor.register_keys(graph.registry_mut());

    let mut report = IngestReport {
        source: descriptor.source_name.clone(),
        ..IngestReport::default()
    };
    let mut documents = Vec::new();
    for record in records {
        let record = match record {
            Ok(r) => r,
            Err(e) if e.is_io() => return Err(e),
            Err(e) => {
                log::warn!("{e}");
                report.rejected += 1;
                continue;
            }
        };
        let (doc, warnings) = match normalize_record(&record, descriptor) {
            Ok(ok) => ok,
            Err(e) => {
                log::warn!("{e}");
                report.rejected += 1;
                continue;
            }
        };
        if !warnings.unmapped_keys.is_empty() {
            log::debug!(
                "{}: dropped unmapped keys {:?}",
                doc.node.id,
                warnings.unmapped_keys
            );
        }
        report.warnings += warnings.count();
        match graph.upsert_node(doc.node.clone()) {
            Ok(Upsert::Inserted) => report.inserted += 1,
            Ok(Upsert::Merged) => report.merged += 1,
            Err(Error::Frozen) => return Err(Error::Frozen),
            Err(e) => {
                log::warn!("{e}");
                report.rejected += 1;
                continue;
            }
        }
        for rel in &doc.relations {
            if let RelationTarget::Node(target) = &rel.target {
                if graph.contains(target) {
                    let edge = Edge::new(
                        doc.node.id.clone(),
                        target.clone(),
                        &rel.kind,
                        Provenance::new(&doc.source, doc.node.id.as_str(), Method::Declared),
                    );
                    if graph.add_edge(edge)? == crate::graph::EdgeInsert::Inserted {
                        report.relation_edges += 1;
                    }
                }
            }
        }
        documents.push(doc);
    }
    Ok((report, documents))
}

/// Streams line-delimited JSON records from a file. Each non-blank line is
/// one JSON object (the raw payload).
pub struct RecordReader {
    source_name: String,
    file_name: String,
    lines: std::iter::Enumerate<Lines<BufReader<File>>>,
}

impl RecordReader {
    pub fn open(path: &Path, source_name: &str) -> Result<Self> {
        let file =
            File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
        Ok(RecordReader {
            source_name: source_name.to_string(),
            file_name: path.display().to_string(),
            lines: BufReader::new(file).lines().enumerate(),
        })
    }
}

impl Iterator for RecordReader {
    type Item = Result<RawRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let (i, line) = self.lines.next()?;
            let line = match line {
                Ok(l) => l,
                Err(e) => return Some(Err(Error::io(format!("reading {}", self.file_name), e))),
            };
            if line.trim().is_empty() {
                continue;
            }
            return Some(
                serde_json::from_str::<BTreeMap<String, Value>>(&line)
                    .map(|payload| RawRecord {
                        source_name: self.source_name.clone(),
                        locator: format!("{}:{}", self.file_name, i + 1),
                        payload,
                    })
                    .map_err(|e| Error::Parse {
                        file: self.file_name.clone(),
                        line: i + 1,
                        reason: e.to_string(),
                    }),
            );
        }
    }
}
