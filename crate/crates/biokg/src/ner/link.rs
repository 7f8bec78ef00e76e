use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::gazetteer::normalize_surface;
use super::recognize::Mention;
use crate::documents::{flatten_table, DocumentSegment};
use crate::error::{Error, Result};
use crate::graph::model::{FACT, MENTIONED_IN, SHARES_FACT};
use crate::graph::{Edge, EdgeInsert, Graph, Method, NodeId, Provenance, Scalar};
use crate::linker::LinkReport;
use crate::registry::KeyRegistry;

fn doc_origin(graph: &Graph, segment: &NodeId) -> String {
    graph
        .node(segment)
        .and_then(|n| n.properties.get("doc_id"))
        .and_then(|v| v.first())
        .map(ToString::to_string)
        .unwrap_or_else(|| segment.to_string())
}

/// `mentioned_in` edges for every mention, and a symmetric pair of
/// `cooccurs_with` edges for every two distinct entities sharing a segment.
pub fn link_mentions(mentions: &[Mention], graph: &mut Graph) -> Result<LinkReport> {
    let mut report = LinkReport::default();
    let mut by_segment: BTreeMap<&NodeId, BTreeSet<&NodeId>> = BTreeMap::new();
    for m in mentions {
        let origin = doc_origin(graph, &m.segment_id);
        let edge = Edge::new(
            m.node_id.clone(),
            m.segment_id.clone(),
            MENTIONED_IN,
            Provenance::new(origin, m.segment_id.as_str(), Method::Ner),
        )
        .with_property("surface", normalize_surface(&m.surface));
        if graph.add_edge(edge)? == EdgeInsert::Inserted {
            report.edges_created += 1;
        }
        by_segment
            .entry(&m.segment_id)
            .or_default()
            .insert(&m.node_id);
    }
    for (segment, entities) in by_segment {
        let origin = doc_origin(graph, segment);
        let entities: Vec<&NodeId> = entities.into_iter().collect();
        for (i, a) in entities.iter().enumerate() {
            for b in &entities[i + 1..] {
                for (src, dst) in [(a, b), (b, a)] {
                    let prov = Provenance::new(&origin, segment.as_str(), Method::Cooccurrence);
                    if graph.record_cooccurrence(src, dst, segment, prov)? == EdgeInsert::Inserted {
                        report.edges_created += 1;
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub subject: NodeId,
    pub predicate: String,
    pub value: String,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactExtraction {
    pub facts: Vec<Fact>,
    pub skipped_rows: usize,
    pub edges_created: usize,
}

/// Header to predicate: the snake-cased header when it is a registered
/// normalized key, otherwise `raw:<header>`.
pub fn fact_predicate(header: &str, registry: &KeyRegistry) -> String {
    let key = KeyRegistry::snake_case(header);
    if !key.is_empty() && registry.contains(&key) {
        key
    } else {
        format!("raw:{}", header.trim())
    }
}

/// Facts from the rows of a table whose column-0 cell names exactly one
/// entity. Each fact is stored as a `fact` edge entity→segment and appended
/// to the entity's `doc_facts` property as `predicate=value`.
pub fn extract_facts(
    table: &DocumentSegment,
    mentions: &[Mention],
    graph: &mut Graph,
) -> Result<FactExtraction> {
    let triples = flatten_table(table)?;
    let rows = table.table.as_ref().map_or(0, Vec::len);
    let origin = doc_origin(graph, &table.segment_id);
    let mut out = FactExtraction::default();

    for row in 1..rows {
        let subjects: BTreeSet<&NodeId> = mentions
            .iter()
            .filter(|m| m.segment_id == table.segment_id && m.cell == Some((row, 0)))
            .map(|m| &m.node_id)
            .collect();
        if subjects.len() != 1 {
            log::debug!(
                "{} row {row}: {} candidate entities, row skipped",
                table.segment_id,
                subjects.len()
            );
            out.skipped_rows += 1;
            continue;
        }
        let subject = subjects.into_iter().next().unwrap().clone();
        if !graph.contains(&subject) {
            return Err(Error::NodeNotFound(subject.to_string()));
        }
        for t in triples.iter().filter(|t| t.row == row) {
            let predicate = fact_predicate(&t.header, graph.registry());
            let provenance = Provenance::new(&origin, table.segment_id.as_str(), Method::Fact);
            let edge = Edge::new(
                subject.clone(),
                table.segment_id.clone(),
                FACT,
                provenance.clone(),
            )
            .with_property("predicate", predicate.as_str())
            .with_property("value", t.value.as_str());
            if graph.add_edge(edge)? == EdgeInsert::Inserted {
                out.edges_created += 1;
            }
            graph.merge_node_properties(
                &subject,
                [(
                    "doc_facts".to_string(),
                    Scalar::Text(format!("{predicate}={}", t.value)),
                )],
            )?;
            out.facts.push(Fact {
                subject: subject.clone(),
                predicate,
                value: t.value.clone(),
                provenance,
            });
        }
    }
    Ok(out)
}

/// A symmetric pair of `shares_fact` edges between every two distinct
/// subjects holding the same `(predicate, value)` fact. Only exact value
/// equality links entities; values are compared as written.
pub fn link_shared_facts(facts: &[Fact], graph: &mut Graph) -> Result<usize> {
    let mut groups: BTreeMap<(&str, &str), BTreeMap<&NodeId, &Provenance>> = BTreeMap::new();
    for f in facts {
        groups
            .entry((&f.predicate, &f.value))
            .or_default()
            .entry(&f.subject)
            .or_insert(&f.provenance);
    }
    let mut created = 0;
    for ((predicate, value), subjects) in groups {
        let subjects: Vec<(&NodeId, &Provenance)> = subjects.into_iter().collect();
        for (i, (a, prov)) in subjects.iter().enumerate() {
            for (b, _) in &subjects[i + 1..] {
                for (src, dst) in [(a, b), (b, a)] {
                    let edge =
                        Edge::new((*src).clone(), (*dst).clone(), SHARES_FACT, (*prov).clone())
                            .with_property("predicate", predicate)
                            .with_property("value", value);
                    if graph.add_edge(edge)? == EdgeInsert::Inserted {
                        created += 1;
                    }
                }
            }
        }
    }
    Ok(created)
}
