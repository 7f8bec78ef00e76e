//! Cross-collection linking: concept nodes and declared relations.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::model::{CONCEPT_COLLECTION, HAS_CONCEPT};
use crate::graph::{Edge, EdgeInsert, Graph, Method, Node, NodeId, Provenance, Upsert};
use crate::ingest::{EntityDocument, RelationTarget};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkReport {
    pub nodes_created: usize,
    pub edges_created: usize,
    pub misses: usize,
    pub ambiguous: usize,
}

impl LinkReport {
    pub fn absorb(&mut self, other: &LinkReport) {
        self.nodes_created += other.nodes_created;
        self.edges_created += other.edges_created;
        self.misses += other.misses;
        self.ambiguous += other.ambiguous;
    }
}

/// One concept node per distinct `(kind, canonical)` and one `has_concept`
/// edge from each entity carrying it.
pub fn materialize_concepts<'a>(
    entities: impl IntoIterator<Item = &'a EntityDocument>,
    graph: &mut Graph,
) -> Result<LinkReport> {
    graph.register_collection(CONCEPT_COLLECTION)?;
    let mut report = LinkReport::default();
    for doc in entities {
        for concept in &doc.concepts {
            let kind = concept.kind.to_string();
            let id = NodeId::concept(&kind, &concept.canonical)?;
            let node = Node::new(id.clone(), CONCEPT_COLLECTION, &concept.canonical);
            if graph.upsert_node(node)? == Upsert::Inserted {
                report.nodes_created += 1;
            }
            let edge = Edge::new(
                doc.node.id.clone(),
                id,
                HAS_CONCEPT,
                Provenance::new(&doc.source, doc.node.id.as_str(), Method::Concept),
            );
            if graph.add_edge(edge)? == EdgeInsert::Inserted {
                report.edges_created += 1;
            }
        }
    }
    Ok(report)
}

/// Turns every relation into an edge where its target resolves to exactly
/// one node. Label targets are matched case-insensitively against labels and
/// synonyms in the target collection; ambiguous labels are skipped.
pub fn resolve_relations<'a>(
    entities: impl IntoIterator<Item = &'a EntityDocument>,
    graph: &mut Graph,
) -> Result<LinkReport> {
    let mut report = LinkReport::default();
    for doc in entities {
        if !graph.contains(&doc.node.id) {
            report.misses += doc.relations.len();
            continue;
        }
        for rel in &doc.relations {
            let target = match &rel.target {
                RelationTarget::Node(id) if graph.contains(id) => id.clone(),
                RelationTarget::Node(id) => {
                    log::info!("{}: relation target {id} not found", doc.node.id);
                    report.misses += 1;
                    continue;
                }
                RelationTarget::Label(label) => {
                    let hits: BTreeSet<NodeId> = graph
                        .find_nodes(Some(&rel.target_collection), Some(label))?
                        .into_iter()
                        .map(|n| n.id.clone())
                        .collect();
                    match hits.len() {
                        0 => {
                            report.misses += 1;
                            continue;
                        }
                        1 => hits.into_iter().next().unwrap(),
                        _ => {
                            log::warn!(
                                "{}: `{label}` is ambiguous in {}: {:?}",
                                doc.node.id,
                                rel.target_collection,
                                hits.iter().map(NodeId::as_str).collect::<Vec<_>>()
                            );
                            report.ambiguous += 1;
                            continue;
                        }
                    }
                }
            };
            let edge = Edge::new(
                doc.node.id.clone(),
                target,
                &rel.kind,
                Provenance::new(&doc.source, doc.node.id.as_str(), Method::Declared),
            );
            if graph.add_edge(edge)? == EdgeInsert::Inserted {
                report.edges_created += 1;
            }
        }
    }
    Ok(report)
}
