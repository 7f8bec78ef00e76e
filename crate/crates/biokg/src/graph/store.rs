//! In-memory property graph with adjacency and name indexes.
//!
//! The store has two modes. In build mode a single owner mutates it; after
//! [`Graph::freeze`] every mutating call fails with [`Error::Frozen`] and the
//! graph may be shared by reference across reader threads.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::model::{
    canonical_properties, Edge, EdgeKey, GraphStats, Node, NodeId, PropValue, Provenance, Scalar,
    COOCCURS_WITH,
};
use crate::error::{Error, Result};
use crate::registry::KeyRegistry;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Upsert {
    Inserted,
    Merged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeInsert {
    Inserted,
    Duplicate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Out,
    In,
    Both,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "out" => Ok(Direction::Out),
            "in" => Ok(Direction::In),
            "both" => Ok(Direction::Both),
            other => Err(Error::Usage(format!("unknown direction `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Graph {
    nodes: BTreeMap<NodeId, Node>,
    edges: Vec<Edge>,
    edge_index: HashMap<EdgeKey, usize>,
    outgoing: HashMap<NodeId, Vec<usize>>,
    incoming: HashMap<NodeId, Vec<usize>>,
    names: HashMap<String, BTreeSet<NodeId>>,
    collections: BTreeSet<String>,
    registry: KeyRegistry,
    frozen: bool,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn thaw(&mut self) {
        self.frozen = false;
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    fn ensure_build_mode(&self) -> Result<()> {
        if self.frozen {
            Err(Error::Frozen)
        } else {
            Ok(())
        }
    }

    pub fn register_collection(&mut self, name: &str) -> Result<()> {
        self.ensure_build_mode()?;
        if name.is_empty() {
            return Err(Error::Usage("collection name must not be empty".into()));
        }
        self.collections.insert(name.to_string());
        Ok(())
    }

    pub fn collections(&self) -> &BTreeSet<String> {
        &self.collections
    }

    pub fn has_collection(&self, name: &str) -> bool {
        self.collections.contains(name)
    }

    pub fn registry(&self) -> &KeyRegistry {
        &self.registry
    }

    pub fn registry_mut(&mut self) -> &mut KeyRegistry {
        &mut self.registry
    }

    pub fn upsert_node(&mut self, node: Node) -> Result<Upsert> {
        self.ensure_build_mode()?;
        // Ids built through serde or `parse` are valid; re-check ids that
        // might have been assembled by hand.
        NodeId::parse(node.id.as_str())?;
        node.validate()?;
        if !self.collections.contains(&node.collection) {
            return Err(Error::UnknownCollection(node.collection.clone()));
        }
        match self.nodes.get_mut(&node.id) {
            Some(existing) => {
                existing.merge_from(&node);
                let id = existing.id.clone();
                let names: Vec<String> = existing.names().map(str::to_lowercase).collect();
                for name in names {
                    self.names.entry(name).or_default().insert(id.clone());
                }
                Ok(Upsert::Merged)
            }
            None => {
                for name in node.names() {
                    self.names
                        .entry(name.to_lowercase())
                        .or_default()
                        .insert(node.id.clone());
                }
                self.nodes.insert(node.id.clone(), node);
                Ok(Upsert::Inserted)
            }
        }
    }

    pub fn add_edge(&mut self, edge: Edge) -> Result<EdgeInsert> {
        self.ensure_build_mode()?;
        for end in [&edge.src, &edge.dst] {
            if !self.nodes.contains_key(end) {
                return Err(Error::DanglingEndpoint(end.to_string()));
            }
        }
        let key = edge.key();
        if self.edge_index.contains_key(&key) {
            return Ok(EdgeInsert::Duplicate);
        }
        let idx = self.edges.len();
        self.outgoing.entry(edge.src.clone()).or_default().push(idx);
        self.incoming.entry(edge.dst.clone()).or_default().push(idx);
        self.edge_index.insert(key, idx);
        self.edges.push(edge);
        Ok(EdgeInsert::Inserted)
    }

    /// Records that `src` and `dst` were mentioned together in `segment`.
    ///
    /// The directed `cooccurs_with` edge keeps the set of shared segments and
    /// a `count` equal to its size, so recording the same segment twice is a
    /// no-op. Returns whether a new edge was created.
    pub fn record_cooccurrence(
        &mut self,
        src: &NodeId,
        dst: &NodeId,
        segment: &NodeId,
        provenance: Provenance,
    ) -> Result<EdgeInsert> {
        self.ensure_build_mode()?;
        let probe = Edge::new(src.clone(), dst.clone(), COOCCURS_WITH, provenance);
        if let Some(&idx) = self.edge_index.get(&probe.key()) {
            let edge = &mut self.edges[idx];
            let segments = edge.properties.entry("segments".into()).or_default();
            segments.insert(segment.as_str());
            let count = segments.len() as i64;
            edge.properties
                .insert("count".into(), PropValue::single(count));
            return Ok(EdgeInsert::Duplicate);
        }
        let edge = probe
            .with_property("segments", segment.as_str())
            .with_property("count", 1);
        self.add_edge(edge)
    }

    /// Set-union of `properties` into an existing node.
    pub fn merge_node_properties(
        &mut self,
        id: &NodeId,
        properties: impl IntoIterator<Item = (String, Scalar)>,
    ) -> Result<()> {
        self.ensure_build_mode()?;
        let node = self
            .nodes
            .get_mut(id)
            .ok_or_else(|| Error::NodeNotFound(id.to_string()))?;
        for (key, value) in properties {
            node.properties.entry(key).or_default().insert(value);
        }
        Ok(())
    }

    pub fn node(&self, id: &NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id)
    }

    /// Nodes in canonical id order.
    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn out_edges(&self, id: &NodeId) -> impl Iterator<Item = &Edge> {
        self.outgoing
            .get(id)
            .into_iter()
            .flatten()
            .map(|&i| &self.edges[i])
    }

    pub fn in_edges(&self, id: &NodeId) -> impl Iterator<Item = &Edge> {
        self.incoming
            .get(id)
            .into_iter()
            .flatten()
            .map(|&i| &self.edges[i])
    }

    /// Incident edges with their far-end node, ordered by far-end id.
    ///
    /// A self-loop appears once even for [`Direction::Both`].
    pub fn neighbors(
        &self,
        id: &NodeId,
        kinds: Option<&BTreeSet<String>>,
        direction: Direction,
    ) -> Result<Vec<(&Edge, &Node)>> {
        if !self.nodes.contains_key(id) {
            return Err(Error::NodeNotFound(id.to_string()));
        }
        let mut picked: BTreeSet<usize> = BTreeSet::new();
        if matches!(direction, Direction::Out | Direction::Both) {
            picked.extend(self.outgoing.get(id).into_iter().flatten().copied());
        }
        if matches!(direction, Direction::In | Direction::Both) {
            picked.extend(self.incoming.get(id).into_iter().flatten().copied());
        }
        let mut out: Vec<(&Edge, &Node)> = picked
            .into_iter()
            .map(|i| &self.edges[i])
            .filter(|e| kinds.is_none_or(|k| k.contains(&e.kind)))
            .map(|e| {
                let far = if &e.src == id { &e.dst } else { &e.src };
                (e, &self.nodes[far])
            })
            .collect();
        out.sort_by(|(ea, na), (eb, nb)| {
            na.id
                .cmp(&nb.id)
                .then_with(|| ea.kind.cmp(&eb.kind))
                .then_with(|| ea.src.cmp(&eb.src))
                .then_with(|| {
                    canonical_properties(&ea.properties).cmp(&canonical_properties(&eb.properties))
                })
        });
        Ok(out)
    }

    /// Case-insensitive exact match on label or any synonym, optionally
    /// restricted to one collection. Results are in canonical id order.
    pub fn find_nodes(&self, collection: Option<&str>, name: Option<&str>) -> Result<Vec<&Node>> {
        let in_collection = |n: &&Node| collection.is_none_or(|c| n.collection == c);
        match (collection, name) {
            (None, None) => Err(Error::Usage(
                "find_nodes needs a collection or a label".into(),
            )),
            (_, Some(name)) => Ok(self
                .names
                .get(&name.to_lowercase())
                .into_iter()
                .flatten()
                .map(|id| &self.nodes[id])
                .filter(in_collection)
                .collect()),
            (Some(_), None) => Ok(self.nodes.values().filter(in_collection).collect()),
        }
    }

    pub fn stats(&self) -> GraphStats {
        let mut stats = GraphStats {
            node_count: self.nodes.len(),
            edge_count: self.edges.len(),
            ..GraphStats::default()
        };
        for node in self.nodes.values() {
            *stats
                .per_collection
                .entry(node.collection.clone())
                .or_default() += 1;
        }
        for edge in &self.edges {
            *stats.per_kind.entry(edge.kind.clone()).or_default() += 1;
        }
        stats
    }

    /// Same node set, properties and edge set, ignoring insertion order.
    pub fn graph_eq(&self, other: &Graph) -> bool {
        if self.nodes != other.nodes || self.edges.len() != other.edges.len() {
            return false;
        }
        self.edges
            .iter()
            .all(|e| match other.edge_index.get(&e.key()) {
                Some(&i) => other.edges[i] == *e,
                None => false,
            })
    }
}
