//! Read-only graph analytics. Edges are treated as undirected everywhere
//! except that degree counts every incident edge end.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Incident edge count (in + out) per node, optionally for one collection.
pub fn degree_centrality(
    graph: &Graph,
    collection: Option<&str>,
) -> Result<BTreeMap<NodeId, usize>> {
    if let Some(c) = collection {
        if !graph.has_collection(c) {
            return Err(Error::UnknownCollection(c.to_string()));
        }
    }
    Ok(graph
        .nodes()
        .filter(|n| collection.is_none_or(|c| n.collection == c))
        .map(|n| {
            (
                n.id.clone(),
                graph.out_edges(&n.id).count() + graph.in_edges(&n.id).count(),
            )
        })
        .collect())
}

/// Dense-index undirected adjacency without self-loops or parallel edges.
struct Adjacency {
    ids: Vec<NodeId>,
    neighbors: Vec<Vec<usize>>,
}

impl Adjacency {
    fn new(graph: &Graph) -> Self {
        let ids: Vec<NodeId> = graph.nodes().map(|n| n.id.clone()).collect();
        let index: BTreeMap<&NodeId, usize> =
            ids.iter().enumerate().map(|(i, id)| (id, i)).collect();
        let mut sets = vec![BTreeSet::new(); ids.len()];
        for e in graph.edges() {
            let (a, b) = (index[&e.src], index[&e.dst]);
            if a != b {
                sets[a].insert(b);
                sets[b].insert(a);
            }
        }
        Adjacency {
            neighbors: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            ids,
        }
    }
}

/// Weakly connected components, largest first, ties by smallest member.
pub fn connected_components(graph: &Graph) -> Vec<BTreeSet<NodeId>> {
    let adj = Adjacency::new(graph);
    let mut seen = vec![false; adj.ids.len()];
    let mut components = Vec::new();
    for start in 0..adj.ids.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut members = BTreeSet::new();
        while let Some(v) = queue.pop_front() {
            members.insert(adj.ids[v].clone());
            for &w in &adj.neighbors[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        components.push(members);
    }
    components.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then_with(|| a.first().cmp(&b.first()))
    });
    components
}

/// Synchronous label propagation.
///
/// Every node starts with its position in canonical id order as label. In
/// each round all nodes simultaneously adopt the most frequent label among
/// their neighbours, the lowest label winning ties; isolated nodes keep
/// their own. Stops at a fixpoint or after `max_iters` rounds. Cluster ids
/// are renumbered densely in order of each cluster's smallest member.
///
/// `seed` fixes the visitation shuffle. Because updates are synchronous
/// the result does not depend on it.
pub fn label_propagation_clusters(
    graph: &Graph,
    max_iters: usize,
    seed: u64,
) -> Result<BTreeMap<NodeId, usize>> {
    if max_iters == 0 {
        return Err(Error::Usage("max_iters must be at least 1".into()));
    }
    let adj = Adjacency::new(graph);
    let n = adj.ids.len();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    for _ in 0..max_iters {
        let mut next = labels.clone();
        for &v in &order {
            if adj.neighbors[v].is_empty() {
                continue;
            }
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for &w in &adj.neighbors[v] {
                *counts.entry(labels[w]).or_default() += 1;
            }
            // BTreeMap iterates labels ascending, so the first max wins ties.
            let mut best = (0, usize::MAX);
            for (&label, &count) in &counts {
                if count > best.0 {
                    best = (count, label);
                }
            }
            next[v] = best.1;
        }
        if next == labels {
            break;
        }
        labels = next;
    }

    let mut dense: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for (v, id) in adj.ids.iter().enumerate() {
        let next_id = dense.len();
        let cluster = *dense.entry(labels[v]).or_insert(next_id);
        out.insert(id.clone(), cluster);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, Method, Node, Provenance};

    fn graph(nodes: usize, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph::new();
        g.register_collection("c").unwrap();
        for i in 0..nodes {
            g.upsert_node(Node::new(
                NodeId::parse(format!("s:c:{i}")).unwrap(),
                "c",
                format!("n{i}"),
            ))
            .unwrap();
        }
        for &(a, b) in edges {
            let e = Edge::new(
                NodeId::parse(format!("s:c:{a}")).unwrap(),
                NodeId::parse(format!("s:c:{b}")).unwrap(),
                "e",
                Provenance::new("t", "", Method::Declared),
            );
            g.add_edge(e).unwrap();
        }
        g
    }

    fn id(i: usize) -> NodeId {
        NodeId::parse(format!("s:c:{i}")).unwrap()
    }

    #[test]
    fn degrees() {
        let g = graph(4, &[(0, 1), (0, 2), (3, 0)]);
        let d = degree_centrality(&g, None).unwrap();
        assert_eq!(d[&id(0)], 3);
        assert_eq!(d[&id(1)], 1);
        let lone = graph(1, &[]);
        assert_eq!(degree_centrality(&lone, None).unwrap()[&id(0)], 0);
        assert!(matches!(
            degree_centrality(&g, Some("nope")),
            Err(Error::UnknownCollection(_))
        ));
    }

    #[test]
    fn components() {
        assert!(connected_components(&Graph::new()).is_empty());
        let g = graph(4, &[(0, 1), (2, 3)]);
        let cc = connected_components(&g);
        assert_eq!(cc.len(), 2);
        assert!(cc.iter().all(|c| c.len() == 2));
        assert!(cc[0].contains(&id(0)));
    }

    #[test]
    fn triangle_is_one_cluster() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let c = label_propagation_clusters(&g, 10, 7).unwrap();
        assert!(c.values().all(|&v| v == 0));
    }

    #[test]
    fn two_bridged_triangles_are_two_clusters() {
        // Hand simulation from labels [0..6]:
        // round 1 -> [1,0,0,2,3,3], round 2 -> [0,0,0,3,2,2],
        // round 3 -> [0,0,0,2,2,2], round 4 unchanged.
        let g = graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]);
        let c = label_propagation_clusters(&g, 20, 1).unwrap();
        let clusters: Vec<usize> = (0..6).map(|i| c[&id(i)]).collect();
        assert_eq!(clusters, [0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn isolated_node_keeps_own_cluster() {
        let g = graph(3, &[(0, 1)]);
        let c = label_propagation_clusters(&g, 5, 0).unwrap();
        assert_ne!(c[&id(2)], c[&id(0)]);
        assert!(label_propagation_clusters(&g, 0, 0).is_err());
    }
}
