use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dag::validate_dag;
use super::spec::{Comparator, Operation, Step, Workflow};
use crate::error::{Error, Result};
use crate::graph::{Direction, Edge, Graph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepResult {
    pub step_id: String,
    /// Canonical (ascending) order, no duplicates.
    pub node_ids: Vec<NodeId>,
    pub cardinality: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step_id: String,
    pub op: String,
    pub cardinality: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ExecutionTrace {
    /// One entry per step, in topological order.
    pub entries: Vec<TraceEntry>,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Execution {
    pub results: BTreeMap<String, StepResult>,
    pub trace: ExecutionTrace,
}

impl Execution {
    pub fn output_results(&self) -> impl Iterator<Item = &StepResult> {
        self.trace.outputs.iter().map(|id| &self.results[id])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    Sequential,
    /// Steps whose inputs are all available run concurrently, one wave at a
    /// time.
    #[default]
    Parallel,
}

type NodeSet = BTreeSet<NodeId>;

pub fn execute(workflow: &Workflow, graph: &Graph) -> Result<Execution> {
    execute_with(workflow, graph, Schedule::Parallel)
}

pub fn execute_with(workflow: &Workflow, graph: &Graph, schedule: Schedule) -> Result<Execution> {
    if !graph.is_frozen() {
        return Err(Error::NotFrozen("executing a workflow"));
    }
    let order = validate_dag(workflow)?;
    let mut sets: BTreeMap<String, NodeSet> = BTreeMap::new();
    let mut timings: BTreeMap<String, Duration> = BTreeMap::new();

    let run = |step: &Step, sets: &BTreeMap<String, NodeSet>| {
        let inputs: Vec<&NodeSet> = step.inputs.iter().map(|i| &sets[i]).collect();
        let started = Instant::now();
        let out = evaluate(&step.op, &inputs, graph);
        (step.id.clone(), out, started.elapsed())
    };

    match schedule {
        Schedule::Sequential => {
            for id in &order {
                let (id, out, t) = run(&workflow.steps[id], &sets);
                sets.insert(id.clone(), out?);
                timings.insert(id, t);
            }
        }
        Schedule::Parallel => {
            for wave in waves(workflow, &order) {
                let done: Vec<_> = wave
                    .par_iter()
                    .map(|id| run(&workflow.steps[*id], &sets))
                    .collect();
                for (id, out, t) in done {
                    sets.insert(id.clone(), out?);
                    timings.insert(id, t);
                }
            }
        }
    }

    let mut trace = ExecutionTrace {
        outputs: workflow.outputs().map(|s| s.id.clone()).collect(),
        ..Default::default()
    };
    let mut results = BTreeMap::new();
    for id in &order {
        let set = sets.remove(id).unwrap();
        trace.entries.push(TraceEntry {
            step_id: id.clone(),
            op: workflow.steps[id].op.name().to_string(),
            cardinality: set.len(),
            elapsed: timings[id],
        });
        results.insert(
            id.clone(),
            StepResult {
                step_id: id.clone(),
                cardinality: set.len(),
                node_ids: set.into_iter().collect(),
            },
        );
    }
    Ok(Execution { results, trace })
}

/// Groups steps by longest distance from a root; each group only depends on
/// earlier groups.
fn waves<'w>(workflow: &'w Workflow, order: &'w [String]) -> Vec<Vec<&'w str>> {
    let mut level: BTreeMap<&str, usize> = BTreeMap::new();
    let mut out: Vec<Vec<&str>> = Vec::new();
    for id in order {
        let l = workflow.steps[id]
            .inputs
            .iter()
            .map(|i| level[i.as_str()] + 1)
            .max()
            .unwrap_or(0);
        level.insert(id, l);
        if out.len() <= l {
            out.resize_with(l + 1, Vec::new);
        }
        out[l].push(id);
    }
    out
}

fn evaluate(op: &Operation, inputs: &[&NodeSet], graph: &Graph) -> Result<NodeSet> {
    Ok(match op {
        Operation::Lookup { collection, label } => graph
            .find_nodes(collection.as_deref(), label.as_deref())?
            .into_iter()
            .map(|n| n.id.clone())
            .collect(),
        Operation::Traverse {
            edge_kinds,
            direction,
            depth,
            target_collection,
        } => traverse(
            graph,
            inputs[0],
            edge_kinds.as_ref(),
            *direction,
            *depth,
            target_collection.as_deref(),
        ),
        Operation::Filter {
            key,
            comparator,
            value,
        } => inputs[0]
            .iter()
            .filter(|id| {
                let Some(prop) = graph.node(id).and_then(|n| n.properties.get(key)) else {
                    return false;
                };
                let needle = value.as_deref().unwrap_or_default();
                match comparator {
                    Comparator::Exists => !prop.is_empty(),
                    Comparator::Eq => prop.values().any(|v| v.to_string() == needle),
                    Comparator::Contains => prop.values().any(|v| v.to_string().contains(needle)),
                }
            })
            .cloned()
            .collect(),
        Operation::Intersect => {
            let mut acc = inputs[0].clone();
            for s in &inputs[1..] {
                acc.retain(|id| s.contains(id));
            }
            acc
        }
        Operation::Union => inputs.iter().flat_map(|s| s.iter().cloned()).collect(),
        Operation::Difference => {
            let mut acc = inputs[0].clone();
            for s in &inputs[1..] {
                acc.retain(|id| !s.contains(id));
            }
            acc
        }
        Operation::AntiJoin {
            excluded_collection,
            edge_kinds,
        } => inputs[0]
            .iter()
            .filter(|id| !touches_collection(graph, id, excluded_collection, edge_kinds.as_ref()))
            .cloned()
            .collect(),
        Operation::Limit { n } => inputs[0].iter().take(*n).cloned().collect(),
    })
}

fn kind_allowed(edge: &Edge, kinds: Option<&BTreeSet<String>>) -> bool {
    kinds.is_none_or(|k| k.contains(&edge.kind))
}

/// Nodes reachable from `seeds` in at most `depth` hops, seeds excluded.
fn traverse(
    graph: &Graph,
    seeds: &NodeSet,
    kinds: Option<&BTreeSet<String>>,
    direction: Direction,
    depth: usize,
    target_collection: Option<&str>,
) -> NodeSet {
    let mut visited: NodeSet = seeds
        .iter()
        .filter(|id| graph.contains(id))
        .cloned()
        .collect();
    let mut frontier: Vec<NodeId> = visited.iter().cloned().collect();
    let mut reached = NodeSet::new();
    for _ in 0..depth {
        let mut next = Vec::new();
        for id in &frontier {
            let incident = graph
                .out_edges(id)
                .map(|e| (e, true))
                .chain(graph.in_edges(id).map(|e| (e, false)));
            for (edge, is_out) in incident {
                let wanted = match direction {
                    Direction::Out => is_out,
                    Direction::In => !is_out,
                    Direction::Both => true,
                };
                if !wanted || !kind_allowed(edge, kinds) {
                    continue;
                }
                let far = if is_out { &edge.dst } else { &edge.src };
                if visited.insert(far.clone()) {
                    reached.insert(far.clone());
                    next.push(far.clone());
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    reached.retain(|id| {
        target_collection.is_none_or(|c| graph.node(id).is_some_and(|n| n.collection == c))
    });
    reached
}

fn touches_collection(
    graph: &Graph,
    id: &NodeId,
    collection: &str,
    kinds: Option<&BTreeSet<String>>,
) -> bool {
    let in_collection = |far: &NodeId| graph.node(far).is_some_and(|n| n.collection == collection);
    graph
        .out_edges(id)
        .any(|e| kind_allowed(e, kinds) && in_collection(&e.dst))
        || graph
            .in_edges(id)
            .any(|e| kind_allowed(e, kinds) && in_collection(&e.src))
}
