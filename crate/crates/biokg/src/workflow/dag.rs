use std::collections::{BTreeMap, BTreeSet};

use super::spec::Workflow;
use crate::error::{Error, Result};

/// Topological order of the steps; ties are broken by ascending step id.
///
/// Fails on a reference to an unknown step, on a cycle (reporting one cycle
/// as `a -> b -> ... -> a`) and on output steps that feed other steps.
pub fn validate_dag(workflow: &Workflow) -> Result<Vec<String>> {
    let mut pending: BTreeMap<&str, usize> = BTreeMap::new();
    let mut dependents: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for step in workflow.steps.values() {
        let distinct: BTreeSet<&str> = step.inputs.iter().map(String::as_str).collect();
        for input in &distinct {
            if !workflow.steps.contains_key(*input) {
                return Err(Error::workflow(
                    &step.id,
                    format!("input `{input}` does not name a step"),
                ));
            }
            dependents.entry(input).or_default().push(&step.id);
        }
        pending.insert(&step.id, distinct.len());
    }

    let mut ready: BTreeSet<&str> = pending
        .iter()
        .filter(|(_, &n)| n == 0)
        .map(|(&id, _)| id)
        .collect();
    let mut order = Vec::with_capacity(pending.len());
    while let Some(id) = ready.pop_first() {
        order.push(id.to_string());
        for &dep in dependents.get(id).into_iter().flatten() {
            let n = pending.get_mut(dep).unwrap();
            *n -= 1;
            if *n == 0 {
                ready.insert(dep);
            }
        }
    }

    if order.len() < workflow.steps.len() {
        let done: BTreeSet<&str> = order.iter().map(String::as_str).collect();
        return Err(Error::Cycle(find_cycle(workflow, &done)));
    }

    for step in workflow.outputs() {
        if dependents.contains_key(step.id.as_str()) {
            return Err(Error::workflow(
                &step.id,
                "output steps must be sinks, but this step feeds other steps",
            ));
        }
    }
    Ok(order)
}

/// Every unscheduled step has an unscheduled input, so walking inputs from
/// any of them must revisit a step.
fn find_cycle(workflow: &Workflow, done: &BTreeSet<&str>) -> Vec<String> {
    let start = workflow
        .steps
        .keys()
        .find(|k| !done.contains(k.as_str()))
        .expect("a leftover step");
    let mut path: Vec<&str> = Vec::new();
    let mut current = start.as_str();
    loop {
        if let Some(pos) = path.iter().position(|&p| p == current) {
            let mut cycle: Vec<String> = path[pos..].iter().rev().map(|s| s.to_string()).collect();
            cycle.push(cycle[0].clone());
            return cycle;
        }
        path.push(current);
        current = workflow.steps[current]
            .inputs
            .iter()
            .map(String::as_str)
            .filter(|i| !done.contains(i))
            .min()
            .expect("leftover step has a leftover input");
    }
}
