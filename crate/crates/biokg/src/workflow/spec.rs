//! Workflow file format.
//!
//! A workflow is a TOML document with a name and a list of steps. Each step
//! names its operation, its input steps and the operation's parameters.
//! At least one step carries `output = true`.
//!
//! ```toml
//! name = "example"
//!
//! [[steps]]
//! id = "seed"
//! op = "lookup"
//! collection = "compound"
//! label = "Trehalose"
//!
//! [[steps]]
//! id = "enzymes"
//! op = "traverse"
//! inputs = ["seed"]
//! edge_kinds = ["catalytic_activity"]
//! direction = "in"
//! depth = 1
//! target_collection = "uniprot"
//! output = true
//! ```
//!
//! | op           | inputs | parameters                                              |
//! |--------------|--------|---------------------------------------------------------|
//! | `lookup`     | 0      | `collection?`, `label?` (at least one)                  |
//! | `traverse`   | 1      | `direction`, `depth >= 1`, `edge_kinds?`, `target_collection?` |
//! | `filter`     | 1      | `key`, `comparator` (`eq`/`contains`/`exists`), `value` |
//! | `anti_join`  | 1      | `excluded_collection`, `edge_kinds?`                    |
//! | `limit`      | 1      | `n`                                                     |
//! | `intersect`, `union`, `difference` | >= 2 | none (difference = first minus the rest) |

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparator {
    Eq,
    Contains,
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operation {
    Lookup {
        collection: Option<String>,
        label: Option<String>,
    },
    Traverse {
        edge_kinds: Option<BTreeSet<String>>,
        direction: Direction,
        depth: usize,
        target_collection: Option<String>,
    },
    Filter {
        key: String,
        comparator: Comparator,
        value: Option<String>,
    },
    Intersect,
    Union,
    Difference,
    AntiJoin {
        excluded_collection: String,
        edge_kinds: Option<BTreeSet<String>>,
    },
    Limit {
        n: usize,
    },
}

impl Operation {
    pub fn name(&self) -> &'static str {
        match self {
            Operation::Lookup { .. } => "lookup",
            Operation::Traverse { .. } => "traverse",
            Operation::Filter { .. } => "filter",
            Operation::Intersect => "intersect",
            Operation::Union => "union",
            Operation::Difference => "difference",
            Operation::AntiJoin { .. } => "anti_join",
            Operation::Limit { .. } => "limit",
        }
    }

    fn arity_ok(&self, inputs: usize) -> bool {
        match self {
            Operation::Lookup { .. } => inputs == 0,
            Operation::Traverse { .. }
            | Operation::Filter { .. }
            | Operation::AntiJoin { .. }
            | Operation::Limit { .. } => inputs == 1,
            Operation::Intersect | Operation::Union | Operation::Difference => inputs >= 2,
        }
    }

    fn arity_text(&self) -> &'static str {
        match self {
            Operation::Lookup { .. } => "no inputs",
            Operation::Intersect | Operation::Union | Operation::Difference => "at least 2 inputs",
            _ => "exactly 1 input",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub id: String,
    pub inputs: Vec<String>,
    pub op: Operation,
    pub output: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workflow {
    pub name: String,
    pub steps: BTreeMap<String, Step>,
}

impl Workflow {
    pub fn outputs(&self) -> impl Iterator<Item = &Step> {
        self.steps.values().filter(|s| s.output)
    }

    pub fn to_toml(&self) -> String {
        let file = WorkflowFile {
            name: self.name.clone(),
            steps: self.steps.values().map(RawStep::from_step).collect(),
        };
        toml::to_string(&file).expect("workflows always serialize")
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    id: String,
    op: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    output: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    collection: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edge_kinds: Option<BTreeSet<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    direction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    depth: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target_collection: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    key: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    excluded_collection: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorkflowFile {
    name: String,
    #[serde(default)]
    steps: Vec<RawStep>,
}

impl RawStep {
    fn from_step(step: &Step) -> Self {
        let mut raw = RawStep {
            id: step.id.clone(),
            op: step.op.name().to_string(),
            inputs: step.inputs.clone(),
            output: step.output,
            ..RawStep::default()
        };
        match &step.op {
            Operation::Lookup { collection, label } => {
                raw.collection = collection.clone();
                raw.label = label.clone();
            }
            Operation::Traverse {
                edge_kinds,
                direction,
                depth,
                target_collection,
            } => {
                raw.edge_kinds = edge_kinds.clone();
                raw.direction = Some(
                    match direction {
                        Direction::Out => "out",
                        Direction::In => "in",
                        Direction::Both => "both",
                    }
                    .to_string(),
                );
                raw.depth = Some(*depth as i64);
                raw.target_collection = target_collection.clone();
            }
            Operation::Filter {
                key,
                comparator,
                value,
            } => {
                raw.key = Some(key.clone());
                raw.comparator = Some(
                    match comparator {
                        Comparator::Eq => "eq",
                        Comparator::Contains => "contains",
                        Comparator::Exists => "exists",
                    }
                    .to_string(),
                );
                raw.value = value.clone();
            }
            Operation::AntiJoin {
                excluded_collection,
                edge_kinds,
            } => {
                raw.excluded_collection = Some(excluded_collection.clone());
                raw.edge_kinds = edge_kinds.clone();
            }
            Operation::Limit { n } => raw.n = Some(*n as i64),
            Operation::Intersect | Operation::Union | Operation::Difference => {}
        }
        raw
    }

    fn into_step(self) -> Result<Step> {
        let id = self.id.clone();
        let err = |reason: String| Error::workflow(&id, reason);
        let mut used: Vec<&'static str> = Vec::new();
        let op = match self.op.as_str() {
            "lookup" => {
                used.extend(["collection", "label"]);
                if self.collection.is_none() && self.label.is_none() {
                    return Err(err("lookup needs `collection` or `label`".into()));
                }
                Operation::Lookup {
                    collection: self.collection.clone(),
                    label: self.label.clone(),
                }
            }
            "traverse" => {
                used.extend(["edge_kinds", "direction", "depth", "target_collection"]);
                let direction = self
                    .direction
                    .as_deref()
                    .ok_or_else(|| err("traverse needs `direction`".into()))?
                    .parse::<Direction>()
                    .map_err(|e| err(e.to_string()))?;
                let depth = match self.depth {
                    Some(d) if d >= 1 => d as usize,
                    Some(d) => return Err(err(format!("depth must be >= 1, got {d}"))),
                    None => return Err(err("traverse needs `depth`".into())),
                };
                Operation::Traverse {
                    edge_kinds: self.edge_kinds.clone(),
                    direction,
                    depth,
                    target_collection: self.target_collection.clone(),
                }
            }
            "filter" => {
                used.extend(["key", "comparator", "value"]);
                let key = self
                    .key
                    .clone()
                    .ok_or_else(|| err("filter needs `key`".into()))?;
                let comparator = match self.comparator.as_deref() {
                    Some("eq") => Comparator::Eq,
                    Some("contains") => Comparator::Contains,
                    Some("exists") => Comparator::Exists,
                    Some(other) => return Err(err(format!("unknown comparator `{other}`"))),
                    None => return Err(err("filter needs `comparator`".into())),
                };
                if comparator != Comparator::Exists && self.value.is_none() {
                    return Err(err(format!(
                        "filter `{}` needs `value`",
                        self.comparator.unwrap()
                    )));
                }
                Operation::Filter {
                    key,
                    comparator,
                    value: self.value.clone(),
                }
            }
            "anti_join" => {
                used.extend(["excluded_collection", "edge_kinds"]);
                Operation::AntiJoin {
                    excluded_collection: self
                        .excluded_collection
                        .clone()
                        .ok_or_else(|| err("anti_join needs `excluded_collection`".into()))?,
                    edge_kinds: self.edge_kinds.clone(),
                }
            }
            "limit" => {
                used.push("n");
                match self.n {
                    Some(n) if n >= 0 => Operation::Limit { n: n as usize },
                    Some(n) => return Err(err(format!("limit n must be >= 0, got {n}"))),
                    None => return Err(err("limit needs `n`".into())),
                }
            }
            "intersect" => Operation::Intersect,
            "union" => Operation::Union,
            "difference" => Operation::Difference,
            other => return Err(err(format!("unknown op `{other}`"))),
        };

        let given = [
            ("collection", self.collection.is_some()),
            ("label", self.label.is_some()),
            ("edge_kinds", self.edge_kinds.is_some()),
            ("direction", self.direction.is_some()),
            ("depth", self.depth.is_some()),
            ("target_collection", self.target_collection.is_some()),
            ("key", self.key.is_some()),
            ("comparator", self.comparator.is_some()),
            ("value", self.value.is_some()),
            ("excluded_collection", self.excluded_collection.is_some()),
            ("n", self.n.is_some()),
        ];
        let stray: Vec<&str> = given
            .iter()
            .filter(|(name, present)| *present && !used.contains(name))
            .map(|(name, _)| *name)
            .collect();
        if !stray.is_empty() {
            return Err(err(format!(
                "parameters {stray:?} do not apply to `{}`",
                op.name()
            )));
        }
        if !op.arity_ok(self.inputs.len()) {
            return Err(err(format!(
                "`{}` takes {}, got {}",
                op.name(),
                op.arity_text(),
                self.inputs.len()
            )));
        }
        Ok(Step {
            id: self.id,
            inputs: self.inputs,
            op,
            output: self.output,
        })
    }
}

/// Parses a workflow file. Checks step shape, parameters and arity; graph
/// structure (dangling inputs, cycles) is checked by
/// [`super::validate_dag`].
pub fn parse_workflow(text: &str) -> Result<Workflow> {
    let file: WorkflowFile =
        toml::from_str(text).map_err(|e| Error::workflow("<file>", e.message()))?;
    let mut steps = BTreeMap::new();
    for raw in file.steps {
        if raw.id.trim().is_empty() {
            return Err(Error::workflow("<unnamed>", "step id must not be empty"));
        }
        let step = raw.into_step()?;
        if steps.contains_key(&step.id) {
            return Err(Error::workflow(&step.id, "duplicate step id"));
        }
        steps.insert(step.id.clone(), step);
    }
    if steps.is_empty() {
        return Err(Error::workflow(&file.name, "workflow has no steps"));
    }
    if !steps.values().any(|s| s.output) {
        return Err(Error::workflow(
            &file.name,
            "no step is marked `output = true`",
        ));
    }
    Ok(Workflow {
        name: file.name,
        steps,
    })
}
