use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed node id `{0}`")]
    MalformedNodeId(String),

    #[error("invalid node `{id}`: {reason}")]
    InvalidNode { id: String, reason: String },

    #[error("collection `{0}` is not registered")]
    UnknownCollection(String),

    #[error("edge endpoint `{0}` does not exist")]
    DanglingEndpoint(String),

    #[error("node `{0}` not found")]
    NodeNotFound(String),

    #[error("graph is frozen; mutation rejected")]
    Frozen,

    #[error("graph must be frozen before {0}")]
    NotFrozen(&'static str),

    #[error("usage: {0}")]
    Usage(String),

    #[error("invalid EC number `{0}`")]
    InvalidEc(String),

    #[error("invalid {kind} value `{value}`")]
    InvalidConcept { kind: String, value: String },

    #[error("descriptor validation failed: {}", .0.join("; "))]
    Descriptor(Vec<String>),

    #[error("record rejected at {locator}: {reason}")]
    RecordRejected { locator: String, reason: String },

    #[error("document parse error at {path}: {reason}")]
    Document { path: String, reason: String },

    #[error("workflow error in step `{step}`: {reason}")]
    Workflow { step: String, reason: String },

    #[error("workflow contains a cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),

    #[error("{file}:{line}: {reason}")]
    Parse {
        file: String,
        line: usize,
        reason: String,
    },

    #[error("graph directory {0} is locked by another process")]
    Locked(PathBuf),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn workflow(step: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Workflow {
            step: step.into(),
            reason: reason.into(),
        }
    }

    /// True for failures of the environment rather than of the input.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Locked(_))
    }
}
