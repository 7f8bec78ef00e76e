//! Build, link and query a heterogeneous biological knowledge graph.
//!
//! Structured sources are ingested through declarative descriptors,
//! documents are split into segments, and entities are connected through
//! shared concepts, declared relations and dictionary-based mentions. The
//! resulting graph can be queried with small DAG workflows and summarized
//! with a few graph analytics.

pub mod analytics;
pub mod cli;
pub mod documents;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod linker;
pub mod ner;
pub mod pipeline;
pub mod registry;
pub mod workflow;

pub use error::{Error, Result};
pub use pipeline::Pipeline;
