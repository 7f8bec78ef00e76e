//! The property graph: "linked collections of nodes", each node owned by
//! exactly one named collection.

pub mod model;
pub mod snapshot;
pub mod store;

pub use model::{
    Edge, EdgeKey, GraphStats, Method, Node, NodeId, PropValue, Properties, Provenance, Scalar,
};
pub use snapshot::{load_snapshot, save_snapshot};
pub use store::{Direction, EdgeInsert, Graph, Upsert};
