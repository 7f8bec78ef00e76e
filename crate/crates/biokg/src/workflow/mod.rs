//! Query workflows: DAGs of set-valued steps over a frozen graph.

pub mod dag;
pub mod exec;
pub mod spec;

pub use dag::validate_dag;
pub use exec::{
    execute, execute_with, Execution, ExecutionTrace, Schedule, StepResult, TraceEntry,
};
pub use spec::{parse_workflow, Comparator, Operation, Step, Workflow};
