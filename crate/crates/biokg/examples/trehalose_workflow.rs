//! The trehalose case study: enzymes acting directly on trehalose that lack
//! any CAZy annotation, run from `examples/trehalose.workflow`.
//!
//!     cargo run --example trehalose_workflow

mod common;

use biokg::workflow::{execute_with, parse_workflow, validate_dag, Schedule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut p = common::ingested()?;
    p.link()?;
    p.freeze();

    let text = std::fs::read_to_string(common::example_file("trehalose.workflow"))?;
    let workflow = parse_workflow(&text)?;
    println!("order: {:?}", validate_dag(&workflow)?);

    let run = execute_with(&workflow, p.graph(), Schedule::Parallel)?;
    for t in &run.trace.entries {
        println!(
            "  {:<18} {:<10} {:>3} nodes in {:?}",
            t.step_id, t.op, t.cardinality, t.elapsed
        );
    }
    for result in run.output_results() {
        println!("\n{}:", result.step_id);
        for id in &result.node_ids {
            let node = p.graph().node(id).expect("result ids exist");
            println!("  {id}  {}", node.label);
        }
    }
    Ok(())
}
