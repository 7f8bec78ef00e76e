//! Link the ingested corpus: shared concepts, declared relations, then
//! dictionary NER over the handbook with co-occurrence and table facts.
//!
//!     cargo run --example link_entities

mod common;

use biokg::graph::{Direction, NodeId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut p = common::ingested()?;
    let outcome = p.link()?;
    println!("{}", serde_json::to_string_pretty(&outcome.summary)?);

    // Two proteins from different sources meet at one EC concept node.
    let ec = NodeId::concept("ec_number", "3.1.3.12")?;
    let carriers: Vec<String> = p
        .graph()
        .neighbors(&ec, None, Direction::In)?
        .into_iter()
        .map(|(_, n)| format!("{} ({})", n.id, n.label))
        .collect();
    println!("\n{ec} is shared by:\n  {}", carriers.join("\n  "));

    println!("\nfacts:");
    for f in &outcome.facts {
        println!("  {} {} = {}", f.subject, f.predicate, f.value);
    }
    Ok(())
}
