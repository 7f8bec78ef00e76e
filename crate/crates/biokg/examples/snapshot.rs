//! Save a linked graph to a directory, load it back and compare.
//!
//!     cargo run --example snapshot [DIR]

mod common;

use biokg::Pipeline;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("biokg-example-snapshot"));

    let mut p = common::ingested()?;
    p.link()?;
    p.save(&dir)?;
    println!("saved to {}", dir.display());

    let reloaded = Pipeline::open(&dir)?;
    println!(
        "stats equal after reload: {}",
        reloaded.graph().stats() == p.graph().stats()
    );
    println!(
        "graphs equal after reload: {}",
        reloaded.graph().graph_eq(p.graph())
    );
    println!(
        "{}",
        serde_json::to_string_pretty(&reloaded.graph().stats())?
    );
    Ok(())
}
