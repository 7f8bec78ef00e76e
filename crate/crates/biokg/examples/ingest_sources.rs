//! Ingest the three structured fixture sources through their descriptors
//! and show what each contributed.
//!
//!     cargo run --example ingest_sources

mod common;

use biokg::ingest::{load_descriptor, RawRecord};
use biokg::registry::KeyRegistry;
use biokg::Pipeline;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut p = Pipeline::new();
    for (descriptor, records) in [
        ("compound.descriptor", "compounds.jsonl"),
        ("uniprot.descriptor", "uniprot.jsonl"),
        ("cazy.descriptor", "cazy.jsonl"),
    ] {
        let report = p.ingest_file(&common::fixture(descriptor), &common::fixture(records))?;
        println!(
            "{:<8} inserted {:>2}  merged {}  rejected {}  warnings {:>2}  relation edges {}",
            report.source,
            report.inserted,
            report.merged,
            report.rejected,
            report.warnings,
            report.relation_edges
        );
    }

    // Records can also come from memory. A record without its id field is
    // rejected and counted, not fatal.
    let text = std::fs::read_to_string(common::fixture("compound.descriptor"))?;
    let mut registry = KeyRegistry::default();
    let descriptor = load_descriptor(&text, &mut registry)?;
    println!("\ncompound keys: {:?}", descriptor.normalized_keys());
    let broken = RawRecord::new("pubchem", [("Name".to_string(), "orphan".into())].into());
    let report = p.ingest_records(&text, [Ok(broken)])?;
    println!("in-memory record: rejected {}", report.rejected);

    let stats = p.graph().stats();
    println!("\n{} nodes: {:?}", stats.node_count, stats.per_collection);
    Ok(())
}
