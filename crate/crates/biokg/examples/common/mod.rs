// Shared by the examples: locate the fixture corpus and build the demo graph.
#![allow(dead_code)]

use std::path::PathBuf;

use biokg::Pipeline;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn example_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
}

/// All three sources plus the handbook, not yet linked.
pub fn ingested() -> biokg::Result<Pipeline> {
    let mut p = Pipeline::new();
    for (descriptor, records) in [
        ("compound.descriptor", "compounds.jsonl"),
        ("uniprot.descriptor", "uniprot.jsonl"),
        ("cazy.descriptor", "cazy.jsonl"),
    ] {
        p.ingest_file(&fixture(descriptor), &fixture(records))?;
    }
    p.ingest_documents(&fixture("docs"))?;
    Ok(p)
}
