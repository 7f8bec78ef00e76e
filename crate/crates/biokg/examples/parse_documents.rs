//! Split a handbook-style document into segments and flatten its table.
//!
//!     cargo run --example parse_documents

mod common;

use biokg::documents::{flatten_table, read_document, SegmentKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = read_document(&common::fixture("docs/handbook_trehalose.json"))?;
    println!(
        "{} ({} segments, {} skipped)",
        doc.doc_id,
        doc.segments.len(),
        doc.skipped_elements
    );
    for seg in &doc.segments {
        let preview = match (&seg.text, &seg.table) {
            (Some(t), _) => t.chars().take(60).collect::<String>(),
            (_, Some(grid)) => format!("{} x {} table", grid.len(), grid[0].len()),
            _ => String::new(),
        };
        println!("  [{:>2}] {:<14} {preview}", seg.index, seg.kind.as_str());
    }
    for seg in doc.segments.iter().filter(|s| s.kind == SegmentKind::Table) {
        println!("\ntriples from {}:", seg.segment_id);
        for t in flatten_table(seg)? {
            println!("  row {} {:>20} = {}", t.row, t.header, t.value);
        }
    }
    Ok(())
}
