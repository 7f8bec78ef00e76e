//! Degree centrality, connected components and label-propagation clusters
//! over the linked demo graph.
//!
//!     cargo run --example analytics

mod common;

use std::collections::BTreeMap;

use biokg::analytics::{connected_components, degree_centrality, label_propagation_clusters};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut p = common::ingested()?;
    p.link()?;
    p.freeze();
    let g = p.graph();

    let mut degrees: Vec<_> = degree_centrality(g, Some("uniprot"))?.into_iter().collect();
    degrees.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    println!("most connected proteins:");
    for (id, d) in degrees.iter().take(5) {
        println!("  {d:>3}  {id}");
    }

    let components = connected_components(g);
    let sizes: Vec<usize> = components.iter().map(|c| c.len()).collect();
    println!("\n{} components, sizes {sizes:?}", components.len());

    let clusters = label_propagation_clusters(g, 100, 42)?;
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for c in clusters.values() {
        *sizes.entry(*c).or_default() += 1;
    }
    println!(
        "{} clusters; largest has {} nodes",
        sizes.len(),
        sizes.values().max().unwrap_or(&0)
    );
    Ok(())
}
