//! Dictionary NER over document segments, co-occurrence linking and table
//! fact extraction.

pub mod gazetteer;
pub mod link;
pub mod recognize;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use gazetteer::{normalize_surface, Gazetteer, DEFAULT_MIN_SURFACE_LEN};
pub use link::{
    extract_facts, fact_predicate, link_mentions, link_shared_facts, Fact, FactExtraction,
};
pub use recognize::{match_text, recognize, Mention, TextMatch};

use crate::documents::{segments_from_graph, SegmentKind};
use crate::error::Result;
use crate::graph::Graph;
use crate::linker::LinkReport;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerReport {
    pub gazetteer_entries: usize,
    pub segments: usize,
    pub mentions: usize,
    pub links: LinkReport,
    pub facts: usize,
    pub fact_rows_skipped: usize,
    /// `shares_fact` edges created between entities with equal facts.
    pub fact_links: usize,
}

#[derive(Debug, Clone, Default)]
pub struct NerOutput {
    pub report: NerReport,
    pub mentions: Vec<Mention>,
    pub facts: Vec<Fact>,
}

/// Gazetteer build, recognition over every document segment in the graph,
/// mention linking, fact extraction and shared-fact linking, in that order.
pub fn run_ner(graph: &mut Graph, min_surface_len: usize) -> Result<NerOutput> {
    let gazetteer = Gazetteer::build_with(graph, min_surface_len);
    let segments = segments_from_graph(graph)?;
    let per_segment: Vec<Vec<Mention>> = segments
        .par_iter()
        .map(|s| recognize(s, &gazetteer))
        .collect();

    let mentions: Vec<Mention> = per_segment.iter().flatten().cloned().collect();
    let links = link_mentions(&mentions, graph)?;

    let mut facts = Vec::new();
    let mut skipped = 0;
    for (segment, ms) in segments.iter().zip(&per_segment) {
        if segment.kind != SegmentKind::Table {
            continue;
        }
        let column0: Vec<Mention> = ms
            .iter()
            .filter(|m| matches!(m.cell, Some((_, 0))))
            .cloned()
            .collect();
        let out = extract_facts(segment, &column0, graph)?;
        skipped += out.skipped_rows;
        facts.extend(out.facts);
    }
    let fact_links = link_shared_facts(&facts, graph)?;

    Ok(NerOutput {
        report: NerReport {
            gazetteer_entries: gazetteer.len(),
            segments: segments.len(),
            mentions: mentions.len(),
            links,
            facts: facts.len(),
            fact_rows_skipped: skipped,
            fact_links,
        },
        mentions,
        facts,
    })
}
