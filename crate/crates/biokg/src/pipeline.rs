//! End-to-end build: ingest sources and documents, then link.
//!
//! A [`Pipeline`] owns the graph plus the entity documents produced by
//! ingestion, which the linking stage needs to materialize concepts and
//! resolve label relations. [`Pipeline::save`] writes both to a graph
//! directory so that separate CLI invocations can continue the build.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::documents::{ingest_document, read_document, DocumentReport, ParsedDocument};
use crate::error::{Error, Result};
use crate::graph::snapshot::{self, for_each_record, write_lines};
use crate::graph::{load_snapshot, save_snapshot, Graph, NodeId};
use crate::ingest::{
    ingest_source, load_descriptor, EntityDocument, IngestReport, RawRecord, RecordReader,
};
use crate::linker::{materialize_concepts, resolve_relations, LinkReport};
use crate::ner::{run_ner, Fact, Mention, NerReport, DEFAULT_MIN_SURFACE_LEN};

pub const ENTITIES_FILE: &str = "entities.jsonl";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkSummary {
    pub concepts: LinkReport,
    pub relations: LinkReport,
    pub ner: NerReport,
}

#[derive(Debug, Clone, Default)]
pub struct LinkOutcome {
    pub summary: LinkSummary,
    pub mentions: Vec<Mention>,
    pub facts: Vec<Fact>,
}

#[derive(Debug, Default)]
pub struct Pipeline {
    graph: Graph,
    entities: BTreeMap<NodeId, EntityDocument>,
    min_surface_len: usize,
}

impl Pipeline {
    pub fn new() -> Self {
        Pipeline {
            graph: Graph::new(),
            entities: BTreeMap::new(),
            min_surface_len: DEFAULT_MIN_SURFACE_LEN,
        }
    }

    pub fn with_min_surface_len(mut self, n: usize) -> Self {
        self.min_surface_len = n;
        self
    }

    /// Opens a graph directory. A missing directory yields an empty pipeline.
    pub fn open(dir: &Path) -> Result<Self> {
        let mut p = Pipeline::new();
        if !snapshot::exists(dir) {
            return Ok(p);
        }
        p.graph = load_snapshot(dir)?;
        let path = dir.join(ENTITIES_FILE);
        if path.is_file() {
            for_each_record(&path, |_, doc: EntityDocument| {
                p.remember(doc);
                Ok(())
            })?;
        }
        Ok(p)
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        save_snapshot(&self.graph, dir)?;
        write_lines(&dir.join(ENTITIES_FILE), self.entities.values())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_mut(&mut self) -> &mut Graph {
        &mut self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn entities(&self) -> impl Iterator<Item = &EntityDocument> {
        self.entities.values()
    }

    fn remember(&mut self, doc: EntityDocument) {
        match self.entities.get_mut(&doc.node.id) {
            Some(known) => {
                known.node.merge_from(&doc.node);
                for c in doc.concepts {
                    if !known.concepts.contains(&c) {
                        known.concepts.push(c);
                    }
                }
                for r in doc.relations {
                    if !known.relations.contains(&r) {
                        known.relations.push(r);
                    }
                }
            }
            None => {
                self.entities.insert(doc.node.id.clone(), doc);
            }
        }
    }

    pub fn ingest_records<I>(&mut self, descriptor_text: &str, records: I) -> Result<IngestReport>
    where
        I: IntoIterator<Item = Result<RawRecord>>,
    {
        let descriptor = load_descriptor(descriptor_text, self.graph.registry_mut())?;
        let (report, docs) = ingest_source(records, &descriptor, &mut self.graph)?;
        for d in docs {
            self.remember(d);
        }
        Ok(report)
    }

    /// Ingests a line-delimited JSON file described by a descriptor file.
    pub fn ingest_file(&mut self, descriptor: &Path, records: &Path) -> Result<IngestReport> {
        let text = std::fs::read_to_string(descriptor)
            .map_err(|e| Error::io(format!("reading {}", descriptor.display()), e))?;
        let source = load_descriptor(&text, &mut self.graph.registry().clone())?.source_name;
        let reader = RecordReader::open(records, &source)?;
        self.ingest_records(&text, reader)
    }

    pub fn ingest_document(&mut self, doc: &ParsedDocument) -> Result<DocumentReport> {
        ingest_document(doc, &mut self.graph)
    }

    /// Ingests a single document file, or every `*.json` file of a
    /// directory in name order.
    pub fn ingest_documents(&mut self, path: &Path) -> Result<DocumentReport> {
        let files = document_files(path)?;
        let mut total = DocumentReport::default();
        for f in files {
            let r = self.ingest_document(&read_document(&f)?)?;
            total.documents += r.documents;
            total.segments_inserted += r.segments_inserted;
            total.segments_merged += r.segments_merged;
            total.skipped_elements += r.skipped_elements;
        }
        Ok(total)
    }

    /// Concepts, then relations, then NER over all document segments.
    /// Running it again on an unchanged pipeline creates nothing new.
    pub fn link(&mut self) -> Result<LinkOutcome> {
        let concepts = materialize_concepts(self.entities.values(), &mut self.graph)?;
        let relations = resolve_relations(self.entities.values(), &mut self.graph)?;
        let ner = run_ner(&mut self.graph, self.min_surface_len)?;
        Ok(LinkOutcome {
            summary: LinkSummary {
                concepts,
                relations,
                ner: ner.report,
            },
            mentions: ner.mentions,
            facts: ner.facts,
        })
    }

    pub fn freeze(&mut self) {
        self.graph.freeze();
    }
}

fn document_files(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let entries =
        std::fs::read_dir(path).map_err(|e| Error::io(format!("listing {}", path.display()), e))?;
    let mut files = Vec::new();
    for entry in entries {
        let p = entry
            .map_err(|e| Error::io(format!("listing {}", path.display()), e))?
            .path();
        if p.is_file() && p.extension().is_some_and(|x| x == "json") {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}
