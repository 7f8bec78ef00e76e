//! Parsed-document ingestion.
//!
//! Input is a JSON document emulating the output of a PDF-to-JSON
//! converter:
//!
//! ```json
//! {
//!   "doc_id": "handbook-ch12",
//!   "title": "Trehalose metabolism",
//!   "elements": [
//!     {"kind": "abstract", "text": "..."},
//!     {"kind": "section_title", "text": "..."},
//!     {"kind": "paragraph", "text": "..."},
//!     {"kind": "table", "cells": [["name", "mass"], ["trehalose", "342.3"]]},
//!     {"kind": "figure", "caption": "..."}
//!   ]
//! }
//! ```
//!
//! A non-empty `title` becomes segment 0. Element kinds other than `title`,
//! `abstract`, `section_title`, `paragraph` and `table` are skipped and
//! counted. The first table row is the header row.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::model::DOCUMENT_COLLECTION;
use crate::graph::{Graph, Node, NodeId, Scalar, Upsert};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Title,
    Abstract,
    SectionTitle,
    Paragraph,
    Table,
}

impl SegmentKind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "title" => SegmentKind::Title,
            "abstract" => SegmentKind::Abstract,
            "section_title" => SegmentKind::SectionTitle,
            "paragraph" => SegmentKind::Paragraph,
            "table" => SegmentKind::Table,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SegmentKind::Title => "title",
            SegmentKind::Abstract => "abstract",
            SegmentKind::SectionTitle => "section_title",
            SegmentKind::Paragraph => "paragraph",
            SegmentKind::Table => "table",
        }
    }
}

impl fmt::Display for SegmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentSegment {
    pub segment_id: NodeId,
    pub doc_id: String,
    pub index: usize,
    pub kind: SegmentKind,
    pub text: Option<String>,
    /// Row-major cells, first row is the header.
    pub table: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedDocument {
    pub doc_id: String,
    pub title: String,
    pub segments: Vec<DocumentSegment>,
    pub skipped_elements: usize,
}

fn doc_error(path: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Document {
        path: path.into(),
        reason: reason.into(),
    }
}

fn cell_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Null => Some(String::new()),
        _ => None,
    }
}

pub fn parse_document(json_text: &str) -> Result<ParsedDocument> {
    let root: Value = serde_json::from_str(json_text)
        .map_err(|e| doc_error("$", format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| doc_error("$", "document must be a JSON object"))?;
    let doc_id = match obj.get("doc_id") {
        Some(Value::String(s)) if !s.trim().is_empty() => s.trim().to_string(),
        _ => return Err(doc_error("$.doc_id", "missing document identifier")),
    };
    let title = match obj.get("title") {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.trim().to_string(),
        Some(_) => return Err(doc_error("$.title", "title must be a string")),
    };
    let elements = match obj.get("elements") {
        None => &[][..],
        Some(Value::Array(a)) => a.as_slice(),
        Some(_) => return Err(doc_error("$.elements", "elements must be an array")),
    };

    let mut segments = Vec::new();
    let mut push = |kind: SegmentKind, text: Option<String>, table: Option<Vec<Vec<String>>>| {
        let index = segments.len();
        NodeId::segment(&doc_id, index).map(|segment_id| {
            segments.push(DocumentSegment {
                segment_id,
                doc_id: doc_id.clone(),
                index,
                kind,
                text,
                table,
            })
        })
    };
    if !title.is_empty() {
        push(SegmentKind::Title, Some(title.clone()), None)?;
    }

    let mut skipped = 0;
    for (i, element) in elements.iter().enumerate() {
        let path = format!("$.elements[{i}]");
        let kind = element.get("kind").and_then(Value::as_str);
        let Some(kind) = kind.and_then(SegmentKind::parse) else {
            log::debug!("{doc_id}: skipping element {path} of kind {kind:?}");
            skipped += 1;
            continue;
        };
        if kind == SegmentKind::Table {
            let rows = element
                .get("cells")
                .and_then(Value::as_array)
                .ok_or_else(|| doc_error(format!("{path}.cells"), "table needs a cells grid"))?;
            let mut grid = Vec::with_capacity(rows.len());
            for (r, row) in rows.iter().enumerate() {
                let row_path = format!("{path}.cells[{r}]");
                let cells = row
                    .as_array()
                    .ok_or_else(|| doc_error(&row_path, "row must be an array"))?;
                let cells: Vec<String> = cells
                    .iter()
                    .map(cell_text)
                    .collect::<Option<_>>()
                    .ok_or_else(|| doc_error(&row_path, "cells must be scalars"))?;
                if let Some(first) = grid.first().map(Vec::len) {
                    if cells.len() != first {
                        return Err(doc_error(
                            row_path,
                            format!(
                                "ragged table: row has {} cells, header has {first}",
                                cells.len()
                            ),
                        ));
                    }
                }
                grid.push(cells);
            }
            if grid.is_empty() || grid[0].is_empty() {
                return Err(doc_error(format!("{path}.cells"), "table is empty"));
            }
            push(kind, None, Some(grid))?;
        } else {
            let text = element
                .get("text")
                .and_then(Value::as_str)
                .ok_or_else(|| doc_error(format!("{path}.text"), "missing text"))?;
            push(kind, Some(text.to_string()), None)?;
        }
    }
    if segments.is_empty() {
        return Err(doc_error("$", "document has no segments"));
    }
    Ok(ParsedDocument {
        doc_id,
        title,
        segments,
        skipped_elements: skipped,
    })
}

pub fn read_document(path: &Path) -> Result<ParsedDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    parse_document(&text).map_err(|e| match e {
        Error::Document { path: p, reason } => Error::Document {
            path: format!("{}:{p}", path.display()),
            reason,
        },
        other => other,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableTriple {
    pub row: usize,
    pub header: String,
    pub value: String,
}

/// One triple per data cell outside column 0, paired with its column
/// header. Column 0 holds the row-entity label.
pub fn flatten_table(segment: &DocumentSegment) -> Result<Vec<TableTriple>> {
    let grid = match (&segment.kind, &segment.table) {
        (SegmentKind::Table, Some(grid)) => grid,
        _ => {
            return Err(doc_error(
                segment.segment_id.as_str(),
                "flatten_table needs a table segment",
            ))
        }
    };
    if grid.len() < 2 {
        log::warn!("{}: table has no data rows", segment.segment_id);
        return Ok(Vec::new());
    }
    let header = &grid[0];
    let mut out = Vec::new();
    for (r, row) in grid.iter().enumerate().skip(1) {
        if row.len() != header.len() {
            return Err(doc_error(
                format!("{}:row {r}", segment.segment_id),
                "ragged table",
            ));
        }
        for (c, value) in row.iter().enumerate().skip(1) {
            out.push(TableTriple {
                row: r,
                header: header[c].clone(),
                value: value.clone(),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentReport {
    pub documents: usize,
    pub segments_inserted: usize,
    pub segments_merged: usize,
    pub skipped_elements: usize,
}

fn segment_label(doc: &ParsedDocument, seg: &DocumentSegment) -> String {
    let name = if doc.title.is_empty() {
        &doc.doc_id
    } else {
        &doc.title
    };
    format!("{name} [{} {}]", seg.kind, seg.index)
}

/// Upserts every segment as a node of the `document` collection.
pub fn ingest_document(doc: &ParsedDocument, graph: &mut Graph) -> Result<DocumentReport> {
    graph.register_collection(DOCUMENT_COLLECTION)?;
    let mut report = DocumentReport {
        documents: 1,
        skipped_elements: doc.skipped_elements,
        ..Default::default()
    };
    for seg in &doc.segments {
        let mut node = Node::new(
            seg.segment_id.clone(),
            DOCUMENT_COLLECTION,
            segment_label(doc, seg),
        )
        .with_property("doc_id", doc.doc_id.as_str())
        .with_property("segment_kind", seg.kind.as_str())
        .with_property("segment_index", Scalar::Int(seg.index as i64));
        if !doc.title.is_empty() {
            node = node.with_property("doc_title", doc.title.as_str());
        }
        if let Some(text) = &seg.text {
            node = node.with_property("text", text.as_str());
        }
        if let Some(grid) = &seg.table {
            node = node.with_property("table", serde_json::to_string(grid)?);
        }
        match graph.upsert_node(node)? {
            Upsert::Inserted => report.segments_inserted += 1,
            Upsert::Merged => report.segments_merged += 1,
        }
    }
    Ok(report)
}

/// Rebuilds segments from the document nodes of a graph, ordered by
/// document id and segment index.
pub fn segments_from_graph(graph: &Graph) -> Result<Vec<DocumentSegment>> {
    let mut out = Vec::new();
    for node in graph.find_nodes(Some(DOCUMENT_COLLECTION), None)? {
        let get = |k: &str| node.properties.get(k).and_then(|v| v.first());
        let bad = |what: &str| doc_error(node.id.as_str(), format!("segment node lacks {what}"));
        let doc_id = get("doc_id").ok_or_else(|| bad("doc_id"))?.to_string();
        let index = match get("segment_index") {
            Some(Scalar::Int(i)) if *i >= 0 => *i as usize,
            _ => return Err(bad("segment_index")),
        };
        let kind = get("segment_kind")
            .and_then(Scalar::as_text)
            .and_then(SegmentKind::parse)
            .ok_or_else(|| bad("segment_kind"))?;
        let text = get("text").map(ToString::to_string);
        let table = match get("table") {
            Some(Scalar::Text(json)) => Some(serde_json::from_str(json)?),
            _ => None,
        };
        out.push(DocumentSegment {
            segment_id: node.id.clone(),
            doc_id,
            index,
            kind,
            text,
            table,
        });
    }
    out.sort_by(|a, b| (&a.doc_id, a.index).cmp(&(&b.doc_id, b.index)));
    Ok(out)
}
