//! Graph directory persistence.
//!
//! A snapshot directory holds `manifest.json`, `nodes.jsonl` and
//! `edges.jsonl`. Each `.jsonl` file carries one JSON object per line with
//! exactly the keys of [`Node`] / [`Edge`]; unknown keys are rejected.
//! Nodes are written in id order and edges in `(src, dst, kind, properties)`
//! order so that two saves of equal graphs are byte-identical.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::model::{canonical_properties, Edge, Node};
use super::store::Graph;
use crate::error::{Error, Result};
use crate::registry::KeyRegistry;

pub const FORMAT_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";
pub const NODES_FILE: &str = "nodes.jsonl";
pub const EDGES_FILE: &str = "edges.jsonl";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format_version: u32,
    pub collections: Vec<String>,
    pub normalized_keys: KeyRegistry,
    pub node_count: usize,
    pub edge_count: usize,
}

pub fn exists(dir: &Path) -> bool {
    dir.join(MANIFEST_FILE).is_file()
}

pub fn save_snapshot(graph: &Graph, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;

    write_lines(&dir.join(NODES_FILE), graph.nodes())?;

    let mut edges: Vec<(String, &Edge)> = graph
        .edges()
        .map(|e| (canonical_properties(&e.properties), e))
        .collect();
    edges.sort_by(|(pa, a), (pb, b)| {
        (&a.src, &a.dst, &a.kind, pa).cmp(&(&b.src, &b.dst, &b.kind, pb))
    });
    write_lines(&dir.join(EDGES_FILE), edges.iter().map(|(_, e)| *e))?;

    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        collections: graph.collections().iter().cloned().collect(),
        normalized_keys: graph.registry().clone(),
        node_count: graph.node_count(),
        edge_count: graph.edge_count(),
    };
    let text = serde_json::to_string_pretty(&manifest)?;
    write_atomic(&dir.join(MANIFEST_FILE), |w| writeln!(w, "{text}"))
}

/// Loads a snapshot into a fresh graph in build mode. Any malformed line
/// aborts the whole load.
pub fn load_snapshot(dir: &Path) -> Result<Graph> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&manifest_path)
        .map_err(|e| Error::io(format!("reading {}", manifest_path.display()), e))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::Parse {
        file: manifest_path.display().to_string(),
        line: e.line(),
        reason: e.to_string(),
    })?;
    if manifest.format_version != FORMAT_VERSION {
        return Err(Error::Parse {
            file: manifest_path.display().to_string(),
            line: 1,
            reason: format!("unsupported format version {}", manifest.format_version),
        });
    }

    let mut graph = Graph::new();
    graph.registry_mut().extend(&manifest.normalized_keys);
    for c in &manifest.collections {
        graph.register_collection(c)?;
    }

    let nodes_path = dir.join(NODES_FILE);
    for_each_record::<Node>(&nodes_path, |line, node| {
        graph.upsert_node(node).map(drop).map_err(|e| Error::Parse {
            file: nodes_path.display().to_string(),
            line,
            reason: e.to_string(),
        })
    })?;
    let edges_path = dir.join(EDGES_FILE);
    for_each_record::<Edge>(&edges_path, |line, edge| {
        graph.add_edge(edge).map(drop).map_err(|e| Error::Parse {
            file: edges_path.display().to_string(),
            line,
            reason: e.to_string(),
        })
    })?;
    Ok(graph)
}

/// Reads a line-delimited JSON file, calling `f` with the 1-based line
/// number of every non-blank record.
pub fn for_each_record<T: for<'de> Deserialize<'de>>(
    path: &Path,
    mut f: impl FnMut(usize, T) -> Result<()>,
) -> Result<()> {
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: T = serde_json::from_str(&line).map_err(|e| Error::Parse {
            file: path.display().to_string(),
            line: i + 1,
            reason: e.to_string(),
        })?;
        f(i + 1, record)?;
    }
    Ok(())
}

pub fn write_lines<'a, T: Serialize + 'a>(
    path: &Path,
    records: impl IntoIterator<Item = &'a T>,
) -> Result<()> {
    write_atomic(path, |w| {
        for r in records {
            let line = serde_json::to_string(r).map_err(std::io::Error::other)?;
            writeln!(w, "{line}")?;
        }
        Ok(())
    })
}

fn write_atomic(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let ctx = || format!("writing {}", path.display());
    let file = File::create(&tmp).map_err(|e| Error::io(ctx(), e))?;
    let mut w = BufWriter::new(file);
    body(&mut w).map_err(|e| Error::io(ctx(), e))?;
    w.flush().map_err(|e| Error::io(ctx(), e))?;
    drop(w);
    fs::rename(&tmp, path).map_err(|e| Error::io(ctx(), e))
}
