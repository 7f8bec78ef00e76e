//! Command-line front end over [`crate::pipeline::Pipeline`].
//!
//! Exit codes: 0 on success, 1 for invalid input or usage, 2 for I/O
//! failures (including a locked graph directory). Every command prints a
//! short human summary; `--report` / `--output` additionally write JSON.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analytics::{connected_components, degree_centrality, label_propagation_clusters};
use crate::error::{Error, Result};
use crate::graph::snapshot::write_lines;
use crate::graph::GraphStats;
use crate::pipeline::{LinkSummary, Pipeline};
use crate::workflow::{execute_with, parse_workflow, Schedule};

#[derive(Debug, Parser)]
#[command(
    name = "biokg",
    version,
    about = "Build and query a biological knowledge graph"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct GraphArg {
    /// Graph directory.
    #[arg(long, env = "BIOKG_GRAPH")]
    graph: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ingest a line-delimited JSON source described by a descriptor.
    Ingest {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        graph: GraphArg,
        /// Also write the report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Ingest a document JSON file or a directory of them.
    Docs {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        graph: GraphArg,
        /// Also write the report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Materialize concepts, resolve relations and run NER.
    Link {
        #[command(flatten)]
        graph: GraphArg,
        /// Also write the summary as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Directory for mentions.jsonl and facts.jsonl.
        #[arg(long)]
        audit: Option<PathBuf>,
    },
    /// Run a workflow against the graph.
    Query {
        #[arg(long)]
        workflow: PathBuf,
        #[command(flatten)]
        graph: GraphArg,
        /// Write the output nodes as line-delimited JSON records.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Run steps one at a time instead of in parallel waves.
        #[arg(long)]
        sequential: bool,
    },
    /// Node and edge counts.
    Stats {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Degree, components or clusters.
    Analytics {
        #[arg(value_enum)]
        metric: Metric,
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        collection: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a clean snapshot of the graph to another directory.
    Export {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Metric {
    Degree,
    Components,
    Clusters,
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_io() {
                2
            } else {
                1
            }
        }
    }
}

/// One output node of a query, as written by `query --output`.
#[derive(Serialize)]
struct QueryRecord<'a> {
    step: &'a str,
    id: &'a str,
    label: &'a str,
    collection: &'a str,
}

/// Exclusive hold on a graph directory for the lifetime of the value.
struct DirLock(PathBuf);

impl DirLock {
    fn acquire(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
        let path = dir.join(".lock");
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(DirLock(path))
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                Err(Error::Locked(dir.to_path_buf()))
            }
            Err(e) => Err(Error::io(format!("locking {}", dir.display()), e)),
        }
    }
}

impl Drop for DirLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

/// Prints the human summary and, when asked, writes the JSON form to a file.
fn emit<T: Serialize>(human: &str, value: &T, path: Option<&Path>) -> Result<()> {
    print!("{human}");
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(value)?;
        fs::write(p, format!("{text}\n"))
            .map_err(|e| Error::io(format!("writing {}", p.display()), e))?;
    }
    Ok(())
}

fn mutate(dir: &Path, f: impl FnOnce(&mut Pipeline) -> Result<()>) -> Result<()> {
    let _lock = DirLock::acquire(dir)?;
    let mut p = Pipeline::open(dir)?;
    f(&mut p)?;
    p.save(dir)
}

fn open_frozen(dir: &Path) -> Result<Pipeline> {
    if !crate::graph::snapshot::exists(dir) {
        return Err(Error::Usage(format!(
            "{} is not a graph directory",
            dir.display()
        )));
    }
    let mut p = Pipeline::open(dir)?;
    p.freeze();
    Ok(p)
}

fn stats_text(stats: &GraphStats) -> String {
    let mut out = format!("nodes {}\nedges {}\n", stats.node_count, stats.edge_count);
    for (c, n) in &stats.per_collection {
        out += &format!("  collection {c:<20} {n}\n");
    }
    for (k, n) in &stats.per_kind {
        out += &format!("  edge kind  {k:<20} {n}\n");
    }
    out
}

fn link_text(s: &LinkSummary) -> String {
    format!(
        "concepts   {} nodes, {} edges\n\
         relations  {} edges, {} unresolved, {} ambiguous\n\
         ner        {} segments, {} gazetteer keys, {} mentions, {} edges\n\
         facts      {} ({} table rows skipped), {} shared-fact edges\n",
        s.concepts.nodes_created,
        s.concepts.edges_created,
        s.relations.edges_created,
        s.relations.misses,
        s.relations.ambiguous,
        s.ner.segments,
        s.ner.gazetteer_entries,
        s.ner.mentions,
        s.ner.links.edges_created,
        s.ner.facts,
        s.ner.fact_rows_skipped,
        s.ner.fact_links,
    )
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Ingest {
            descriptor,
            input,
            graph,
            report,
        } => mutate(&graph.graph, |p| {
            let r = p.ingest_file(&descriptor, &input)?;
            let human = format!(
                "{}: {} inserted, {} merged, {} rejected, {} warnings, {} relation edges\n",
                r.source, r.inserted, r.merged, r.rejected, r.warnings, r.relation_edges
            );
            emit(&human, &r, report.as_deref())
        }),
        Command::Docs {
            input,
            graph,
            report,
        } => mutate(&graph.graph, |p| {
            let r = p.ingest_documents(&input)?;
            let human = format!(
                "{} documents: {} segments inserted, {} merged, {} elements skipped\n",
                r.documents, r.segments_inserted, r.segments_merged, r.skipped_elements
            );
            emit(&human, &r, report.as_deref())
        }),
        Command::Link {
            graph,
            report,
            audit,
        } => mutate(&graph.graph, |p| {
            let outcome = p.link()?;
            if let Some(dir) = &audit {
                fs::create_dir_all(dir)
                    .map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
                let mut mentions = outcome.mentions.clone();
                mentions.sort();
                write_lines(&dir.join("mentions.jsonl"), &mentions)?;
                write_lines(&dir.join("facts.jsonl"), &outcome.facts)?;
            }
            emit(
                &link_text(&outcome.summary),
                &outcome.summary,
                report.as_deref(),
            )
        }),
        Command::Query {
            workflow,
            graph,
            output,
            sequential,
        } => {
            let text = fs::read_to_string(&workflow)
                .map_err(|e| Error::io(format!("reading {}", workflow.display()), e))?;
            let wf = parse_workflow(&text)?;
            let p = open_frozen(&graph.graph)?;
            let schedule = if sequential {
                Schedule::Sequential
            } else {
                Schedule::Parallel
            };
            let run = execute_with(&wf, p.graph(), schedule)?;

            let mut human = String::new();
            let mut records = Vec::new();
            for r in run.output_results() {
                human += &format!("{} ({} nodes)\n", r.step_id, r.cardinality);
                for id in &r.node_ids {
                    let node = p
                        .graph()
                        .node(id)
                        .ok_or_else(|| Error::NodeNotFound(id.to_string()))?;
                    human += &format!("  {id}\t{}\t{}\n", node.label, node.collection);
                    records.push(QueryRecord {
                        step: &r.step_id,
                        id: id.as_str(),
                        label: &node.label,
                        collection: &node.collection,
                    });
                }
            }
            human += "trace:\n";
            for t in &run.trace.entries {
                human += &format!(
                    "  {:<24} {:<10} {:>8}  {:?}\n",
                    t.step_id, t.op, t.cardinality, t.elapsed
                );
            }
            print!("{human}");
            match output {
                Some(path) => write_lines(&path, &records),
                None => Ok(()),
            }
        }
        Command::Stats { graph, report } => {
            let stats = if crate::graph::snapshot::exists(&graph.graph) {
                Pipeline::open(&graph.graph)?.graph().stats()
            } else {
                GraphStats::default()
            };
            emit(&stats_text(&stats), &stats, report.as_deref())
        }
        Command::Analytics {
            metric,
            graph,
            collection,
            seed,
            max_iters,
            output,
        } => {
            let p = open_frozen(&graph.graph)?;
            let g = p.graph();
            match metric {
                Metric::Degree => {
                    let d = degree_centrality(g, collection.as_deref())?;
                    let mut ranked: Vec<_> = d.iter().collect();
                    ranked.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
                    let human: String = ranked
                        .iter()
                        .map(|(id, n)| format!("{n:>6}  {id}\n"))
                        .collect();
                    emit(&human, &d, output.as_deref())
                }
                Metric::Components => {
                    let cc = connected_components(g);
                    let human: String = cc
                        .iter()
                        .enumerate()
                        .map(|(i, c)| {
                            format!(
                                "component {i}: {} nodes, first {}\n",
                                c.len(),
                                c.first().map_or("", |id| id.as_str())
                            )
                        })
                        .collect();
                    emit(&human, &cc, output.as_deref())
                }
                Metric::Clusters => {
                    let clusters = label_propagation_clusters(g, max_iters, seed)?;
                    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
                    for c in clusters.values() {
                        *sizes.entry(*c).or_default() += 1;
                    }
                    let human: String = sizes
                        .iter()
                        .map(|(c, n)| format!("cluster {c}: {n} nodes\n"))
                        .collect();
                    emit(&human, &clusters, output.as_deref())
                }
            }
        }
        Command::Export { graph, out } => {
            if !crate::graph::snapshot::exists(&graph.graph) {
                return Err(Error::Usage(format!(
                    "{} is not a graph directory",
                    graph.graph.display()
                )));
            }
            let p = Pipeline::open(&graph.graph)?;
            let _lock = DirLock::acquire(&out)?;
            p.save(&out)?;
            emit(
                &format!(
                    "exported to {}\n{}",
                    out.display(),
                    stats_text(&p.graph().stats())
                ),
                &(),
                None,
            )
        }
    }
}
