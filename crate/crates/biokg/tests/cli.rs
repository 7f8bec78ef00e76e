mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn biokg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biokg"))
        .args(args)
        .env_remove("BIOKG_GRAPH")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = biokg(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build(graph: &Path) {
    for (d, r) in common::SOURCES {
        ok(&[
            "ingest",
            "--descriptor",
            s(&common::fixture(d)),
            "--input",
            s(&common::fixture(r)),
            "--graph",
            s(graph),
        ]);
    }
    ok(&[
        "docs",
        "--input",
        s(&common::fixture("docs")),
        "--graph",
        s(graph),
    ]);
    ok(&["link", "--graph", s(graph)]);
}

fn stats_json(graph: &Path, report: &Path) -> Value {
    ok(&["stats", "--graph", s(graph), "--report", s(report)]);
    serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap()
}

#[test]
fn stats_on_empty_dir_prints_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&["stats", "--graph", s(dir.path())]);
    assert!(out.contains("nodes 0") && out.contains("edges 0"), "{out}");
    let missing = dir.path().join("nope");
    assert!(ok(&["stats", "--graph", s(&missing)]).contains("nodes 0"));
}

#[test]
fn cyclic_workflow_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g");
    build(&graph);
    let wf = dir.path().join("cycle.workflow");
    std::fs::write(
        &wf,
        "name = \"loop\"\n[[steps]]\nid = \"a\"\nop = \"limit\"\nn = 1\ninputs = [\"b\"]\n\
         [[steps]]\nid = \"b\"\nop = \"limit\"\nn = 1\ninputs = [\"a\"]\n\
         [[steps]]\nid = \"c\"\nop = \"union\"\ninputs = [\"a\", \"b\"]\noutput = true\n",
    )
    .unwrap();
    let out = biokg(&["query", "--workflow", s(&wf), "--graph", s(&graph)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("cycle") && (err.contains("a -> b -> a") || err.contains("b -> a -> b")),
        "{err}"
    );
}

#[test]
fn usage_and_io_exit_codes() {
    assert_eq!(biokg(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(biokg(&["stats", "--bogus"]).status.code(), Some(1));
    assert_eq!(biokg(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let out = biokg(&[
        "ingest",
        "--descriptor",
        s(&common::fixture("uniprot.descriptor")),
        "--input",
        s(&dir.path().join("missing.jsonl")),
        "--graph",
        s(&dir.path().join("g")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let bad = dir.path().join("bad.descriptor");
    std::fs::write(&bad, "source_name = \"x\"\n").unwrap();
    let out = biokg(&[
        "ingest",
        "--descriptor",
        s(&bad),
        "--input",
        s(&common::fixture("uniprot.jsonl")),
        "--graph",
        s(&dir.path().join("g")),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn locked_graph_dir_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join(".lock"), "1").unwrap();
    let out = biokg(&[
        "docs",
        "--input",
        s(&common::fixture("docs")),
        "--graph",
        s(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("locked"));
}

#[test]
fn full_pipeline_matches_golden_output() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g");
    build(&graph);
    assert!(!graph.join(".lock").exists());

    let output = dir.path().join("result.jsonl");
    let stdout = ok(&[
        "query",
        "--workflow",
        s(&common::workflow_path()),
        "--graph",
        s(&graph),
        "--output",
        s(&output),
    ]);
    assert!(stdout.contains("uniprot:uniprot:P9WG59\tTrehalose 2-sulfotransferase\tuniprot"));
    assert!(stdout
        .contains("uniprot:uniprot:Q0DZ48\tProbable trehalose-phosphate phosphatase 1\tuniprot"));
    for step in ["trehalose", "trehalose_enzymes", "not_in_cazy"] {
        assert!(
            stdout.contains(&format!("  {step} ")),
            "trace lacks {step}:\n{stdout}"
        );
    }
    let golden = std::fs::read(common::fixture("golden/trehalose_query.jsonl")).unwrap();
    assert_eq!(std::fs::read(&output).unwrap(), golden);

    let sequential = dir.path().join("sequential.jsonl");
    ok(&[
        "query",
        "--workflow",
        s(&common::workflow_path()),
        "--graph",
        s(&graph),
        "--sequential",
        "--output",
        s(&sequential),
    ]);
    assert_eq!(std::fs::read(&sequential).unwrap(), golden);
}

#[test]
fn rerunning_ingest_and_link_keeps_stats() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g");
    build(&graph);
    let first = stats_json(&graph, &dir.path().join("s1.json"));
    build(&graph);
    let second = stats_json(&graph, &dir.path().join("s2.json"));
    assert_eq!(first, second);
    assert_eq!(first["node_count"], 84);
}

#[test]
fn export_then_load_reproduces_stats() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g");
    let out = dir.path().join("exported");
    build(&graph);
    ok(&["export", "--graph", s(&graph), "--out", s(&out)]);
    let a = stats_json(&graph, &dir.path().join("a.json"));
    let b = stats_json(&out, &dir.path().join("b.json"));
    assert_eq!(a, b);
    for f in ["nodes.jsonl", "edges.jsonl"] {
        assert_eq!(
            std::fs::read(graph.join(f)).unwrap(),
            std::fs::read(out.join(f)).unwrap()
        );
    }
}

#[test]
fn link_audit_and_analytics() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g");
    build(&graph);
    let audit = dir.path().join("audit");
    let report = dir.path().join("link.json");
    ok(&[
        "link",
        "--graph",
        s(&graph),
        "--audit",
        s(&audit),
        "--report",
        s(&report),
    ]);
    let facts = std::fs::read_to_string(audit.join("facts.jsonl")).unwrap();
    assert_eq!(facts.lines().count(), 6);
    let mentions = std::fs::read_to_string(audit.join("mentions.jsonl")).unwrap();
    assert!(mentions.contains("pubchem:compound:7427"));
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    // a second link adds nothing
    assert_eq!(summary["concepts"]["edges_created"], 0);
    assert_eq!(summary["ner"]["links"]["edges_created"], 0);

    let degree = dir.path().join("degree.json");
    ok(&[
        "analytics",
        "degree",
        "--graph",
        s(&graph),
        "--collection",
        "uniprot",
        "--output",
        s(&degree),
    ]);
    let d: Value = serde_json::from_str(&std::fs::read_to_string(&degree).unwrap()).unwrap();
    assert_eq!(d.as_object().unwrap().len(), 12);

    let c1 = dir.path().join("c1.json");
    let c2 = dir.path().join("c2.json");
    ok(&[
        "analytics",
        "clusters",
        "--graph",
        s(&graph),
        "--seed",
        "9",
        "--output",
        s(&c1),
    ]);
    ok(&[
        "analytics",
        "clusters",
        "--graph",
        s(&graph),
        "--seed",
        "9",
        "--output",
        s(&c2),
    ]);
    assert_eq!(std::fs::read(&c1).unwrap(), std::fs::read(&c2).unwrap());
    assert!(ok(&["analytics", "components", "--graph", s(&graph)]).contains("component 0"));
}

#[test]
fn graph_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_biokg"))
        .args(["docs", "--input", s(&common::fixture("docs"))])
        .env("BIOKG_GRAPH", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("manifest.json").is_file());
}
