mod common;

use std::collections::{BTreeMap, BTreeSet};

use biokg::documents::segments_from_graph;
use biokg::graph::model::{COOCCURS_WITH, FACT, MENTIONED_IN, SHARES_FACT};
use biokg::graph::{NodeId, PropValue};
use biokg::ner::{normalize_surface, recognize, Gazetteer};

/// A (row, column) cell or a (start, end) span.
type Cell = (usize, usize);

fn id(s: &str) -> NodeId {
    NodeId::parse(s).unwrap()
}

/// Distinct normalized labels and synonyms of at least three characters,
/// computed from the raw fixture records.
fn surface_oracle() -> BTreeSet<String> {
    let fields = [
        ("compounds.jsonl", ["Name", "Synonyms", ""]),
        (
            "uniprot.jsonl",
            ["Protein names", "Gene names", "Entry name"],
        ),
        ("cazy.jsonl", ["Protein Name", "", ""]),
    ];
    let mut out = BTreeSet::new();
    for (file, names) in fields {
        for r in common::raw_records(file) {
            for f in names.iter().filter(|f| !f.is_empty()) {
                for s in common::strings(&r, f) {
                    let key = s
                        .split_whitespace()
                        .collect::<Vec<_>>()
                        .join(" ")
                        .to_lowercase();
                    if key.chars().count() >= 3 {
                        out.insert(key);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn gazetteer_size_matches_set_oracle() {
    let p = common::linked();
    let gazetteer = Gazetteer::build(p.graph());
    let keys: BTreeSet<String> = gazetteer.entries().map(|(k, _)| k.to_string()).collect();
    assert_eq!(keys, surface_oracle());
    // the two TreT proteins share the gene name
    assert_eq!(gazetteer.get("tret").unwrap().len(), 2);
    for (_, ids) in gazetteer.entries() {
        assert!(ids.iter().all(|i| p.graph().contains(i)));
    }
}

#[test]
fn mentions_are_well_formed() {
    let p = common::linked();
    let g = p.graph();
    let gazetteer = Gazetteer::build(g);
    for seg in segments_from_graph(g).unwrap() {
        let mentions = recognize(&seg, &gazetteer);
        let mut by_place: BTreeMap<Option<Cell>, BTreeSet<Cell>> = BTreeMap::new();
        for m in &mentions {
            let text = match m.cell {
                Some((r, c)) => seg.table.as_ref().unwrap()[r][c].clone(),
                None => seg.text.clone().unwrap(),
            };
            let chars: Vec<char> = text.chars().collect();
            assert!(m.span.1 <= chars.len() && m.span.0 < m.span.1);
            let surface: String = chars[m.span.0..m.span.1].iter().collect();
            assert_eq!(surface, m.surface);
            let key = normalize_surface(&surface);
            assert!(gazetteer.get(&key).unwrap().contains(&m.node_id));
            by_place.entry(m.cell).or_default().insert(m.span);
        }
        for spans in by_place.values() {
            let spans: Vec<_> = spans.iter().collect();
            assert!(
                spans.windows(2).all(|w| w[0].1 <= w[1].0),
                "overlap in {}",
                seg.segment_id
            );
        }
    }
    for e in g.edges().filter(|e| e.kind == MENTIONED_IN) {
        let surface = e.properties["surface"].first().unwrap().to_string();
        assert!(gazetteer.get(&surface).is_some(), "{surface}");
    }
}

#[test]
fn comention_in_two_segments_counts_two() {
    let p = common::linked();
    let trehalose = id("pubchem:compound:7427");
    let starch = id("pubchem:compound:24836924");
    let edge = p
        .graph()
        .edges()
        .find(|e| e.kind == COOCCURS_WITH && e.src == trehalose && e.dst == starch)
        .expect("trehalose and starch co-occur");
    assert_eq!(edge.properties["count"], PropValue::single(2));
}

#[test]
fn table_facts_and_shared_values() {
    let p = common::linked();
    let g = p.graph();
    let facts: Vec<_> = g.edges().filter(|e| e.kind == FACT).collect();
    assert_eq!(facts.len(), 6);
    let predicates: BTreeSet<String> = facts
        .iter()
        .map(|e| e.properties["predicate"].first().unwrap().to_string())
        .collect();
    assert_eq!(
        predicates,
        BTreeSet::from([
            "molecular_weight".to_string(),
            "raw:Relative sweetness".to_string()
        ])
    );
    // trehalose, sucrose and maltose all weigh 342.30: three pairs, both ways
    let shared: Vec<_> = g.edges().filter(|e| e.kind == SHARES_FACT).collect();
    assert_eq!(shared.len(), 6);
    assert!(shared
        .iter()
        .all(|e| e.properties["predicate"] == PropValue::single("molecular_weight")));
}

#[test]
fn concept_bridge_crosses_sources() {
    let p = common::linked();
    let g = p.graph();
    let ec = id("concept:ec_number:3.1.3.12");
    let carriers: BTreeSet<String> = g.in_edges(&ec).map(|e| e.src.to_string()).collect();
    assert_eq!(
        carriers,
        BTreeSet::from([
            "cazy:cazy:CAA98987.1".to_string(),
            "uniprot:uniprot:Q0DZ48".to_string()
        ])
    );
    // a shared concept is not a direct link, so TPP1 still counts as absent from CAZy
    assert!(g
        .out_edges(&id("uniprot:uniprot:Q0DZ48"))
        .all(|e| !e.dst.as_str().starts_with("cazy:")));
}
