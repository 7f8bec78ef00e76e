use std::collections::{BTreeMap, BTreeSet};

use aho_corasick::{AhoCorasick, AhoCorasickBuilder, MatchKind};

use crate::graph::model::{CONCEPT_COLLECTION, DOCUMENT_COLLECTION};
use crate::graph::{Graph, NodeId};

pub const DEFAULT_MIN_SURFACE_LEN: usize = 3;

/// Case-fold and collapse whitespace runs to a single space.
pub fn normalize_surface(s: &str) -> String {
    s.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Dictionary of entity surface forms.
///
/// Keys are normalized surfaces of at least `min_len` characters; each key
/// maps to every node carrying it as label or synonym.
#[derive(Debug, Clone)]
pub struct Gazetteer {
    entries: BTreeMap<String, Vec<NodeId>>,
    keys: Vec<String>,
    automaton: Option<AhoCorasick>,
    min_len: usize,
}

impl Gazetteer {
    /// Labels and synonyms of every node outside the `document` and
    /// `concept` collections.
    pub fn build(graph: &Graph) -> Self {
        Self::build_with(graph, DEFAULT_MIN_SURFACE_LEN)
    }

    pub fn build_with(graph: &Graph, min_len: usize) -> Self {
        let pairs = graph
            .nodes()
            .filter(|n| n.collection != DOCUMENT_COLLECTION && n.collection != CONCEPT_COLLECTION)
            .flat_map(|n| n.names().map(move |s| (s.to_string(), n.id.clone())));
        Self::from_entries(pairs, min_len)
    }

    pub fn from_entries(pairs: impl IntoIterator<Item = (String, NodeId)>, min_len: usize) -> Self {
        let mut sets: BTreeMap<String, BTreeSet<NodeId>> = BTreeMap::new();
        for (surface, id) in pairs {
            let key = normalize_surface(&surface);
            if key.chars().count() >= min_len {
                sets.entry(key).or_default().insert(id);
            }
        }
        let entries: BTreeMap<String, Vec<NodeId>> = sets
            .into_iter()
            .map(|(k, ids)| (k, ids.into_iter().collect()))
            .collect();
        let keys: Vec<String> = entries.keys().cloned().collect();
        let automaton = (!keys.is_empty()).then(|| {
            AhoCorasickBuilder::new()
                .match_kind(MatchKind::Standard)
                .build(&keys)
                .expect("gazetteer automaton")
        });
        Gazetteer {
            entries,
            keys,
            automaton,
            min_len,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn min_len(&self) -> usize {
        self.min_len
    }

    pub fn get(&self, key: &str) -> Option<&[NodeId]> {
        self.entries.get(key).map(Vec::as_slice)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &[NodeId])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Every occurrence of every key in `haystack`, as `(start byte, end
    /// byte, key)`, overlapping matches included.
    pub(crate) fn find_all<'a>(&'a self, haystack: &str) -> Vec<(usize, usize, &'a str)> {
        let Some(ac) = &self.automaton else {
            return Vec::new();
        };
        ac.find_overlapping_iter(haystack)
            .map(|m| {
                (
                    m.start(),
                    m.end(),
                    self.keys[m.pattern().as_usize()].as_str(),
                )
            })
            .collect()
    }
}
