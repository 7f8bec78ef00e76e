//! Leftmost-longest dictionary matching on word boundaries.

use serde::{Deserialize, Serialize};

use super::gazetteer::Gazetteer;
use crate::documents::DocumentSegment;
use crate::graph::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mention {
    pub node_id: NodeId,
    pub segment_id: NodeId,
    /// Character offsets `[start, end)` in the text (or table cell).
    pub span: (usize, usize),
    pub surface: String,
    /// `(row, column)` for mentions inside a table cell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell: Option<(usize, usize)>,
}

/// A text hit before it is expanded into one mention per candidate node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextMatch<'g> {
    pub span: (usize, usize),
    pub key: &'g str,
    pub surface: String,
}

/// Normalized text with, for every normalized character, the index of the
/// original character it came from.
struct Normalized {
    text: String,
    byte_to_char: Vec<usize>,
    origin: Vec<usize>,
}

impl Normalized {
    fn new(raw: &str) -> Self {
        let mut text = String::with_capacity(raw.len());
        let mut origin = Vec::with_capacity(raw.len());
        let mut last_space = false;
        for (ci, c) in raw.chars().enumerate() {
            if c.is_whitespace() {
                if !last_space {
                    text.push(' ');
                    origin.push(ci);
                    last_space = true;
                }
                continue;
            }
            last_space = false;
            for lc in c.to_lowercase() {
                text.push(lc);
                origin.push(ci);
            }
        }
        let mut byte_to_char = vec![usize::MAX; text.len() + 1];
        for (i, (b, _)) in text.char_indices().enumerate() {
            byte_to_char[b] = i;
        }
        byte_to_char[text.len()] = origin.len();
        Normalized {
            text,
            byte_to_char,
            origin,
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// Runs the matcher over free text.
pub fn match_text<'g>(text: &str, gazetteer: &'g Gazetteer) -> Vec<TextMatch<'g>> {
    let norm = Normalized::new(text);
    let chars: Vec<char> = norm.text.chars().collect();
    let raw_chars: Vec<char> = text.chars().collect();

    let mut candidates: Vec<(usize, usize, &str)> = gazetteer
        .find_all(&norm.text)
        .into_iter()
        .map(|(s, e, key)| (norm.byte_to_char[s], norm.byte_to_char[e], key))
        .filter(|&(s, e, _)| {
            let left_ok = s == 0 || !is_word_char(chars[s - 1]);
            let right_ok = e == chars.len() || !is_word_char(chars[e]);
            // never start or stop inside a multi-char lowercase expansion
            let whole_start = s == 0 || norm.origin[s - 1] != norm.origin[s];
            let whole_end = e == chars.len() || norm.origin[e - 1] != norm.origin[e];
            left_ok && right_ok && whole_start && whole_end
        })
        .collect();
    candidates.sort_by(|a, b| a.0.cmp(&b.0).then((b.1 - b.0).cmp(&(a.1 - a.0))));

    let mut out = Vec::new();
    let mut next_free = 0;
    for (s, e, key) in candidates {
        if s < next_free {
            continue;
        }
        next_free = e;
        let start = norm.origin[s];
        let end = norm.origin[e - 1] + 1;
        out.push(TextMatch {
            span: (start, end),
            key,
            surface: raw_chars[start..end].iter().collect(),
        });
    }
    out
}

fn expand(
    matches: Vec<TextMatch<'_>>,
    gazetteer: &Gazetteer,
    segment_id: &NodeId,
    cell: Option<(usize, usize)>,
    out: &mut Vec<Mention>,
) {
    for m in matches {
        for id in gazetteer.get(m.key).unwrap_or_default() {
            out.push(Mention {
                node_id: id.clone(),
                segment_id: segment_id.clone(),
                span: m.span,
                surface: m.surface.clone(),
                cell,
            });
        }
    }
}

/// Mentions in a segment. Tables are matched cell by cell; an ambiguous
/// surface yields one mention per candidate node at the same span.
pub fn recognize(segment: &DocumentSegment, gazetteer: &Gazetteer) -> Vec<Mention> {
    let mut out = Vec::new();
    if let Some(text) = &segment.text {
        expand(
            match_text(text, gazetteer),
            gazetteer,
            &segment.segment_id,
            None,
            &mut out,
        );
    }
    if let Some(grid) = &segment.table {
        for (r, row) in grid.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                let matches = match_text(cell, gazetteer);
                expand(
                    matches,
                    gazetteer,
                    &segment.segment_id,
                    Some((r, c)),
                    &mut out,
                );
            }
        }
    }
    out
}
