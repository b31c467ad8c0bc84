//! Recursive chunking over a separator hierarchy, and paragraph chunking.
//!
//! Sentences are the atoms: a separator only ever splits at the whitespace
//! gap between two sentences, so no chunk at any level cuts a sentence.

use std::ops::Range;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Chunk, ChunkLevel, SegmentedDoc};
use crate::error::{Error, Result};

/// One level of the separator hierarchy.
///
/// Written as a plain string in configuration: `"\n\n"` is a paragraph
/// break (tolerating whitespace on the blank line), `"\n"` a line break,
/// `"<sentence>"` any sentence boundary, and anything else must occur
/// literally in the gap between two sentences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separator {
    Paragraph,
    Line,
    Sentence,
    Literal(String),
}

impl Separator {
    pub const SENTENCE_TOKEN: &'static str = "<sentence>";

    pub fn default_hierarchy() -> Vec<Separator> {
        vec![
            Separator::Paragraph,
            Separator::Line,
            Separator::Sentence,
            Separator::Literal(" ".into()),
        ]
    }

    pub fn as_str(&self) -> &str {
        match self {
            Separator::Paragraph => "\n\n",
            Separator::Line => "\n",
            Separator::Sentence => Self::SENTENCE_TOKEN,
            Separator::Literal(s) => s,
        }
    }

    /// Whether a whitespace gap between two sentences contains this separator.
    pub fn matches(&self, gap: &str) -> bool {
        match self {
            Separator::Paragraph => gap.matches('\n').count() >= 2,
            Separator::Line => gap.contains('\n'),
            Separator::Sentence => true,
            Separator::Literal(s) => gap.contains(s.as_str()),
        }
    }
}

impl From<&str> for Separator {
    fn from(s: &str) -> Self {
        match s {
            "\n\n" => Separator::Paragraph,
            "\n" => Separator::Line,
            Self::SENTENCE_TOKEN => Separator::Sentence,
            other => Separator::Literal(other.to_string()),
        }
    }
}

impl Serialize for Separator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Separator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(Separator::from(s.as_str()))
    }
}

/// Recursive chunking of a whole document at budget `theta` words.
pub fn recursive_chunk(doc: &SegmentedDoc, theta: usize, hierarchy: &[Separator]) -> Result<Vec<Chunk>> {
    if theta == 0 {
        return Err(Error::InvalidConfig("theta must be positive".into()));
    }
    Ok(recursive_ranges(doc, 0..doc.sentences().len(), theta, hierarchy)
        .into_iter()
        .map(|r| doc.chunk(r, ChunkLevel::Parent))
        .collect())
}

/// Sentence runs produced by recursive chunking of `sentences` at budget `theta`.
///
/// Every run holds at most `theta` words unless it is a single sentence.
pub fn recursive_ranges(
    doc: &SegmentedDoc,
    sentences: Range<usize>,
    theta: usize,
    hierarchy: &[Separator],
) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    if !sentences.is_empty() {
        split_into(doc, sentences, theta, hierarchy, &mut out);
    }
    out
}

fn split_into(
    doc: &SegmentedDoc,
    range: Range<usize>,
    theta: usize,
    hierarchy: &[Separator],
    out: &mut Vec<Range<usize>>,
) {
    if range.len() == 1 || doc.words(range.clone()) <= theta {
        out.push(range);
        return;
    }

    // first separator that actually splits this run; sentences are the floor
    let mut rest: &[Separator] = hierarchy;
    let groups = loop {
        match rest.split_first() {
            Some((sep, tail)) => {
                rest = tail;
                let groups = groups_at(doc, range.clone(), sep);
                if groups.len() > 1 {
                    break groups;
                }
            }
            None => break groups_at(doc, range.clone(), &Separator::Sentence),
        }
    };

    let mut fitting = Vec::new();
    for group in groups {
        if doc.words(group.clone()) <= theta {
            fitting.push(group);
        } else {
            merge_into(doc, std::mem::take(&mut fitting), theta, out);
            split_into(doc, group, theta, rest, out);
        }
    }
    merge_into(doc, fitting, theta, out);
}

/// Greedily joins adjacent runs while the total stays within `theta`.
fn merge_into(doc: &SegmentedDoc, runs: Vec<Range<usize>>, theta: usize, out: &mut Vec<Range<usize>>) {
    let mut current: Option<Range<usize>> = None;
    for run in runs {
        current = match current {
            Some(cur) if doc.words(cur.start..run.end) <= theta => Some(cur.start..run.end),
            Some(cur) => {
                out.push(cur);
                Some(run)
            }
            None => Some(run),
        };
    }
    out.extend(current);
}

fn groups_at(doc: &SegmentedDoc, range: Range<usize>, sep: &Separator) -> Vec<Range<usize>> {
    let mut groups = Vec::new();
    let mut start = range.start;
    for i in range.start..range.end - 1 {
        if sep.matches(doc.gap_after(i)) {
            groups.push(start..i + 1);
            start = i + 1;
        }
    }
    groups.push(start..range.end);
    groups
}

/// One chunk per blank-line-delimited paragraph.
pub fn paragraph_chunk(doc: &SegmentedDoc) -> Vec<Chunk> {
    let n = doc.sentences().len();
    if n == 0 {
        return Vec::new();
    }
    groups_at(doc, 0..n, &Separator::Paragraph)
        .into_iter()
        .map(|r| doc.chunk(r, ChunkLevel::Parent))
        .collect()
}
