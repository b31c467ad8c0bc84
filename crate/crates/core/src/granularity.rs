//! Multi-granular parent/child index and max-over-children parent scoring.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segmentation::{recursive_ranges, Chunk, ChunkLevel, SegmentedDoc, Separator};

/// Parents, their children at `theta / 2` and `theta / 4` words, and the child-to-parent links.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GranularIndex {
    pub parents: Vec<Chunk>,
    pub children: Vec<Chunk>,
    pub parent_of: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredParent {
    pub parent: Chunk,
    pub score: f64,
    /// Id of the unit (the parent or one of its children) holding the max score.
    pub best_unit: String,
    /// Position of the parent in its index, used to break score ties.
    pub position: usize,
}

impl GranularIndex {
    /// Index whose only retrieval units are the parents themselves.
    pub fn parents_only(parents: Vec<Chunk>) -> Self {
        Self {
            parents,
            ..Self::default()
        }
    }

    /// Appends another document's index.
    pub fn extend(&mut self, other: GranularIndex) {
        self.parents.extend(other.parents);
        self.children.extend(other.children);
        self.parent_of.extend(other.parent_of);
    }

    /// All retrieval units: each parent followed by its children.
    pub fn units(&self) -> Vec<&Chunk> {
        let groups = self.child_groups();
        let mut units = Vec::with_capacity(self.parents.len() + self.children.len());
        for (p, parent) in self.parents.iter().enumerate() {
            units.push(parent);
            units.extend(groups[p].iter().map(|&c| &self.children[c]));
        }
        units
    }

    pub fn unit_count(&self) -> usize {
        self.parents.len() + self.children.len()
    }

    /// Sub-index restricted to one document.
    pub fn for_document(&self, doc_id: &str) -> GranularIndex {
        let children: Vec<Chunk> = self.children.iter().filter(|c| c.doc_id == doc_id).cloned().collect();
        let parent_of = children
            .iter()
            .filter_map(|c| self.parent_of.get(&c.chunk_id).map(|p| (c.chunk_id.clone(), p.clone())))
            .collect();
        GranularIndex {
            parents: self.parents.iter().filter(|p| p.doc_id == doc_id).cloned().collect(),
            children,
            parent_of,
        }
    }

    /// Child indices grouped by parent position.
    fn child_groups(&self) -> Vec<Vec<usize>> {
        let position: HashMap<&str, usize> = self
            .parents
            .iter()
            .enumerate()
            .map(|(i, p)| (p.chunk_id.as_str(), i))
            .collect();
        let mut groups = vec![Vec::new(); self.parents.len()];
        for (c, child) in self.children.iter().enumerate() {
            if let Some(&p) = self.parent_of.get(&child.chunk_id).and_then(|id| position.get(id.as_str())) {
                groups[p].push(c);
            }
        }
        groups
    }
}

/// Subdivides each parent by recursive chunking at `theta / 2` and `theta / 4`.
pub fn build_index(doc: &SegmentedDoc, parents: Vec<Chunk>, theta: usize) -> Result<GranularIndex> {
    build_index_with(doc, parents, theta, &Separator::default_hierarchy())
}

pub fn build_index_with(
    doc: &SegmentedDoc,
    parents: Vec<Chunk>,
    theta: usize,
    hierarchy: &[Separator],
) -> Result<GranularIndex> {
    let levels = [
        (ChunkLevel::ChildHalf, (theta / 2).max(1)),
        (ChunkLevel::ChildQuarter, (theta / 4).max(1)),
    ];
    let mut index = GranularIndex::default();
    for parent in parents {
        let parent = if parent.level == ChunkLevel::Parent {
            parent
        } else {
            parent.with_level(ChunkLevel::Parent)
        };
        let sentences = doc
            .sentence_range(&parent)
            .ok_or_else(|| Error::InvalidParent(parent.chunk_id.clone()))?;
        for (level, budget) in levels {
            for run in recursive_ranges(doc, sentences.clone(), budget, hierarchy) {
                let child = doc.chunk(run, level);
                index.parent_of.insert(child.chunk_id.clone(), parent.chunk_id.clone());
                index.children.push(child);
            }
        }
        index.parents.push(parent);
    }
    Ok(index)
}

/// Scores every parent by the max over itself and its children.
pub fn score_parents(index: &GranularIndex, unit_scores: &HashMap<String, f64>) -> Result<Vec<ScoredParent>> {
    let lookup = |id: &str| {
        unit_scores
            .get(id)
            .copied()
            .ok_or_else(|| Error::IncompleteScores(id.to_string()))
    };
    let groups = index.child_groups();
    index
        .parents
        .iter()
        .enumerate()
        .map(|(position, parent)| {
            let mut score = lookup(&parent.chunk_id)?;
            let mut best_unit = &parent.chunk_id;
            for &c in &groups[position] {
                let child = &index.children[c];
                let s = lookup(&child.chunk_id)?;
                if s > score {
                    score = s;
                    best_unit = &child.chunk_id;
                }
            }
            Ok(ScoredParent {
                parent: parent.clone(),
                score,
                best_unit: best_unit.clone(),
                position,
            })
        })
        .collect()
}

/// The `k` best parents, highest score first, earlier position on ties.
pub fn top_k_parents(scored: &[ScoredParent], k: usize) -> Result<Vec<ScoredParent>> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    let mut ranked = rank_parents(scored);
    ranked.truncate(k);
    Ok(ranked)
}

/// All parents in ranking order, duplicates removed.
pub fn rank_parents(scored: &[ScoredParent]) -> Vec<ScoredParent> {
    let mut ranked: Vec<ScoredParent> = scored.to_vec();
    ranked.sort_by(compare_ranked);
    let mut seen = std::collections::HashSet::new();
    ranked.retain(|s| seen.insert(s.parent.chunk_id.clone()));
    ranked
}

fn compare_ranked(a: &ScoredParent, b: &ScoredParent) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(a.position.cmp(&b.position))
        .then(a.parent.start.cmp(&b.parent.start))
}
