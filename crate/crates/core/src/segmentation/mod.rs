//! Documents, sentences and the baseline chunkers.

mod recursive;
mod sentence;

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{self, CharIndex};

pub use recursive::{paragraph_chunk, recursive_chunk, recursive_ranges, Separator};
pub use sentence::{split_sentences, SentenceSpan, SentenceSplitter};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub word_count: usize,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        Self {
            id: id.into(),
            word_count: text::word_count(&text),
            text,
        }
    }
}

/// Granularity of a chunk inside a multi-granular index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChunkLevel {
    Parent,
    ChildHalf,
    ChildQuarter,
}

impl ChunkLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            ChunkLevel::Parent => "parent",
            ChunkLevel::ChildHalf => "child_half",
            ChunkLevel::ChildQuarter => "child_quarter",
        }
    }
}

impl fmt::Display for ChunkLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A sentence-aligned character span of one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub chunk_id: String,
    pub doc_id: String,
    pub start: usize,
    pub end: usize,
    pub word_count: usize,
    pub level: ChunkLevel,
}

impl Chunk {
    pub fn new(doc_id: &str, start: usize, end: usize, word_count: usize, level: ChunkLevel) -> Self {
        Self {
            chunk_id: format!("{doc_id}:{start}-{end}:{level}"),
            doc_id: doc_id.to_string(),
            start,
            end,
            word_count,
            level,
        }
    }

    pub fn with_level(&self, level: ChunkLevel) -> Self {
        Self::new(&self.doc_id, self.start, self.end, self.word_count, level)
    }

    pub fn contains(&self, other: &Chunk) -> bool {
        self.doc_id == other.doc_id && self.start <= other.start && other.end <= self.end
    }
}

/// A document together with its sentence inventory.
#[derive(Debug, Clone)]
pub struct SegmentedDoc {
    doc: Document,
    sentences: Vec<SentenceSpan>,
    chars: CharIndex,
    // words_before[i] = words in sentences[..i]
    words_before: Vec<usize>,
}

impl SegmentedDoc {
    pub fn new(doc: Document) -> Result<Self> {
        Self::with_splitter(doc, sentence::default_splitter())
    }

    pub fn with_splitter(doc: Document, splitter: &SentenceSplitter) -> Result<Self> {
        let sentences = splitter.split(&doc.text).map_err(|e| match e {
            Error::EmptyInput => Error::EmptyDocument(doc.id.clone()),
            other => other,
        })?;
        let chars = CharIndex::new(&doc.text);
        let mut words_before = Vec::with_capacity(sentences.len() + 1);
        words_before.push(0);
        for s in &sentences {
            words_before.push(words_before.last().unwrap() + s.word_count);
        }
        Ok(Self {
            doc,
            sentences,
            chars,
            words_before,
        })
    }

    pub fn id(&self) -> &str {
        &self.doc.id
    }

    pub fn document(&self) -> &Document {
        &self.doc
    }

    pub fn text(&self) -> &str {
        &self.doc.text
    }

    pub fn sentences(&self) -> &[SentenceSpan] {
        &self.sentences
    }

    pub fn sentence_text(&self, index: usize) -> &str {
        let s = &self.sentences[index];
        self.slice(s.start, s.end)
    }

    /// Text between sentence `index` and sentence `index + 1`.
    pub fn gap_after(&self, index: usize) -> &str {
        self.slice(self.sentences[index].end, self.sentences[index + 1].start)
    }

    pub fn slice(&self, start: usize, end: usize) -> &str {
        self.chars.slice(&self.doc.text, start, end)
    }

    pub fn char_len(&self) -> usize {
        self.chars.len()
    }

    /// Word count of a run of whole sentences.
    pub fn words(&self, sentences: Range<usize>) -> usize {
        self.words_before[sentences.end] - self.words_before[sentences.start]
    }

    /// Character span of a non-empty run of sentences.
    pub fn span_of(&self, sentences: Range<usize>) -> (usize, usize) {
        (
            self.sentences[sentences.start].start,
            self.sentences[sentences.end - 1].end,
        )
    }

    pub fn chunk(&self, sentences: Range<usize>, level: ChunkLevel) -> Chunk {
        let (start, end) = self.span_of(sentences.clone());
        Chunk::new(&self.doc.id, start, end, self.words(sentences), level)
    }

    /// Sentence run covered exactly by `chunk`, if its boundaries are sentence boundaries.
    pub fn sentence_range(&self, chunk: &Chunk) -> Option<Range<usize>> {
        if chunk.doc_id != self.doc.id || chunk.start >= chunk.end {
            return None;
        }
        let first = self.sentences.binary_search_by_key(&chunk.start, |s| s.start).ok()?;
        let last = self.sentences.binary_search_by_key(&chunk.end, |s| s.end).ok()?;
        (first <= last).then_some(first..last + 1)
    }

    pub fn chunk_text(&self, chunk: &Chunk) -> &str {
        self.slice(chunk.start, chunk.end)
    }
}

/// Segmented documents addressable by id, in ingestion order.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    docs: Vec<SegmentedDoc>,
    by_id: HashMap<String, usize>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        Self::with_splitter(documents, sentence::default_splitter())
    }

    pub fn with_splitter(documents: Vec<Document>, splitter: &SentenceSplitter) -> Result<Self> {
        let mut corpus = Self::default();
        for doc in documents {
            corpus.push(SegmentedDoc::with_splitter(doc, splitter)?)?;
        }
        Ok(corpus)
    }

    pub fn push(&mut self, doc: SegmentedDoc) -> Result<()> {
        if self.by_id.contains_key(doc.id()) {
            return Err(Error::DuplicateDocId(doc.id().to_string()));
        }
        self.by_id.insert(doc.id().to_string(), self.docs.len());
        self.docs.push(doc);
        Ok(())
    }

    pub fn get(&self, doc_id: &str) -> Result<&SegmentedDoc> {
        self.by_id
            .get(doc_id)
            .map(|&i| &self.docs[i])
            .ok_or_else(|| Error::MissingDocument(doc_id.to_string()))
    }

    pub fn position(&self, doc_id: &str) -> Option<usize> {
        self.by_id.get(doc_id).copied()
    }

    pub fn docs(&self) -> &[SegmentedDoc] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }
}

/// Verbatim text of `chunk`.
pub fn chunk_text<'a>(chunk: &Chunk, corpus: &'a Corpus) -> Result<&'a str> {
    Ok(corpus.get(&chunk.doc_id)?.chunk_text(chunk))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunk_text_roundtrip_and_missing() {
        let corpus = Corpus::new(vec![Document::new("d", "One two. Three four five.")]).unwrap();
        let seg = corpus.get("d").unwrap();
        let chunk = seg.chunk(1..2, ChunkLevel::Parent);
        assert_eq!(chunk.chunk_id, "d:9-25:parent");
        assert_eq!(chunk.word_count, 3);
        assert_eq!(chunk_text(&chunk, &corpus).unwrap(), "Three four five.");

        let stray = Chunk::new("nope", 0, 1, 1, ChunkLevel::Parent);
        assert!(matches!(chunk_text(&stray, &corpus), Err(Error::MissingDocument(id)) if id == "nope"));
    }

    #[test]
    fn sentence_range_requires_alignment() {
        let seg = SegmentedDoc::new(Document::new("d", "Aa bb. Cc dd. Ee.")).unwrap();
        assert_eq!(seg.sentence_range(&seg.chunk(0..3, ChunkLevel::Parent)), Some(0..3));
        assert_eq!(seg.sentence_range(&Chunk::new("d", 1, 6, 2, ChunkLevel::Parent)), None);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = Corpus::new(vec![Document::new("a", "x"), Document::new("a", "y")]).unwrap_err();
        assert!(matches!(err, Error::DuplicateDocId(id) if id == "a"));
    }
}
