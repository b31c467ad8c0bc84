//! Corpus and dataset readers.

use std::collections::HashSet;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use unicode_normalization::UnicodeNormalization;

use super::persist::read_file;
use crate::error::{Error, Result};
use crate::evaluation::{AnswerQAExample, RetrievalQAExample};
use crate::segmentation::Document;

/// NFC composition and `\n` line endings.
pub fn normalize_text(raw: &str) -> String {
    raw.replace("\r\n", "\n").replace('\r', "\n").nfc().collect()
}

#[derive(Deserialize)]
struct DocRecord {
    id: String,
    text: String,
}

/// Reads a JSONL file of `{"id", "text"}` records, or a directory of
/// `.txt` files (id = file stem, sorted by file name).
pub fn ingest_corpus(path: &Path) -> Result<Vec<Document>> {
    let records: Vec<(String, String)> = if path.is_dir() {
        let mut files: Vec<_> = std::fs::read_dir(path)
            .map_err(|e| Error::io(format!("listing {}", path.display()), e))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
            .collect();
        files.sort();
        files
            .iter()
            .map(|file| {
                let id = file
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                Ok((id, read_file(file)?))
            })
            .collect::<Result<_>>()?
    } else {
        read_jsonl::<DocRecord>(path)?
            .into_iter()
            .map(|(line, r)| {
                if r.id.trim().is_empty() {
                    Err(Error::MalformedRecord {
                        line,
                        message: "empty id".into(),
                    })
                } else {
                    Ok((r.id, r.text))
                }
            })
            .collect::<Result<_>>()?
    };

    let mut seen = HashSet::new();
    records
        .into_iter()
        .map(|(id, raw)| {
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateDocId(id));
            }
            let text = normalize_text(&raw);
            if text.trim().is_empty() {
                return Err(Error::EmptyDocument(id));
            }
            Ok(Document::new(id, text))
        })
        .collect()
}

/// A question file, either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Retrieval(Vec<RetrievalQAExample>),
    Answers(Vec<AnswerQAExample>),
}

impl Dataset {
    pub fn len(&self) -> usize {
        match self {
            Dataset::Retrieval(v) => v.len(),
            Dataset::Answers(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Reads a JSONL question file. Records with `evidence` make a retrieval
/// set; records with `answers` make a QA set. Mixing kinds is an error.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let rows = read_jsonl::<serde_json::Value>(path)?;
    let Some((first_line, first)) = rows.first() else {
        return Err(Error::EmptyEvaluation);
    };
    let retrieval = first.get("evidence").is_some();
    if !retrieval && first.get("answers").is_none() {
        return Err(Error::MalformedRecord {
            line: *first_line,
            message: "record has neither `evidence` nor `answers`".into(),
        });
    }

    fn typed<T: DeserializeOwned>(line: usize, value: serde_json::Value) -> Result<T> {
        serde_json::from_value(value).map_err(|e| Error::MalformedRecord {
            line,
            message: e.to_string(),
        })
    }
    let blank = |line: usize, field: &str| Error::MalformedRecord {
        line,
        message: format!("`{field}` must not be empty"),
    };

    if retrieval {
        rows.into_iter()
            .map(|(line, v)| {
                let ex: RetrievalQAExample = typed(line, v)?;
                for (name, value) in [("question", &ex.question), ("evidence", &ex.evidence), ("doc_id", &ex.doc_id)] {
                    if value.trim().is_empty() {
                        return Err(blank(line, name));
                    }
                }
                Ok(ex)
            })
            .collect::<Result<_>>()
            .map(Dataset::Retrieval)
    } else {
        rows.into_iter()
            .map(|(line, v)| {
                let ex: AnswerQAExample = typed(line, v)?;
                if ex.question.trim().is_empty() {
                    return Err(blank(line, "question"));
                }
                if ex.doc_id.trim().is_empty() {
                    return Err(blank(line, "doc_id"));
                }
                if ex.gold_answers.is_empty() {
                    return Err(blank(line, "answers"));
                }
                Ok(ex)
            })
            .collect::<Result<_>>()
            .map(Dataset::Answers)
    }
}

/// Parses each non-blank line, keeping 1-based line numbers.
fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<(usize, T)>> {
    read_file(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l)
                .map(|v| (i + 1, v))
                .map_err(|e| Error::MalformedRecord {
                    line: i + 1,
                    message: e.to_string(),
                })
        })
        .collect()
}
