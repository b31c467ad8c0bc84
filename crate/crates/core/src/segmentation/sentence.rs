//! Rule-based sentence boundary detection.
//!
//! A sentence ends at a newline, or after a run of terminal punctuation
//! (`.`, `!`, `?`, `…`) plus any closing quotes or brackets, when the run is
//! followed by whitespace and the next visible character is not a lowercase
//! letter. A single period does not end a sentence when the token before it
//! is on the abbreviation guard list or is a lone capital initial.

use std::collections::HashSet;
use std::path::Path;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BUILTIN_ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");

static DEFAULT_SPLITTER: LazyLock<SentenceSplitter> = LazyLock::new(SentenceSplitter::default);

/// A sentence as a half-open character range of its document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceSpan {
    pub start: usize,
    pub end: usize,
    pub word_count: usize,
}

#[derive(Debug, Clone)]
pub struct SentenceSplitter {
    abbreviations: HashSet<String>,
}

impl Default for SentenceSplitter {
    fn default() -> Self {
        Self::from_guard_list(BUILTIN_ABBREVIATIONS)
    }
}

impl SentenceSplitter {
    /// Parses a guard list: one token per line, `#` starts a comment line.
    pub fn from_guard_list(list: &str) -> Self {
        let abbreviations = list
            .lines()
            .map(str::trim)
            .filter(|line| !line.is_empty() && !line.starts_with('#'))
            .map(|line| line.strip_suffix('.').unwrap_or(line).to_string())
            .collect();
        Self { abbreviations }
    }

    pub fn from_guard_file(path: &Path) -> Result<Self> {
        let list = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Ok(Self::from_guard_list(&list))
    }

    pub fn is_abbreviation(&self, token: &str) -> bool {
        self.abbreviations.contains(token)
    }

    pub fn split(&self, text: &str) -> Result<Vec<SentenceSpan>> {
        let chars: Vec<char> = text.chars().collect();
        if chars.iter().all(|c| c.is_whitespace()) {
            return Err(Error::EmptyInput);
        }

        let mut spans = Vec::new();
        let mut start: Option<usize> = None;
        // one past the last visible character of the open sentence
        let mut visible_end = 0;
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c == '\n' {
                if let Some(s) = start.take() {
                    spans.push(span(&chars, s, visible_end));
                }
                i += 1;
                continue;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let s = *start.get_or_insert(i);
            if !is_terminal(c) {
                visible_end = i + 1;
                i += 1;
                continue;
            }

            let mut j = i;
            while j < chars.len() && is_terminal(chars[j]) {
                j += 1;
            }
            while j < chars.len() && is_closer(chars[j]) {
                j += 1;
            }
            visible_end = j;
            if j < chars.len() && chars[j].is_whitespace() && self.ends_sentence(&chars, s, i, j) {
                spans.push(span(&chars, s, j));
                start = None;
            }
            i = j;
        }
        if let Some(s) = start {
            spans.push(span(&chars, s, visible_end));
        }
        Ok(spans)
    }

    /// `run_start..run_end` is the terminator run (with closers), followed by whitespace.
    fn ends_sentence(&self, chars: &[char], sent_start: usize, run_start: usize, run_end: usize) -> bool {
        let next_visible = chars[run_end..].iter().find(|c| !c.is_whitespace());
        if next_visible.is_some_and(|c| c.is_lowercase()) {
            return false;
        }
        let single_period = chars[run_start] == '.'
            && !chars[run_start + 1..run_end].iter().any(|&c| is_terminal(c));
        if !single_period {
            return true;
        }

        let mut token_start = run_start;
        while token_start > sent_start && !chars[token_start - 1].is_whitespace() {
            token_start -= 1;
        }
        while token_start < run_start && is_opener(chars[token_start]) {
            token_start += 1;
        }
        let token: String = chars[token_start..run_start].iter().collect();
        if self.is_abbreviation(&token) {
            return false;
        }
        let mut letters = token.chars();
        let lone_initial = matches!((letters.next(), letters.next()), (Some(c), None) if c.is_uppercase());
        !lone_initial
    }
}

/// Splits `text` into sentences with the built-in guard list.
pub fn split_sentences(text: &str) -> Result<Vec<SentenceSpan>> {
    DEFAULT_SPLITTER.split(text)
}

pub(crate) fn default_splitter() -> &'static SentenceSplitter {
    &DEFAULT_SPLITTER
}

fn span(chars: &[char], start: usize, end: usize) -> SentenceSpan {
    let word_count = chars[start..end]
        .split(|c| c.is_whitespace())
        .filter(|w| !w.is_empty())
        .count();
    SentenceSpan {
        start,
        end,
        word_count,
    }
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | '…')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '}' | '”' | '’' | '»')
}

fn is_opener(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '{' | '“' | '‘' | '«')
}
