use std::collections::HashSet;
use std::io;
use std::path::Path;

use super::{Triple, TripleSet};

const BUNDLED_STOPWORDS: &str = include_str!("../../data/stopwords_en.txt");

const DAYS: [&str; 7] = ["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"];

const MONTHS: [&str; 12] = [
    "january",
    "february",
    "march",
    "april",
    "may",
    "june",
    "july",
    "august",
    "september",
    "october",
    "november",
    "december",
];

/// Articles, possessive and demonstrative determiners stripped from the
/// front of heads and tails.
pub const LEADING_FUNCTION_WORDS: [&str; 14] = [
    "a", "an", "the", "its", "their", "his", "her", "my", "our", "your", "this", "that", "these",
    "those",
];

/// Phrases that may not head a triple. Day and month names are always
/// included; the word list itself is replaceable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopList {
    words: HashSet<String>,
}

impl StopList {
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set: HashSet<String> = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        set.extend(DAYS.iter().chain(MONTHS.iter()).map(|w| w.to_string()));
        StopList { words: set }
    }

    /// One entry per line; blank lines are skipped.
    pub fn from_file(path: &Path) -> io::Result<Self> {
        let content = std::fs::read_to_string(path)?;
        Ok(Self::from_words(content.lines()))
    }

    pub fn contains(&self, phrase: &str) -> bool {
        self.words.contains(&phrase.trim().to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl Default for StopList {
    fn default() -> Self {
        Self::from_words(BUNDLED_STOPWORDS.lines())
    }
}

/// Drops triples whose whole head is a stop word. Tails are not checked.
pub fn filter_triples(triples: &TripleSet, stop: &StopList) -> TripleSet {
    triples.iter().filter(|t| !stop.contains(&t.head)).cloned().collect()
}

/// A triple whose head or tail vanished (or collapsed onto the other side)
/// after stripping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerateTriple(pub Triple);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StripOutcome {
    pub triples: TripleSet,
    pub degenerate: Vec<DegenerateTriple>,
}

fn strip_leading(phrase: &str) -> &str {
    let mut rest = phrase.trim();
    loop {
        let (first, tail) = match rest.find(char::is_whitespace) {
            Some(i) => (&rest[..i], &rest[i..]),
            None => (rest, ""),
        };
        if first.is_empty() || !LEADING_FUNCTION_WORDS.contains(&first.to_lowercase().as_str()) {
            return rest;
        }
        rest = tail.trim_start();
    }
}

/// Removes leading articles and possessive or demonstrative determiners
/// from heads and tails, then dedupes keeping the first occurrence.
pub fn strip_articles(triples: &TripleSet) -> StripOutcome {
    let mut out = StripOutcome::default();
    for t in triples {
        match Triple::new(strip_leading(&t.head), &t.relation, strip_leading(&t.tail), t.provenance) {
            Some(stripped) => {
                out.triples.insert(stripped);
            }
            None => out.degenerate.push(DegenerateTriple(t.clone())),
        }
    }
    out
}
