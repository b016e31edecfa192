//! Triple mapping, graph expansion and triple cleanup.

mod cleanup;
mod expand;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::chunker::{Chunk, ChunkKind, ChunkedDocument};
use crate::ingest::Pos;

pub use cleanup::{filter_triples, strip_articles, DegenerateTriple, StopList, StripOutcome, LEADING_FUNCTION_WORDS};
pub use expand::{expand_graph, is_locative, DEFAULT_PREPOSITIONS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    /// Mapped directly from the sentence with this index.
    Sentence(usize),
    /// Added by shortest-path expansion over the document graph.
    Graph,
    /// Read from a file that does not record provenance.
    Imported,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Sentence(i) => write!(f, "sentence:{i}"),
            Provenance::Graph => f.write_str("graph"),
            Provenance::Imported => f.write_str("imported"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid provenance `{0}`")]
pub struct ProvenanceParseError(pub String);

impl FromStr for Provenance {
    type Err = ProvenanceParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "graph" => return Ok(Provenance::Graph),
            "imported" => return Ok(Provenance::Imported),
            _ => {}
        }
        s.strip_prefix("sentence:")
            .and_then(|n| n.parse().ok())
            .map(Provenance::Sentence)
            .ok_or_else(|| ProvenanceParseError(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    pub head: String,
    pub relation: String,
    pub tail: String,
    pub provenance: Provenance,
}

impl Triple {
    /// Trims all three phrases; `None` when one is empty or head equals tail.
    pub fn new(head: &str, relation: &str, tail: &str, provenance: Provenance) -> Option<Self> {
        let (head, relation, tail) = (head.trim(), relation.trim(), tail.trim());
        if head.is_empty() || relation.is_empty() || tail.is_empty() || head == tail {
            return None;
        }
        Some(Triple {
            head: head.to_string(),
            relation: relation.to_string(),
            tail: tail.to_string(),
            provenance,
        })
    }

    pub fn key(&self) -> (&str, &str, &str) {
        (&self.head, &self.relation, &self.tail)
    }
}

/// Ordered triples, unique on (head, relation, tail). The first insertion of
/// a key wins.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TripleSet {
    triples: Vec<Triple>,
    keys: HashSet<(String, String, String)>,
}

impl TripleSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false if the key was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let key = (triple.head.clone(), triple.relation.clone(), triple.tail.clone());
        if !self.keys.insert(key) {
            return false;
        }
        self.triples.push(triple);
        true
    }

    pub fn contains(&self, (head, relation, tail): (&str, &str, &str)) -> bool {
        self.keys
            .contains(&(head.to_string(), relation.to_string(), tail.to_string()))
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Triple> {
        self.triples.iter()
    }

    pub fn as_slice(&self) -> &[Triple] {
        &self.triples
    }
}

impl FromIterator<Triple> for TripleSet {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut set = TripleSet::new();
        for t in iter {
            set.insert(t);
        }
        set
    }
}

impl IntoIterator for TripleSet {
    type Item = Triple;
    type IntoIter = std::vec::IntoIter<Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.into_iter()
    }
}

impl<'a> IntoIterator for &'a TripleSet {
    type Item = &'a Triple;
    type IntoIter = std::slice::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MappingOptions {
    /// Take every entity left of a relation as a head and every entity right
    /// of it as a tail, instead of stopping at the neighbouring relations.
    pub literal_leftright: bool,
}

fn is_relation(chunk: &Chunk) -> bool {
    matches!(chunk.kind, ChunkKind::Verb | ChunkKind::Pass(Pos::Adp))
}

/// Maps each sentence's chunks to triples.
///
/// Relations are verb chunks and adposition singletons. The heads of a
/// relation are the entity chunks between it and the previous relation (or
/// sentence start); its tails are those up to the next relation (or sentence
/// end). Every head is paired with every tail.
pub fn get_triples(cd: &ChunkedDocument, opts: MappingOptions) -> TripleSet {
    let mut out = TripleSet::new();
    for sentence in cd.doc.sentences() {
        let chunks: Vec<&Chunk> = cd.sentence_chunks(sentence.index).collect();
        let relations: Vec<usize> = (0..chunks.len()).filter(|&i| is_relation(chunks[i])).collect();
        for (ri, &r) in relations.iter().enumerate() {
            let (lo, hi) = if opts.literal_leftright {
                (0, chunks.len())
            } else {
                let lo = if ri == 0 { 0 } else { relations[ri - 1] + 1 };
                let hi = relations.get(ri + 1).copied().unwrap_or(chunks.len());
                (lo, hi)
            };
            let entities = |range: std::ops::Range<usize>| {
                chunks[range]
                    .iter()
                    .filter(|c| c.kind == ChunkKind::Entity)
                    .copied()
                    .collect::<Vec<_>>()
            };
            let heads = entities(lo..r);
            let tails = entities(r + 1..hi);
            for h in &heads {
                for t in &tails {
                    if let Some(triple) = Triple::new(
                        &h.text,
                        &chunks[r].text,
                        &t.text,
                        Provenance::Sentence(sentence.index),
                    ) {
                        out.insert(triple);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chunker::{chunk_document, ChunkOptions};
    use crate::ingest::{AnnotatedDocument, Iob, Sentence, Token};

    fn doc(words: &[(&str, Pos)]) -> AnnotatedDocument {
        let mut text = String::new();
        let mut tokens = Vec::new();
        for (i, (w, pos)) in words.iter().enumerate() {
            if i > 0 {
                text.push(' ');
            }
            let start = text.len();
            text.push_str(w);
            tokens.push(Token {
                index: i,
                text: w.to_string(),
                ent_type: String::new(),
                iob: Iob::O,
                pos: *pos,
                tag: String::new(),
                start,
                end: start + w.len() - 1,
                dep: "dep".into(),
                head: 0,
            });
        }
        AnnotatedDocument::new("t", text, vec![Sentence { index: 0, tokens }], vec![], vec![]).unwrap()
    }

    fn keys(set: &TripleSet) -> Vec<(String, String, String)> {
        set.iter()
            .map(|t| (t.head.clone(), t.relation.clone(), t.tail.clone()))
            .collect()
    }

    #[test]
    fn cartesian_product_within_segment() {
        use Pos::*;
        // [cars] and [trucks] [use] [diesel] and [petrol]
        let d = doc(&[
            ("cars", Noun),
            ("and", Cconj),
            ("trucks", Noun),
            ("use", Verb),
            ("diesel", Noun),
            ("and", Cconj),
            ("petrol", Noun),
        ]);
        let cd = chunk_document(d, ChunkOptions::default());
        let t = get_triples(&cd, MappingOptions::default());
        assert_eq!(
            keys(&t),
            vec![
                ("cars".into(), "use".into(), "diesel".into()),
                ("cars".into(), "use".into(), "petrol".into()),
                ("trucks".into(), "use".into(), "diesel".into()),
                ("trucks".into(), "use".into(), "petrol".into()),
            ]
        );
        assert!(t.iter().all(|t| t.provenance == Provenance::Sentence(0)));
    }

    #[test]
    fn relation_without_tail_yields_nothing() {
        use Pos::*;
        let d = doc(&[("engines", Noun), ("roar", Verb), (".", Punct)]);
        let cd = chunk_document(d, ChunkOptions::default());
        assert!(get_triples(&cd, MappingOptions::default()).is_empty());
    }

    #[test]
    fn segments_stop_at_neighbouring_relations() {
        use Pos::*;
        let d = doc(&[
            ("Ford", Propn),
            ("is", Verb),
            ("a", Det),
            ("maker", Noun),
            ("that", Det),
            ("has", Verb),
            ("plants", Noun),
        ]);
        let cd = chunk_document(d.clone(), ChunkOptions::default());
        let bounded = get_triples(&cd, MappingOptions::default());
        assert_eq!(
            keys(&bounded),
            vec![
                ("Ford".into(), "is".into(), "a maker".into()),
                ("a maker".into(), "has".into(), "plants".into()),
            ]
        );
        let literal = get_triples(&cd, MappingOptions { literal_leftright: true });
        assert_eq!(literal.len(), 4);
        assert!(literal.contains(("Ford", "has", "plants")));
        assert!(literal.contains(("Ford", "is", "plants")));
    }

    #[test]
    fn self_pairs_are_dropped() {
        assert!(Triple::new("Ford", "is", " Ford ", Provenance::Graph).is_none());
        assert!(Triple::new("", "is", "x", Provenance::Graph).is_none());
    }

    #[test]
    fn triple_set_keeps_first() {
        let mut set = TripleSet::new();
        assert!(set.insert(Triple::new("a", "r", "b", Provenance::Sentence(0)).unwrap()));
        assert!(!set.insert(Triple::new("a", "r", "b", Provenance::Graph).unwrap()));
        assert_eq!(set.len(), 1);
        assert_eq!(set.as_slice()[0].provenance, Provenance::Sentence(0));
    }

    #[test]
    fn provenance_round_trips() {
        for p in [Provenance::Graph, Provenance::Imported, Provenance::Sentence(0), Provenance::Sentence(17)] {
            assert_eq!(p.to_string().parse::<Provenance>().unwrap(), p);
        }
        assert!("sentence:x".parse::<Provenance>().is_err());
    }
}
