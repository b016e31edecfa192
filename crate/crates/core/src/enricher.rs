//! Entity typing and structured relation labels for finished triples.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::extractor::{Triple, TripleSet};
use crate::graph::CentralityReport;
use crate::ingest::{AnnotatedDocument, EntityMention};

pub const DEFAULT_SIMILARITY_THRESHOLD: f64 = 0.8;

pub const FALLBACK_RELATION_LABEL: &str = "Other";

/// Five-way entity classes (PER, ORG, LOC, MISC, O).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityClass {
    Per,
    Org,
    Loc,
    Misc,
    O,
}

impl EntityClass {
    pub const ALL: [EntityClass; 5] = [
        EntityClass::Per,
        EntityClass::Org,
        EntityClass::Loc,
        EntityClass::Misc,
        EntityClass::O,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityClass::Per => "PER",
            EntityClass::Org => "ORG",
            EntityClass::Loc => "LOC",
            EntityClass::Misc => "MISC",
            EntityClass::O => "O",
        }
    }
}

impl fmt::Display for EntityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown entity class `{0}`")]
pub struct UnknownEntityClass(pub String);

impl FromStr for EntityClass {
    type Err = UnknownEntityClass;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EntityClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| UnknownEntityClass(s.to_string()))
    }
}

/// Collapses an annotator entity label onto the five classes.
pub fn map_entity_label(label: &str) -> EntityClass {
    match label {
        "PERSON" | "PER" => EntityClass::Per,
        "ORG" => EntityClass::Org,
        "GPE" | "LOC" | "FAC" => EntityClass::Loc,
        "NORP" | "PRODUCT" | "EVENT" | "WORK_OF_ART" | "LANGUAGE" | "LAW" | "MISC" => EntityClass::Misc,
        _ => EntityClass::O,
    }
}

/// `1 - levenshtein / max_len` over case-folded characters.
pub fn phrase_similarity(a: &str, b: &str) -> f64 {
    let a = a.to_lowercase();
    let b = b.to_lowercase();
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 1.0;
    }
    1.0 - strsim::levenshtein(&a, &b) as f64 / longest as f64
}

/// Class of the entity most similar to `phrase`, or O below `threshold`.
/// Ties go to the earliest entity.
pub fn entity_type_of(phrase: &str, entities: &[EntityMention], threshold: f64) -> EntityClass {
    let mut best: Option<(f64, &EntityMention)> = None;
    for e in entities {
        let score = phrase_similarity(phrase, &e.text);
        if best.is_none_or(|(b, _)| score > b) {
            best = Some((score, e));
        }
    }
    match best {
        Some((score, e)) if score >= threshold => map_entity_label(&e.label),
        _ => EntityClass::O,
    }
}

/// Classes for every head and tail phrase.
pub fn assign_entity_types(
    triples: &TripleSet,
    entities: &[EntityMention],
    threshold: f64,
) -> BTreeMap<String, EntityClass> {
    let mut out = BTreeMap::new();
    for t in triples {
        for phrase in [&t.head, &t.tail] {
            if !out.contains_key(phrase) {
                out.insert(phrase.clone(), entity_type_of(phrase, entities, threshold));
            }
        }
    }
    out
}

#[derive(Debug, Error)]
pub enum TyperError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("relation table line {line}: {message}")]
    TableFormat { line: usize, message: String },
    #[error("sidecar line {line}: {message}")]
    SidecarFormat { line: usize, message: String },
}

/// Maps a triple's relation to a structured relation label. Never fails.
pub trait RelationTyper: Send + Sync {
    fn label(&self, triple: &Triple) -> String;
}

/// Exact-match relation table, optionally overridden per triple by a sidecar
/// of precomputed labels. Unknown relations get [`FALLBACK_RELATION_LABEL`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LookupTyper {
    table: HashMap<String, String>,
    sidecar: HashMap<(String, String, String), String>,
}

fn tsv_rows(content: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    content
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r').split('\t').collect()))
}

fn read(path: &Path) -> Result<String, TyperError> {
    std::fs::read_to_string(path).map_err(|source| TyperError::Io {
        path: path.display().to_string(),
        source,
    })
}

impl LookupTyper {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `relation_phrase<TAB>label` rows.
    pub fn parse_table(content: &str) -> Result<Self, TyperError> {
        let mut table = HashMap::new();
        for (line, cols) in tsv_rows(content) {
            match cols.as_slice() {
                [relation, label] if !relation.trim().is_empty() && !label.trim().is_empty() => {
                    table.insert(relation.trim().to_string(), label.trim().to_string());
                }
                _ => {
                    return Err(TyperError::TableFormat {
                        line,
                        message: format!("expected 2 non-empty columns, found {}", cols.len()),
                    })
                }
            }
        }
        Ok(LookupTyper {
            table,
            sidecar: HashMap::new(),
        })
    }

    pub fn load_table(path: &Path) -> Result<Self, TyperError> {
        Self::parse_table(&read(path)?)
    }

    /// Adds `head<TAB>relation<TAB>tail<TAB>label` rows that take precedence
    /// over the table.
    pub fn with_sidecar(mut self, content: &str) -> Result<Self, TyperError> {
        for (line, cols) in tsv_rows(content) {
            match cols.as_slice() {
                [h, r, t, label] if [h, r, t, label].iter().all(|c| !c.trim().is_empty()) => {
                    self.sidecar.insert(
                        (h.trim().to_string(), r.trim().to_string(), t.trim().to_string()),
                        label.trim().to_string(),
                    );
                }
                _ => {
                    return Err(TyperError::SidecarFormat {
                        line,
                        message: format!("expected 4 non-empty columns, found {}", cols.len()),
                    })
                }
            }
        }
        Ok(self)
    }

    pub fn with_sidecar_file(self, path: &Path) -> Result<Self, TyperError> {
        let content = read(path)?;
        self.with_sidecar(&content)
    }
}

impl RelationTyper for LookupTyper {
    fn label(&self, triple: &Triple) -> String {
        let key = (triple.head.clone(), triple.relation.clone(), triple.tail.clone());
        self.sidecar
            .get(&key)
            .or_else(|| self.table.get(&triple.relation))
            .cloned()
            .unwrap_or_else(|| FALLBACK_RELATION_LABEL.to_string())
    }
}

pub fn type_relation(triple: &Triple, typer: &dyn RelationTyper) -> String {
    typer.label(triple)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnrichedTriple {
    pub triple: Triple,
    pub relation_label: String,
    pub head_type: EntityClass,
    pub tail_type: EntityClass,
    pub head_degree: usize,
    pub tail_degree: usize,
    pub head_betweenness: f64,
    pub tail_betweenness: f64,
}

/// One enriched row per triple, in input order. `report` must come from the
/// graph of exactly these triples.
pub fn enrich_triples(
    triples: &TripleSet,
    doc: &AnnotatedDocument,
    report: &CentralityReport,
    typer: &dyn RelationTyper,
    threshold: f64,
) -> Vec<EnrichedTriple> {
    let types = assign_entity_types(triples, doc.entities(), threshold);
    triples
        .iter()
        .map(|t| {
            let head = report.get(&t.head).unwrap_or_else(|| panic!("no centrality for {:?}", t.head));
            let tail = report.get(&t.tail).unwrap_or_else(|| panic!("no centrality for {:?}", t.tail));
            EnrichedTriple {
                triple: t.clone(),
                relation_label: type_relation(t, typer),
                head_type: types[&t.head],
                tail_type: types[&t.tail],
                head_degree: head.degree,
                tail_degree: tail.degree,
                head_betweenness: head.betweenness,
                tail_betweenness: tail.betweenness,
            }
        })
        .collect()
}
