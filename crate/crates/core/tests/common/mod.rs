#![allow(dead_code)]

use std::path::PathBuf;

use kgx::chunker::{ChunkKind, ChunkedDocument};
use kgx::extractor::{Provenance, Triple, TripleSet};
use kgx::graph::{build_graph, KnowledgeGraph};
use kgx::ingest::{parse_annotation, AnnotatedDocument, EntityMention, Iob, Pos, Sentence, Token};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture(name: &str) -> AnnotatedDocument {
    let bytes = std::fs::read(fixture_path(name)).expect("fixture readable");
    parse_annotation(&bytes).expect("fixture valid")
}

/// Expected chunks of the Ford example: (sentence, phrase number, phrase, type).
pub const CHUNK_TABLE: [(usize, usize, &str, &str); 20] = [
    (0, 0, "Ford Motor Company", "ENTITY"),
    (0, 1, "is", "VERB"),
    (0, 2, "an American multinational automaker", "ENTITY"),
    (0, 3, "that", "DET"),
    (0, 4, "has", "VERB"),
    (0, 5, "its main headquarters", "ENTITY"),
    (0, 6, "in", "ADP"),
    (0, 7, "Dearborn", "ENTITY"),
    (0, 8, ",", "PUNCT"),
    (0, 9, "Michigan", "ENTITY"),
    (0, 10, ",", "PUNCT"),
    (0, 11, "a suburb of Detroit", "ENTITY"),
    (0, 12, ".", "PUNCT"),
    (1, 13, "The company", "ENTITY"),
    (1, 14, "was founded by", "VERB"),
    (1, 15, "Henry Ford", "ENTITY"),
    (1, 16, "and", "CCONJ"),
    (1, 17, "incorporated on", "VERB"),
    (1, 18, "June 16, 1903", "ENTITY"),
    (1, 19, ".", "PUNCT"),
];

pub struct TripleRow {
    pub head: &'static str,
    pub relation: &'static str,
    pub tail: &'static str,
    pub type_h: &'static str,
    pub type_t: &'static str,
    pub deg_h: usize,
    pub deg_t: usize,
    pub betw_h: f64,
    pub betw_t: f64,
}

#[allow(clippy::too_many_arguments)]
const fn r(
    head: &'static str,
    relation: &'static str,
    tail: &'static str,
    type_h: &'static str,
    type_t: &'static str,
    deg_h: usize,
    deg_t: usize,
    betw_h: f64,
    betw_t: f64,
) -> TripleRow {
    TripleRow { head, relation, tail, type_h, type_t, deg_h, deg_t, betw_h, betw_t }
}

const FMC: &str = "Ford Motor Company";
const AMA: &str = "American multinational automaker";
const MHQ: &str = "main headquarters";
const SOD: &str = "suburb of Detroit";
const DATE: &str = "June 16, 1903";

/// Expected enriched rows of the Ford example (relation labels aside).
pub const TRIPLE_TABLE: [TripleRow; 14] = [
    r(FMC, "in", "Dearborn", "ORG", "LOC", 6, 3, 11.0, 0.75),
    r(FMC, "in", "Michigan", "ORG", "LOC", 6, 3, 11.0, 0.75),
    r(FMC, "in", SOD, "ORG", "O", 6, 3, 11.0, 0.75),
    r(FMC, "in", DATE, "ORG", "O", 6, 2, 11.0, 0.0),
    r(FMC, "is", AMA, "ORG", "O", 6, 5, 11.0, 1.75),
    r(FMC, "was founded by", "Henry Ford", "ORG", "PER", 6, 2, 11.0, 0.0),
    r(AMA, "in", "Dearborn", "O", "LOC", 5, 3, 1.75, 0.75),
    r(AMA, "in", "Michigan", "O", "LOC", 5, 3, 1.75, 0.75),
    r(AMA, "in", SOD, "O", "O", 5, 3, 1.75, 0.75),
    r(AMA, "has", MHQ, "O", "O", 5, 4, 1.75, 1.0),
    r("Henry Ford", "incorporated on", DATE, "PER", "O", 2, 2, 0.0, 0.0),
    r(MHQ, "in", "Dearborn", "O", "LOC", 4, 3, 1.0, 0.75),
    r(MHQ, "in", "Michigan", "O", "LOC", 4, 3, 1.0, 0.75),
    r(MHQ, "in", SOD, "O", "O", 4, 3, 1.0, 0.75),
];

pub fn sorted_keys<'a>(it: impl Iterator<Item = (&'a str, &'a str, &'a str)>) -> Vec<(String, String, String)> {
    let mut v: Vec<_> = it.map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string())).collect();
    v.sort();
    v
}

const WORDS: [&str; 12] = ["alpha", "bravo", "cargo", "delta", "echo", "fox", "gear", "hull", "ion", "jet", "kite", "lamp"];

const POS_POOL: [Pos; 16] = [
    Pos::Det,
    Pos::Adj,
    Pos::Noun,
    Pos::Noun,
    Pos::Propn,
    Pos::Verb,
    Pos::Verb,
    Pos::Adp,
    Pos::Part,
    Pos::Pron,
    Pos::Num,
    Pos::Punct,
    Pos::Cconj,
    Pos::Adv,
    Pos::Aux,
    Pos::X,
];

const LABELS: [&str; 6] = ["ORG", "PERSON", "GPE", "DATE", "NORP", "CARDINAL"];

/// A random one-sentence document with consistent offsets, valid IOB tags
/// and matching entity mentions. Sprinkles in "of" and parentheses so the
/// merge rules get exercised.
pub fn random_tagged_document<R: Rng>(rng: &mut R) -> AnnotatedDocument {
    let n = rng.gen_range(1..=14);
    let mut words: Vec<(String, Pos)> = Vec::with_capacity(n);
    for _ in 0..n {
        let roll = rng.gen_range(0..10);
        let entry = match roll {
            0 => ("of".to_string(), Pos::Adp),
            1 => (if rng.gen() { "(" } else { ")" }.to_string(), Pos::Punct),
            _ => {
                let pos = *POS_POOL.choose(rng).unwrap();
                (WORDS.choose(rng).unwrap().to_string(), pos)
            }
        };
        words.push(entry);
    }

    // non-overlapping entity spans
    let mut ents: Vec<(usize, usize, &str)> = Vec::new();
    let mut i = 0;
    while i < n {
        if rng.gen_bool(0.2) {
            let len = rng.gen_range(1..=3).min(n - i);
            ents.push((i, i + len, LABELS.choose(rng).unwrap()));
            i += len + rng.gen_range(0..2);
        } else {
            i += 1;
        }
    }

    let mut text = String::new();
    let mut tokens = Vec::with_capacity(n);
    for (i, (w, pos)) in words.iter().enumerate() {
        if i > 0 {
            text.push(' ');
        }
        let start = text.chars().count();
        text.push_str(w);
        let (ent_type, iob) = match ents.iter().find(|(s, e, _)| (*s..*e).contains(&i)) {
            Some((s, _, label)) if *s == i => (label.to_string(), Iob::B),
            Some((_, _, label)) => (label.to_string(), Iob::I),
            None => (String::new(), Iob::O),
        };
        tokens.push(Token {
            index: i,
            text: w.clone(),
            ent_type,
            iob,
            pos: *pos,
            tag: String::new(),
            start,
            end: start + w.chars().count() - 1,
            dep: "dep".into(),
            head: 0,
        });
    }
    let entities = ents
        .iter()
        .map(|(s, e, label)| EntityMention {
            text: words[*s..*e].iter().map(|(w, _)| w.as_str()).collect::<Vec<_>>().join(" "),
            label: label.to_string(),
            sentence: 0,
            start: *s,
            end: *e,
        })
        .collect();
    AnnotatedDocument::new("random", text, vec![Sentence { index: 0, tokens }], entities, vec![])
        .expect("generated document is valid")
}

/// Checks every structural invariant of a chunked single- or multi-sentence
/// document.
pub fn check_chunk_invariants(cd: &ChunkedDocument) -> Result<(), String> {
    for (k, c) in cd.chunks.iter().enumerate() {
        if c.order != k {
            return Err(format!("chunk {k} has order {}", c.order));
        }
    }
    for sentence in cd.doc.sentences() {
        let chunks: Vec<_> = cd.sentence_chunks(sentence.index).collect();
        let tokens = &sentence.tokens;
        let mut next = 0;
        for c in &chunks {
            if c.span.start != next || c.span.end <= c.span.start {
                return Err(format!("sentence {}: chunk {:?} breaks the partition at {next}", sentence.index, c.span));
            }
            next = c.span.end;
            match c.kind {
                ChunkKind::Verb => {
                    if !tokens[c.span.clone()].iter().any(|t| t.pos == Pos::Verb) {
                        return Err(format!("VERB chunk {:?} has no verb", c.text));
                    }
                }
                ChunkKind::Entity => {
                    let last = &tokens[c.span.end - 1];
                    let nominal = matches!(last.pos, Pos::Noun | Pos::Propn | Pos::Pron);
                    if !(nominal || last.iob != Iob::O || last.text == ")") {
                        return Err(format!("ENTITY chunk {:?} ends in {:?}", c.text, last.pos));
                    }
                }
                ChunkKind::Pass(_) => {
                    if c.span.len() != 1 {
                        return Err(format!("pass-through chunk {:?} spans several tokens", c.text));
                    }
                }
            }
        }
        if next != tokens.len() {
            return Err(format!("sentence {}: chunks stop at {next} of {}", sentence.index, tokens.len()));
        }
        for w in chunks.windows(2) {
            if w[0].kind == ChunkKind::Entity && w[1].kind == ChunkKind::Entity {
                return Err(format!("adjacent ENTITY chunks {:?} {:?}", w[0].text, w[1].text));
            }
            if w[0].kind == ChunkKind::Verb && w[1].kind == ChunkKind::Verb {
                return Err(format!("adjacent VERB chunks {:?} {:?}", w[0].text, w[1].text));
            }
            let satellite = |k: ChunkKind| matches!(k, ChunkKind::Pass(Pos::Adp | Pos::Part));
            if (w[0].kind == ChunkKind::Verb && satellite(w[1].kind))
                || (satellite(w[0].kind) && w[1].kind == ChunkKind::Verb)
            {
                return Err(format!("unmerged verb satellite {:?} {:?}", w[0].text, w[1].text));
            }
        }
        for w in chunks.windows(3) {
            if w[0].kind == ChunkKind::Entity
                && w[1].text.eq_ignore_ascii_case("of")
                && w[2].kind == ChunkKind::Entity
            {
                return Err(format!("unmerged NP of NP around {:?}", w[1].text));
            }
        }
    }
    Ok(())
}

const PHRASES: [&str; 14] = [
    "the engine",
    "an axle",
    "its chassis",
    "Ford",
    "Monday",
    "it",
    "those",
    "Perth",
    "this car",
    "main plant",
    "Ford",
    "the the wheel",
    "our their fleet",
    "Detroit",
];

const RELATIONS: [&str; 8] = ["in", "at", "on", "has", "was founded by", "incorporated on", "makes", "sits at"];

pub fn random_triples<R: Rng>(rng: &mut R, max: usize) -> TripleSet {
    let n = rng.gen_range(0..=max);
    (0..n)
        .filter_map(|_| {
            let h = PHRASES.choose(rng).unwrap();
            let t = PHRASES.choose(rng).unwrap();
            let rel = RELATIONS.choose(rng).unwrap();
            Triple::new(h, rel, t, Provenance::Sentence(rng.gen_range(0..3)))
        })
        .collect()
}

/// Random undirected-ish graph over 2..=8 named nodes.
pub fn random_graph<R: Rng>(rng: &mut R) -> KnowledgeGraph {
    let n = rng.gen_range(2..=8);
    let p = rng.gen_range(0.15..0.7);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut set = TripleSet::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(p / 2.0) {
                set.insert(Triple::new(&names[a], "r", &names[b], Provenance::Graph).unwrap());
            }
        }
    }
    if set.is_empty() {
        set.insert(Triple::new(&names[0], "r", &names[1], Provenance::Graph).unwrap());
    }
    build_graph(&set)
}
