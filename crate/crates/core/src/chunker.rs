//! Noun-phrase and verb-phrase chunking.
//!
//! Each sentence is partitioned into a flat sequence of chunks:
//!
//! 1. nominal named-entity spans are promoted to indivisible units;
//! 2. base noun phrases are recognized by a small POS grammar
//!    (`DET? (ADJ|NUM|NOUN|PROPN|span)* (NOUN|PROPN|span)`, or a lone pronoun);
//! 3. `( NP )`, `NP of NP` and `NP NP` are merged until nothing changes;
//! 4. verbs absorb adjacent particles, adpositions and other verbs until
//!    nothing changes;
//! 5. every leftover token becomes a singleton chunk typed by its coarse POS.

use std::fmt;
use std::ops::Range;

use crate::ingest::{AnnotatedDocument, EntityMention, Pos, Sentence, Token};

/// Entity labels whose spans are promoted to noun units. Adjectival and
/// numeric labels (NORP, LANGUAGE, CARDINAL, ...) are left to the grammar.
pub const NOMINAL_LABELS: [&str; 12] = [
    "PERSON",
    "ORG",
    "GPE",
    "LOC",
    "FAC",
    "DATE",
    "TIME",
    "MONEY",
    "EVENT",
    "PRODUCT",
    "WORK_OF_ART",
    "LAW",
];

const POSSESSIVES: [&str; 7] = ["its", "his", "her", "their", "my", "our", "your"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChunkKind {
    Entity,
    Verb,
    /// A token no rule claimed, typed by its coarse POS.
    Pass(Pos),
}

impl ChunkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ChunkKind::Entity => "ENTITY",
            ChunkKind::Verb => "VERB",
            ChunkKind::Pass(pos) => pos.as_str(),
        }
    }
}

impl fmt::Display for ChunkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    pub sentence: usize,
    /// Position of the chunk in the whole document.
    pub order: usize,
    pub text: String,
    pub kind: ChunkKind,
    /// Token range within the sentence, end exclusive.
    pub span: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkedDocument {
    pub doc: AnnotatedDocument,
    pub chunks: Vec<Chunk>,
}

impl ChunkedDocument {
    pub fn sentence_chunks(&self, sentence: usize) -> impl Iterator<Item = &Chunk> {
        self.chunks.iter().filter(move |c| c.sentence == sentence)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ChunkOptions {
    /// Let verb phrases absorb adjacent adverbs.
    pub adv_in_verb_chunks: bool,
}

/// Token ranges of the sentence's nominal entity mentions, sorted and
/// non-overlapping.
pub fn promote_entity_spans(sentence: &Sentence, entities: &[EntityMention]) -> Vec<Range<usize>> {
    let mut spans: Vec<Range<usize>> = entities
        .iter()
        .filter(|e| e.sentence == sentence.index && NOMINAL_LABELS.contains(&e.label.as_str()))
        .map(EntityMention::span)
        .filter(|s| s.start < s.end && s.end <= sentence.tokens.len())
        .collect();
    spans.sort_by_key(|s| (s.start, std::cmp::Reverse(s.end)));
    let mut kept: Vec<Range<usize>> = Vec::with_capacity(spans.len());
    for s in spans {
        if kept.last().is_none_or(|k| s.start >= k.end) {
            kept.push(s);
        }
    }
    kept
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum UnitKind {
    Np,
    Verb,
    Tok(Pos),
}

#[derive(Debug, Clone)]
struct Unit {
    span: Range<usize>,
    kind: UnitKind,
    promoted: bool,
    paren: bool,
}

impl Unit {
    fn token(i: usize, pos: Pos) -> Self {
        Unit {
            span: i..i + 1,
            kind: UnitKind::Tok(pos),
            promoted: false,
            paren: false,
        }
    }

    fn is_np(&self) -> bool {
        self.kind == UnitKind::Np
    }

    fn is_verb(&self) -> bool {
        matches!(self.kind, UnitKind::Verb | UnitKind::Tok(Pos::Verb))
    }

    fn is_tok(&self, pos: Pos) -> bool {
        self.kind == UnitKind::Tok(pos)
    }
}

fn is_determiner(tok: &Token) -> bool {
    tok.pos == Pos::Det
        || (tok.pos == Pos::Pron
            && (tok.tag == "PRP$" || POSSESSIVES.contains(&tok.text.to_lowercase().as_str())))
}

/// Splits the sentence into single tokens and promoted spans.
fn atomic_units(sentence: &Sentence, promoted: &[Range<usize>]) -> Vec<Unit> {
    let mut units = Vec::with_capacity(sentence.tokens.len());
    let mut spans = promoted.iter().peekable();
    let mut i = 0;
    while i < sentence.tokens.len() {
        if let Some(span) = spans.next_if(|s| s.start == i) {
            units.push(Unit {
                span: span.clone(),
                kind: UnitKind::Np,
                promoted: true,
                paren: false,
            });
            i = span.end;
        } else {
            units.push(Unit::token(i, sentence.tokens[i].pos));
            i += 1;
        }
    }
    units
}

/// Groups units into base noun phrases.
fn base_noun_phrases(sentence: &Sentence, atoms: Vec<Unit>) -> Vec<Unit> {
    let token = |u: &Unit| &sentence.tokens[u.span.start];
    let is_head = |u: &Unit| u.promoted || matches!(u.kind, UnitKind::Tok(Pos::Noun | Pos::Propn));
    let is_modifier = |u: &Unit| {
        is_head(u) || matches!(u.kind, UnitKind::Tok(Pos::Adj | Pos::Num))
    };

    let mut out = Vec::with_capacity(atoms.len());
    let mut u = 0;
    while u < atoms.len() {
        let mut j = u;
        if !atoms[u].promoted && is_determiner(token(&atoms[u])) {
            j += 1;
        }
        let mut last_head = None;
        while j < atoms.len() && is_modifier(&atoms[j]) {
            if is_head(&atoms[j]) {
                last_head = Some(j);
            }
            j += 1;
        }
        let end = match last_head {
            Some(h) => Some(h),
            None if atoms[u].is_tok(Pos::Pron) => Some(u),
            None => None,
        };
        match end {
            Some(e) => {
                out.push(Unit {
                    span: atoms[u].span.start..atoms[e].span.end,
                    kind: UnitKind::Np,
                    promoted: false,
                    paren: false,
                });
                u = e + 1;
            }
            None => {
                out.push(atoms[u].clone());
                u += 1;
            }
        }
    }
    out
}

fn merged(units: &[Unit], kind: UnitKind, paren: bool) -> Unit {
    Unit {
        span: units[0].span.start..units[units.len() - 1].span.end,
        kind,
        promoted: false,
        paren,
    }
}

/// Applies the noun-phrase merge rules, leftmost match of the highest-priority
/// rule first, until none applies.
fn merge_noun_phrases(sentence: &Sentence, mut units: Vec<Unit>) -> Vec<Unit> {
    let text_is = |u: &Unit, s: &str| {
        matches!(u.kind, UnitKind::Tok(_)) && sentence.tokens[u.span.start].text.eq_ignore_ascii_case(s)
    };
    loop {
        let paren = units.windows(3).position(|w| {
            text_is(&w[0], "(") && w[1].is_np() && text_is(&w[2], ")")
        });
        if let Some(i) = paren {
            let m = merged(&units[i..i + 3], UnitKind::Np, true);
            units.splice(i..i + 3, [m]);
            continue;
        }
        let of = units
            .windows(3)
            .position(|w| w[0].is_np() && text_is(&w[1], "of") && w[2].is_np());
        if let Some(i) = of {
            let m = merged(&units[i..i + 3], UnitKind::Np, false);
            units.splice(i..i + 3, [m]);
            continue;
        }
        let adjacent = units.windows(2).position(|w| w[0].is_np() && w[1].is_np());
        if let Some(i) = adjacent {
            let m = merged(&units[i..i + 2], UnitKind::Np, false);
            units.splice(i..i + 2, [m]);
            continue;
        }
        return units;
    }
}

fn merge_verb_phrases(mut units: Vec<Unit>, opts: ChunkOptions) -> Vec<Unit> {
    let joins = |a: &Unit, b: &Unit| {
        let satellite = |u: &Unit| {
            u.is_tok(Pos::Part) || u.is_tok(Pos::Adp) || (opts.adv_in_verb_chunks && u.is_tok(Pos::Adv))
        };
        (a.is_verb() && (b.is_verb() || satellite(b))) || (satellite(a) && b.is_verb())
    };
    while let Some(i) = units.windows(2).position(|w| joins(&w[0], &w[1])) {
        let m = merged(&units[i..i + 2], UnitKind::Verb, false);
        units.splice(i..i + 2, [m]);
    }
    units
}

fn chunk_sentence(
    doc: &AnnotatedDocument,
    sentence: &Sentence,
    opts: ChunkOptions,
    order: &mut usize,
) -> Vec<Chunk> {
    let promoted = promote_entity_spans(sentence, doc.entities());
    let units = atomic_units(sentence, &promoted);
    let units = base_noun_phrases(sentence, units);
    let units = merge_noun_phrases(sentence, units);
    let units = merge_verb_phrases(units, opts);

    units
        .into_iter()
        .map(|u| {
            let kind = match u.kind {
                UnitKind::Np => ChunkKind::Entity,
                UnitKind::Verb | UnitKind::Tok(Pos::Verb) => ChunkKind::Verb,
                UnitKind::Tok(pos) => ChunkKind::Pass(pos),
            };
            let text_span = if u.paren {
                u.span.start + 1..u.span.end - 1
            } else {
                u.span.clone()
            };
            let chunk = Chunk {
                sentence: sentence.index,
                order: *order,
                text: doc.span_text(sentence.index, text_span).to_string(),
                kind,
                span: u.span,
            };
            *order += 1;
            chunk
        })
        .collect()
}

/// Chunks every sentence of a POS-normalized document.
pub fn chunk_document(doc: AnnotatedDocument, opts: ChunkOptions) -> ChunkedDocument {
    let mut order = 0;
    let chunks = doc
        .sentences()
        .iter()
        .flat_map(|s| chunk_sentence(&doc, s, opts, &mut order))
        .collect();
    ChunkedDocument { doc, chunks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{Iob, Sentence};

    /// Builds a one-sentence document from (word, POS) pairs, with optional
    /// entity mentions given as (label, start, end).
    pub(crate) fn tagged(words: &[(&str, Pos)], ents: &[(&str, usize, usize)]) -> AnnotatedDocument {
        let mut text = String::new();
        let mut tokens = Vec::new();
        for (i, (w, pos)) in words.iter().enumerate() {
            if i > 0 {
                text.push(' ');
            }
            let start = text.chars().count();
            text.push_str(w);
            let ent = ents.iter().find(|(_, s, e)| (*s..*e).contains(&i));
            let (ent_type, iob) = match ent {
                Some((label, s, _)) if *s == i => (label.to_string(), Iob::B),
                Some((label, _, _)) => (label.to_string(), Iob::I),
                None => (String::new(), Iob::O),
            };
            tokens.push(Token {
                index: i,
                text: w.to_string(),
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
        let sentence = Sentence { index: 0, tokens };
        let entities = ents
            .iter()
            .map(|(label, s, e)| EntityMention {
                text: words[*s..*e].iter().map(|(w, _)| *w).collect::<Vec<_>>().join(" "),
                label: label.to_string(),
                sentence: 0,
                start: *s,
                end: *e,
            })
            .collect();
        AnnotatedDocument::new("t", text, vec![sentence], entities, vec![]).unwrap()
    }

    fn shape(cd: &ChunkedDocument) -> Vec<(String, &'static str)> {
        cd.chunks.iter().map(|c| (c.text.clone(), c.kind.as_str())).collect()
    }

    fn owned(v: &[(&str, &'static str)]) -> Vec<(String, &'static str)> {
        v.iter().map(|(a, b)| (a.to_string(), *b)).collect()
    }

    #[test]
    fn cat_sat_on_the_mat() {
        use Pos::*;
        let doc = tagged(
            &[("The", Det), ("cat", Noun), ("sat", Verb), ("on", Adp), ("the", Det), ("mat", Noun)],
            &[],
        );
        let cd = chunk_document(doc, ChunkOptions::default());
        // Hand trace: DET NOUN -> NP; VERB + ADP -> VERB; DET NOUN -> NP.
        assert_eq!(
            shape(&cd),
            owned(&[("The cat", "ENTITY"), ("sat on", "VERB"), ("the mat", "ENTITY")])
        );
        let spans: Vec<_> = cd.chunks.iter().map(|c| c.span.clone()).collect();
        assert_eq!(spans, vec![0..2, 2..4, 4..6]);
    }

    #[test]
    fn empty_document_has_no_chunks() {
        let cd = chunk_document(AnnotatedDocument::empty("e"), ChunkOptions::default());
        assert!(cd.chunks.is_empty());
    }

    #[test]
    fn nominal_labels_promote_adjectival_do_not() {
        use Pos::*;
        let doc = tagged(
            &[("an", Det), ("American", Adj), ("firm", Noun), ("in", Adp), ("New", Propn), ("York", Propn)],
            &[("NORP", 1, 2), ("GPE", 4, 6)],
        );
        let spans = promote_entity_spans(&doc.sentences()[0], doc.entities());
        assert_eq!(spans, vec![4..6]);
    }

    #[test]
    fn no_entities_no_promotion() {
        let doc = tagged(&[("runs", Pos::Verb)], &[]);
        assert!(promote_entity_spans(&doc.sentences()[0], doc.entities()).is_empty());
    }

    #[test]
    fn parenthesized_noun_phrase() {
        use Pos::*;
        let doc = tagged(
            &[("uses", Verb), ("(", Punct), ("magnetic", Adj), ("dampers", Noun), (")", Punct), ("now", Adv)],
            &[],
        );
        let cd = chunk_document(doc, ChunkOptions::default());
        assert_eq!(
            shape(&cd),
            owned(&[("uses", "VERB"), ("magnetic dampers", "ENTITY"), ("now", "ADV")])
        );
        assert_eq!(cd.chunks[1].span, 1..5);
    }

    #[test]
    fn adjacent_noun_phrases_and_of_merge() {
        use Pos::*;
        let doc = tagged(
            &[("Ford", Propn), ("(", Punct), ("FMC", Propn), (")", Punct), ("builds", Verb), ("cars", Noun), ("of", Adp), ("the", Det), ("future", Noun)],
            &[("ORG", 0, 1)],
        );
        let cd = chunk_document(doc, ChunkOptions::default());
        assert_eq!(
            shape(&cd),
            // the helper separates every token by a space
            owned(&[("Ford ( FMC )", "ENTITY"), ("builds", "VERB"), ("cars of the future", "ENTITY")])
        );
    }

    #[test]
    fn verb_particle_and_adverb_flag() {
        use Pos::*;
        let words = [("He", Pron), ("quickly", Adv), ("set", Verb), ("up", Part), ("shop", Noun)];
        let cd = chunk_document(tagged(&words, &[]), ChunkOptions::default());
        assert_eq!(
            shape(&cd),
            owned(&[("He", "ENTITY"), ("quickly", "ADV"), ("set up", "VERB"), ("shop", "ENTITY")])
        );
        let cd = chunk_document(tagged(&words, &[]), ChunkOptions { adv_in_verb_chunks: true });
        assert_eq!(
            shape(&cd),
            owned(&[("He", "ENTITY"), ("quickly set up", "VERB"), ("shop", "ENTITY")])
        );
    }

    #[test]
    fn bare_determiner_passes_through() {
        use Pos::*;
        let doc = tagged(&[("that", Det), ("has", Verb), ("wheels", Noun)], &[]);
        let cd = chunk_document(doc, ChunkOptions::default());
        assert_eq!(
            shape(&cd),
            owned(&[("that", "DET"), ("has", "VERB"), ("wheels", "ENTITY")])
        );
    }

    #[test]
    fn determiner_absorbed_before_promoted_span() {
        use Pos::*;
        let doc = tagged(
            &[("by", Adp), ("the", Det), ("Ford", Propn), ("family", Noun)],
            &[("ORG", 2, 3)],
        );
        let cd = chunk_document(doc, ChunkOptions::default());
        assert_eq!(shape(&cd), owned(&[("by", "ADP"), ("the Ford family", "ENTITY")]));
    }

    #[test]
    fn lone_adjective_is_not_a_noun_phrase() {
        use Pos::*;
        let doc = tagged(&[("is", Verb), ("red", Adj)], &[]);
        let cd = chunk_document(doc, ChunkOptions::default());
        assert_eq!(shape(&cd), owned(&[("is", "VERB"), ("red", "ADJ")]));
    }
}
