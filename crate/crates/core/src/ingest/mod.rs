//! Annotation interchange format.
//!
//! A document arrives as JSON produced by an external annotator: sentences of
//! tokens carrying entity/IOB tags, coarse and fine POS, character offsets and
//! dependency labels, plus entity mentions and coreference clusters. Offsets
//! are character (not byte) positions and the token `end` is inclusive, so the
//! token "Ford" at the start of a document spans `0..=3`.
//!
//! [`parse_annotation`] is the only way in: every [`AnnotatedDocument`] that
//! exists has passed validation.

mod clean;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use clean::clean_text;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IngestError {
    #[error("content is not valid UTF-8: {0}")]
    Utf8(String),
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("span error at `{path}`: {message}")]
    Span { path: String, message: String },
    #[error("IOB error at `{path}`: {message}")]
    Iob { path: String, message: String },
}

impl IngestError {
    fn span(path: impl Into<String>, message: impl Into<String>) -> Self {
        IngestError::Span {
            path: path.into(),
            message: message.into(),
        }
    }

    fn iob(path: impl Into<String>, message: impl Into<String>) -> Self {
        IngestError::Iob {
            path: path.into(),
            message: message.into(),
        }
    }

    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        IngestError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Iob {
    B,
    I,
    O,
}

/// Coarse (universal) part-of-speech tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Conj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
    Space,
}

impl Pos {
    pub const ALL: [Pos; 19] = [
        Pos::Adj,
        Pos::Adp,
        Pos::Adv,
        Pos::Aux,
        Pos::Cconj,
        Pos::Conj,
        Pos::Det,
        Pos::Intj,
        Pos::Noun,
        Pos::Num,
        Pos::Part,
        Pos::Pron,
        Pos::Propn,
        Pos::Punct,
        Pos::Sconj,
        Pos::Sym,
        Pos::Verb,
        Pos::X,
        Pos::Space,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Adj => "ADJ",
            Pos::Adp => "ADP",
            Pos::Adv => "ADV",
            Pos::Aux => "AUX",
            Pos::Cconj => "CCONJ",
            Pos::Conj => "CONJ",
            Pos::Det => "DET",
            Pos::Intj => "INTJ",
            Pos::Noun => "NOUN",
            Pos::Num => "NUM",
            Pos::Part => "PART",
            Pos::Pron => "PRON",
            Pos::Propn => "PROPN",
            Pos::Punct => "PUNCT",
            Pos::Sconj => "SCONJ",
            Pos::Sym => "SYM",
            Pos::Verb => "VERB",
            Pos::X => "X",
            Pos::Space => "SPACE",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown coarse POS tag `{0}`")]
pub struct UnknownPos(pub String);

impl FromStr for Pos {
    type Err = UnknownPos;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pos::ALL
            .iter()
            .copied()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| UnknownPos(s.to_string()))
    }
}

impl Serialize for Pos {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Pos {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Token {
    /// Position within the sentence.
    #[serde(rename = "i")]
    pub index: usize,
    pub text: String,
    pub ent_type: String,
    pub iob: Iob,
    pub pos: Pos,
    pub tag: String,
    /// First character offset into the document text.
    pub start: usize,
    /// Last character offset, inclusive.
    pub end: usize,
    pub dep: String,
    /// Sentence-local index of the dependency head; roots point at themselves.
    pub head: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sentence {
    #[serde(skip)]
    pub index: usize,
    pub tokens: Vec<Token>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntityMention {
    pub text: String,
    pub label: String,
    #[serde(rename = "sent")]
    pub sentence: usize,
    pub start: usize,
    /// Exclusive token index.
    pub end: usize,
}

impl EntityMention {
    pub fn span(&self) -> Range<usize> {
        self.start..self.end
    }
}

/// A token span inside one sentence, end exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MentionRef {
    #[serde(rename = "sent")]
    pub sentence: usize,
    pub start: usize,
    pub end: usize,
}

impl MentionRef {
    pub fn span(&self) -> Range<usize> {
        self.start..self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorefCluster {
    /// Index into `mentions` of the representative mention.
    pub main: usize,
    pub mentions: Vec<MentionRef>,
}

impl CorefCluster {
    pub fn representative(&self) -> &MentionRef {
        &self.mentions[self.main]
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    doc_id: String,
    text: String,
    sentences: Vec<Sentence>,
    entities: Vec<EntityMention>,
    coref: Vec<CorefCluster>,
}

/// A validated annotated document.
///
/// Fields are read-only; construct through [`AnnotatedDocument::new`] or
/// [`parse_annotation`] so the invariants always hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnotatedDocument {
    doc_id: String,
    text: String,
    sentences: Vec<Sentence>,
    entities: Vec<EntityMention>,
    coref: Vec<CorefCluster>,
    /// Byte offset of every char in `text`, plus `text.len()`.
    #[serde(skip)]
    char_bytes: Vec<usize>,
}

impl AnnotatedDocument {
    /// Builds and validates a document. Sentence indices are assigned from
    /// position.
    pub fn new(
        doc_id: impl Into<String>,
        text: impl Into<String>,
        mut sentences: Vec<Sentence>,
        entities: Vec<EntityMention>,
        coref: Vec<CorefCluster>,
    ) -> Result<Self, IngestError> {
        let text = text.into();
        let mut char_bytes: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
        char_bytes.push(text.len());
        for (i, s) in sentences.iter_mut().enumerate() {
            s.index = i;
        }
        let doc = AnnotatedDocument {
            doc_id: doc_id.into(),
            text,
            sentences,
            entities,
            coref,
            char_bytes,
        };
        doc.validate()?;
        Ok(doc)
    }

    pub fn empty(doc_id: impl Into<String>) -> Self {
        AnnotatedDocument::new(doc_id, "", Vec::new(), Vec::new(), Vec::new())
            .expect("empty document is valid")
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn entities(&self) -> &[EntityMention] {
        &self.entities
    }

    pub fn coref(&self) -> &[CorefCluster] {
        &self.coref
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(|s| s.tokens.len()).sum()
    }

    fn char_len(&self) -> usize {
        self.char_bytes.len() - 1
    }

    /// Text between two inclusive character offsets.
    pub fn char_slice(&self, start: usize, end_inclusive: usize) -> &str {
        &self.text[self.char_bytes[start]..self.char_bytes[end_inclusive + 1]]
    }

    /// Original text covered by a non-empty token range of one sentence,
    /// including the spacing between tokens.
    pub fn span_text(&self, sentence: usize, span: Range<usize>) -> &str {
        let tokens = &self.sentences[sentence].tokens;
        self.char_slice(tokens[span.start].start, tokens[span.end - 1].end)
    }

    pub fn mention_text(&self, mention: &MentionRef) -> &str {
        self.span_text(mention.sentence, mention.span())
    }

    fn validate(&self) -> Result<(), IngestError> {
        let char_len = self.char_len();
        let mut prev_end: Option<usize> = None;
        for (si, sentence) in self.sentences.iter().enumerate() {
            let spath = format!("sentences[{si}]");
            if sentence.tokens.is_empty() {
                return Err(IngestError::schema(
                    format!("{spath}.tokens"),
                    "sentence has no tokens",
                ));
            }
            let n = sentence.tokens.len();
            for (ti, tok) in sentence.tokens.iter().enumerate() {
                let tpath = format!("{spath}.tokens[{ti}]");
                if tok.index != ti {
                    return Err(IngestError::schema(
                        format!("{tpath}.i"),
                        format!("expected token index {ti}, found {}", tok.index),
                    ));
                }
                if tok.head >= n {
                    return Err(IngestError::span(
                        format!("{tpath}.head"),
                        format!("head {} outside sentence of {n} tokens", tok.head),
                    ));
                }
                if tok.start > tok.end {
                    return Err(IngestError::span(
                        format!("{tpath}.start"),
                        format!("start {} after end {}", tok.start, tok.end),
                    ));
                }
                if tok.end >= char_len {
                    return Err(IngestError::span(
                        format!("{tpath}.end"),
                        format!("offset {} outside text of {char_len} chars", tok.end),
                    ));
                }
                if let Some(prev) = prev_end {
                    if tok.start <= prev {
                        return Err(IngestError::span(
                            format!("{tpath}.start"),
                            format!("token overlaps or precedes previous token ending at {prev}"),
                        ));
                    }
                }
                prev_end = Some(tok.end);
                let covered = self.char_slice(tok.start, tok.end);
                if covered != tok.text {
                    return Err(IngestError::span(
                        tpath,
                        format!(
                            "offsets {}..={} cover {:?}, token text is {:?}",
                            tok.start, tok.end, covered, tok.text
                        ),
                    ));
                }
                validate_iob(&tpath, tok, ti.checked_sub(1).map(|p| &sentence.tokens[p]))?;
            }
        }

        for (ei, ent) in self.entities.iter().enumerate() {
            let path = format!("entities[{ei}]");
            self.check_span(&path, ent.sentence, ent.span())?;
            let covered = self.span_text(ent.sentence, ent.span());
            if covered != ent.text {
                return Err(IngestError::span(
                    format!("{path}.text"),
                    format!("span covers {covered:?}, entity text is {:?}", ent.text),
                ));
            }
        }

        for (ci, cluster) in self.coref.iter().enumerate() {
            let path = format!("coref[{ci}]");
            if cluster.mentions.len() < 2 {
                return Err(IngestError::schema(
                    format!("{path}.mentions"),
                    "a cluster needs at least two mentions",
                ));
            }
            if cluster.main >= cluster.mentions.len() {
                return Err(IngestError::schema(
                    format!("{path}.main"),
                    format!(
                        "main {} out of range for {} mentions",
                        cluster.main,
                        cluster.mentions.len()
                    ),
                ));
            }
            for (mi, m) in cluster.mentions.iter().enumerate() {
                self.check_span(&format!("{path}.mentions[{mi}]"), m.sentence, m.span())?;
            }
        }
        Ok(())
    }

    fn check_span(&self, path: &str, sentence: usize, span: Range<usize>) -> Result<(), IngestError> {
        let Some(s) = self.sentences.get(sentence) else {
            return Err(IngestError::span(
                format!("{path}.sent"),
                format!("sentence {sentence} does not exist"),
            ));
        };
        if span.start >= span.end || span.end > s.tokens.len() {
            return Err(IngestError::span(
                path,
                format!(
                    "token span {}..{} invalid for sentence of {} tokens",
                    span.start,
                    span.end,
                    s.tokens.len()
                ),
            ));
        }
        Ok(())
    }
}

fn validate_iob(path: &str, tok: &Token, prev: Option<&Token>) -> Result<(), IngestError> {
    match tok.iob {
        Iob::O if !tok.ent_type.is_empty() => Err(IngestError::iob(
            path,
            format!("O token carries entity type {:?}", tok.ent_type),
        )),
        Iob::B | Iob::I if tok.ent_type.is_empty() => Err(IngestError::iob(
            path,
            format!("{:?} token has no entity type", tok.iob),
        )),
        Iob::I => match prev {
            Some(p) if p.iob != Iob::O && p.ent_type == tok.ent_type => Ok(()),
            _ => Err(IngestError::iob(
                path,
                format!("dangling I-{} tag", tok.ent_type),
            )),
        },
        _ => Ok(()),
    }
}

/// Parses and validates interchange JSON.
pub fn parse_annotation(content: &[u8]) -> Result<AnnotatedDocument, IngestError> {
    let text = std::str::from_utf8(content).map_err(|e| IngestError::Utf8(e.to_string()))?;
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        IngestError::Schema {
            path,
            message: e.into_inner().to_string(),
        }
    })?;
    AnnotatedDocument::new(raw.doc_id, raw.text, raw.sentences, raw.entities, raw.coref)
}

/// Serializes a document to interchange JSON.
pub fn serialize_annotation(doc: &AnnotatedDocument) -> Vec<u8> {
    serde_json::to_vec_pretty(doc).expect("document serialization cannot fail")
}

/// Relabels auxiliaries as verbs, matching the tagset the chunk grammar expects.
pub fn normalize_pos(mut doc: AnnotatedDocument) -> AnnotatedDocument {
    for tok in doc.sentences.iter_mut().flat_map(|s| s.tokens.iter_mut()) {
        if tok.pos == Pos::Aux {
            tok.pos = Pos::Verb;
        }
    }
    doc
}
