//! Tab-separated and JSON-lines file formats.
//!
//! Every TSV starts with a header row. Fields may not contain tabs or
//! newlines; those are replaced by spaces on write.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chunker::ChunkedDocument;
use crate::enricher::{EnrichedTriple, EntityClass};
use crate::extractor::{Provenance, Triple, TripleSet};
use crate::graph::CentralityReport;

pub const TRIPLES_HEADER: [&str; 4] = ["head", "relation", "tail", "provenance"];

pub const ENRICHED_HEADER: [&str; 10] = [
    "head",
    "relation",
    "tail",
    "relation_label",
    "type_h",
    "type_t",
    "deg_h",
    "deg_t",
    "betw_h",
    "betw_t",
];

pub const METRICS_HEADER: [&str; 3] = ["node", "degree", "betweenness"];

pub const CHUNKS_HEADER: [&str; 4] = ["sent", "phrase", "text", "type"];

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct TsvError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> TsvError {
    TsvError {
        line,
        message: message.into(),
    }
}

fn field(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

fn row(out: &mut String, cols: &[&str]) {
    let cols: Vec<String> = cols.iter().map(|c| field(c)).collect();
    out.push_str(&cols.join("\t"));
    out.push('\n');
}

/// Fixed four-decimal rendering used for betweenness columns.
pub fn format_betweenness(value: f64) -> String {
    format!("{value:.4}")
}

/// Splits data rows after checking the header. Yields 1-based line numbers.
fn data_rows<'a>(
    content: &'a str,
    header: &[&str],
) -> Result<impl Iterator<Item = (usize, Vec<&'a str>)> + 'a, TsvError> {
    let mut lines = content.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim_end_matches('\r').split('\t').eq(header.iter().copied()) => {}
        Some(_) => return Err(err(1, format!("expected header `{}`", header.join("\\t")))),
        None => return Err(err(1, "missing header")),
    }
    Ok(lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r').split('\t').collect())))
}

fn expect_columns(line: usize, cols: &[&str], n: usize) -> Result<(), TsvError> {
    if cols.len() != n {
        return Err(err(line, format!("expected {n} columns, found {}", cols.len())));
    }
    Ok(())
}

fn make_triple(line: usize, h: &str, r: &str, t: &str, p: Provenance) -> Result<Triple, TsvError> {
    Triple::new(h, r, t, p).ok_or_else(|| err(line, "empty phrase or head equal to tail"))
}

pub fn write_triples_tsv(triples: &TripleSet) -> String {
    let mut out = String::new();
    row(&mut out, &TRIPLES_HEADER);
    for t in triples {
        row(&mut out, &[&t.head, &t.relation, &t.tail, &t.provenance.to_string()]);
    }
    out
}

pub fn read_triples_tsv(content: &str) -> Result<TripleSet, TsvError> {
    let mut set = TripleSet::new();
    for (line, cols) in data_rows(content, &TRIPLES_HEADER)? {
        expect_columns(line, &cols, 4)?;
        let provenance: Provenance = cols[3].parse().map_err(|e| err(line, format!("{e}")))?;
        set.insert(make_triple(line, cols[0], cols[1], cols[2], provenance)?);
    }
    Ok(set)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleRecord {
    head: String,
    relation: String,
    tail: String,
    provenance: String,
}

pub fn write_triples_jsonl(triples: &TripleSet) -> String {
    let mut out = String::new();
    for t in triples {
        let rec = TripleRecord {
            head: t.head.clone(),
            relation: t.relation.clone(),
            tail: t.tail.clone(),
            provenance: t.provenance.to_string(),
        };
        out.push_str(&serde_json::to_string(&rec).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn read_triples_jsonl(content: &str) -> Result<TripleSet, TsvError> {
    let mut set = TripleSet::new();
    for (i, l) in content.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let line = i + 1;
        let rec: TripleRecord = serde_json::from_str(l).map_err(|e| err(line, e.to_string()))?;
        let provenance: Provenance = rec.provenance.parse().map_err(|e| err(line, format!("{e}")))?;
        set.insert(make_triple(line, &rec.head, &rec.relation, &rec.tail, provenance)?);
    }
    Ok(set)
}

pub fn write_enriched_tsv(rows: &[EnrichedTriple]) -> String {
    let mut out = String::new();
    row(&mut out, &ENRICHED_HEADER);
    for r in rows {
        row(
            &mut out,
            &[
                &r.triple.head,
                &r.triple.relation,
                &r.triple.tail,
                &r.relation_label,
                r.head_type.as_str(),
                r.tail_type.as_str(),
                &r.head_degree.to_string(),
                &r.tail_degree.to_string(),
                &format_betweenness(r.head_betweenness),
                &format_betweenness(r.tail_betweenness),
            ],
        );
    }
    out
}

/// Reads enriched rows back. The file does not record provenance, so rows
/// come back as [`Provenance::Imported`].
pub fn read_enriched_tsv(content: &str) -> Result<Vec<EnrichedTriple>, TsvError> {
    let mut out = Vec::new();
    for (line, cols) in data_rows(content, &ENRICHED_HEADER)? {
        expect_columns(line, &cols, 10)?;
        let class = |s: &str| s.parse::<EntityClass>().map_err(|e| err(line, e.to_string()));
        let int = |s: &str| s.parse::<usize>().map_err(|_| err(line, format!("`{s}` is not a count")));
        let real = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v >= 0.0)
                .ok_or_else(|| err(line, format!("`{s}` is not a betweenness value")))
        };
        out.push(EnrichedTriple {
            triple: make_triple(line, cols[0], cols[1], cols[2], Provenance::Imported)?,
            relation_label: cols[3].to_string(),
            head_type: class(cols[4])?,
            tail_type: class(cols[5])?,
            head_degree: int(cols[6])?,
            tail_degree: int(cols[7])?,
            head_betweenness: real(cols[8])?,
            tail_betweenness: real(cols[9])?,
        });
    }
    Ok(out)
}

pub fn write_metrics_tsv(report: &CentralityReport) -> String {
    let mut out = String::new();
    row(&mut out, &METRICS_HEADER);
    for (node, c) in report.iter() {
        row(&mut out, &[node, &c.degree.to_string(), &format_betweenness(c.betweenness)]);
    }
    out
}

/// Chunk listing with the columns sentence, phrase number, phrase, type.
pub fn write_chunks_tsv(cd: &ChunkedDocument) -> String {
    let mut out = String::new();
    row(&mut out, &CHUNKS_HEADER);
    for c in &cd.chunks {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", c.sentence, c.order, field(&c.text), c.kind);
    }
    out
}
