//! Graph file writers: DOT, GraphML and node-link JSON.
//!
//! Nodes are coloured by entity class and DOT node width grows with degree
//! (`0.5 + 0.25 * degree` inches). Nodes are written in name order and edges
//! in (head, relation, tail) order, so output is byte-stable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::json;

use crate::enricher::{EnrichedTriple, EntityClass};

pub fn class_color(class: EntityClass) -> &'static str {
    match class {
        EntityClass::Per => "red",
        EntityClass::Org => "blue",
        EntityClass::Loc => "green",
        EntityClass::Misc => "orange",
        EntityClass::O => "gray",
    }
}

pub fn node_width(degree: usize) -> f64 {
    0.5 + 0.25 * degree as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeAttrs {
    pub class: EntityClass,
    pub degree: usize,
    pub betweenness: f64,
}

/// Per-node attributes gathered from the enriched rows, sorted by name.
pub fn node_table(rows: &[EnrichedTriple]) -> BTreeMap<&str, NodeAttrs> {
    let mut nodes = BTreeMap::new();
    for r in rows {
        nodes.entry(r.triple.head.as_str()).or_insert(NodeAttrs {
            class: r.head_type,
            degree: r.head_degree,
            betweenness: r.head_betweenness,
        });
        nodes.entry(r.triple.tail.as_str()).or_insert(NodeAttrs {
            class: r.tail_type,
            degree: r.tail_degree,
            betweenness: r.tail_betweenness,
        });
    }
    nodes
}

fn sorted_edges(rows: &[EnrichedTriple]) -> Vec<&EnrichedTriple> {
    let mut edges: Vec<&EnrichedTriple> = rows.iter().collect();
    edges.sort_by(|a, b| a.triple.key().cmp(&b.triple.key()));
    edges
}

fn dot_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Always renders with a decimal point (`11.0`, `0.75`).
fn real(v: f64) -> String {
    format!("{v:?}")
}

pub fn export_dot(rows: &[EnrichedTriple]) -> String {
    if rows.is_empty() {
        return "digraph G { }\n".to_string();
    }
    let mut out = String::from("digraph G {\n");
    out.push_str("  node [shape=ellipse, style=filled, fontname=\"Helvetica\"];\n");
    for (name, attrs) in node_table(rows) {
        let tooltip = format!(
            "{}, degree {}, betweenness {}",
            attrs.class,
            attrs.degree,
            real(attrs.betweenness)
        );
        writeln!(
            out,
            "  {} [fillcolor={}, width={:.2}, tooltip={}];",
            dot_quote(name),
            dot_quote(class_color(attrs.class)),
            node_width(attrs.degree),
            dot_quote(&tooltip)
        )
        .unwrap();
    }
    for r in sorted_edges(rows) {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            dot_quote(&r.triple.head),
            dot_quote(&r.triple.tail),
            dot_quote(&r.triple.relation)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub fn export_graphml(rows: &[EnrichedTriple]) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" \
         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns \
         http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n",
    );
    let keys = [
        ("name", "node", "string"),
        ("type", "node", "string"),
        ("degree", "node", "int"),
        ("betweenness", "node", "double"),
        ("color", "node", "string"),
        ("relation", "edge", "string"),
        ("relation_label", "edge", "string"),
    ];
    for (name, domain, ty) in keys {
        writeln!(
            out,
            "  <key id=\"{name}\" for=\"{domain}\" attr.name=\"{name}\" attr.type=\"{ty}\"/>"
        )
        .unwrap();
    }
    if rows.is_empty() {
        out.push_str("  <graph id=\"G\" edgedefault=\"directed\"/>\n</graphml>\n");
        return out;
    }
    out.push_str("  <graph id=\"G\" edgedefault=\"directed\">\n");
    let nodes = node_table(rows);
    let ids: BTreeMap<&str, usize> = nodes.keys().enumerate().map(|(i, n)| (*n, i)).collect();
    for (name, attrs) in &nodes {
        writeln!(out, "    <node id=\"n{}\">", ids[name]).unwrap();
        writeln!(out, "      <data key=\"name\">{}</data>", xml_escape(name)).unwrap();
        writeln!(out, "      <data key=\"type\">{}</data>", attrs.class).unwrap();
        writeln!(out, "      <data key=\"degree\">{}</data>", attrs.degree).unwrap();
        writeln!(out, "      <data key=\"betweenness\">{}</data>", real(attrs.betweenness)).unwrap();
        writeln!(out, "      <data key=\"color\">{}</data>", class_color(attrs.class)).unwrap();
        out.push_str("    </node>\n");
    }
    for (i, r) in sorted_edges(rows).into_iter().enumerate() {
        writeln!(
            out,
            "    <edge id=\"e{i}\" source=\"n{}\" target=\"n{}\">",
            ids[r.triple.head.as_str()],
            ids[r.triple.tail.as_str()]
        )
        .unwrap();
        writeln!(out, "      <data key=\"relation\">{}</data>", xml_escape(&r.triple.relation)).unwrap();
        writeln!(out, "      <data key=\"relation_label\">{}</data>", xml_escape(&r.relation_label)).unwrap();
        out.push_str("    </edge>\n");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

/// Node-link JSON, the shape force-directed front ends consume.
pub fn export_json(rows: &[EnrichedTriple]) -> String {
    let nodes: Vec<_> = node_table(rows)
        .into_iter()
        .map(|(name, a)| {
            json!({
                "id": name,
                "type": a.class.as_str(),
                "degree": a.degree,
                "betweenness": a.betweenness,
                "color": class_color(a.class),
            })
        })
        .collect();
    let links: Vec<_> = sorted_edges(rows)
        .into_iter()
        .map(|r| {
            json!({
                "source": r.triple.head,
                "target": r.triple.tail,
                "relation": r.triple.relation,
                "relation_label": r.relation_label,
            })
        })
        .collect();
    let doc = json!({ "directed": true, "nodes": nodes, "links": links });
    let mut s = serde_json::to_string_pretty(&doc).expect("json value serializes");
    s.push('\n');
    s
}
