//! Knowledge graph over triple phrases, with degree and betweenness.
//!
//! Triples map one-to-one onto directed edges. Centrality is measured on the
//! undirected simple view, where directions and parallel edges collapse.
//! Betweenness is unnormalized and counts each unordered pair once, so the
//! centre of a three-leaf star scores 3.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::extractor::TripleSet;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub head: NodeId,
    pub relation: String,
    pub tail: NodeId,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeGraph {
    nodes: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<Edge>,
}

impl KnowledgeGraph {
    fn intern(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn add_edge(&mut self, head: &str, relation: &str, tail: &str) {
        let head = self.intern(head);
        let tail = self.intern(tail);
        self.edges.push(Edge {
            head,
            relation: relation.to_string(),
            tail,
        });
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: NodeId) -> &str {
        &self.nodes[id]
    }

    /// Sorted neighbour lists of the undirected simple view.
    pub fn undirected_adjacency(&self) -> Vec<Vec<NodeId>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            if e.head != e.tail {
                adj[e.head].push(e.tail);
                adj[e.tail].push(e.head);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    pub fn undirected_edge_count(&self) -> usize {
        self.undirected_adjacency().iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// One directed edge per triple; nodes in order of first appearance.
pub fn build_graph(triples: &TripleSet) -> KnowledgeGraph {
    let mut g = KnowledgeGraph::default();
    for t in triples {
        g.add_edge(&t.head, &t.relation, &t.tail);
    }
    g
}

/// Number of edges incident to each node, in and out.
pub fn degree_counts(g: &KnowledgeGraph) -> Vec<usize> {
    let mut deg = vec![0; g.node_count()];
    for e in g.edges() {
        deg[e.head] += 1;
        deg[e.tail] += 1;
    }
    deg
}

/// Brandes' accumulation over breadth-first searches from every node.
pub fn betweenness_centrality(g: &KnowledgeGraph) -> Vec<f64> {
    let adj = g.undirected_adjacency();
    let n = adj.len();
    let mut centrality = vec![0.0; n];

    let mut stack = Vec::with_capacity(n);
    let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        stack.clear();
        for v in 0..n {
            preds[v].clear();
            sigma[v] = 0.0;
            dist[v] = -1;
            delta[v] = 0.0;
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);

        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &adj[v] {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }

        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                centrality[w] += delta[w];
            }
        }
    }

    // every unordered pair was visited from both ends
    centrality.iter_mut().for_each(|c| *c /= 2.0);
    centrality
}

pub const ORACLE_MAX_NODES: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("brute-force betweenness is limited to {ORACLE_MAX_NODES} nodes, graph has {0}")]
pub struct OracleTooLarge(pub usize);

/// Reference betweenness by listing every shortest path of every pair.
///
/// Exponential; only meant to check [`betweenness_centrality`] on small graphs.
pub fn brute_force_betweenness(g: &KnowledgeGraph) -> Result<Vec<f64>, OracleTooLarge> {
    let n = g.node_count();
    if n > ORACLE_MAX_NODES {
        return Err(OracleTooLarge(n));
    }
    let adj = g.undirected_adjacency();
    let mut centrality = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let paths = all_shortest_paths(&adj, s, t);
            if paths.is_empty() {
                continue;
            }
            let total = paths.len() as f64;
            for (v, c) in centrality.iter_mut().enumerate() {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as f64;
                *c += through / total;
            }
        }
    }
    Ok(centrality)
}

/// Grows simple paths from `s` one layer at a time until some reach `t`.
fn all_shortest_paths(adj: &[Vec<NodeId>], s: NodeId, t: NodeId) -> Vec<Vec<NodeId>> {
    let mut frontier = vec![vec![s]];
    while !frontier.is_empty() {
        let done: Vec<Vec<NodeId>> = frontier
            .iter()
            .filter(|p| *p.last().unwrap() == t)
            .cloned()
            .collect();
        if !done.is_empty() {
            return done;
        }
        let mut next = Vec::new();
        for path in &frontier {
            for &w in &adj[*path.last().unwrap()] {
                if !path.contains(&w) {
                    let mut extended = path.clone();
                    extended.push(w);
                    next.push(extended);
                }
            }
        }
        frontier = next;
    }
    Vec::new()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeCentrality {
    pub degree: usize,
    pub betweenness: f64,
}

/// Degree and betweenness per phrase, keyed by node name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CentralityReport {
    entries: BTreeMap<String, NodeCentrality>,
}

impl CentralityReport {
    pub fn compute(g: &KnowledgeGraph) -> Self {
        let degree = degree_counts(g);
        let betweenness = betweenness_centrality(g);
        let entries = g
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, name)| {
                (
                    name.clone(),
                    NodeCentrality {
                        degree: degree[i],
                        betweenness: betweenness[i],
                    },
                )
            })
            .collect();
        CentralityReport { entries }
    }

    pub fn get(&self, node: &str) -> Option<NodeCentrality> {
        self.entries.get(node).copied()
    }

    /// Entries sorted by node name.
    pub fn iter(&self) -> impl Iterator<Item = (&str, NodeCentrality)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
