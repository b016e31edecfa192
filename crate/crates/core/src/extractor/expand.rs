use std::collections::{BTreeMap, VecDeque};

use super::{Provenance, Triple, TripleSet};

pub const DEFAULT_PREPOSITIONS: [&str; 3] = ["in", "at", "on"];

/// True when one of the relation's words, case-folded, is a listed
/// preposition. "founded" does not contain the word "in".
pub fn is_locative<S: AsRef<str>>(relation: &str, prepositions: &[S]) -> bool {
    relation
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .any(|w| {
            let w = w.to_lowercase();
            prepositions.iter().any(|p| p.as_ref() == w)
        })
}

/// Adds `(h, "in", t)` for every ordered node pair without a direct edge
/// where some shortest directed path from `h` to `t` ends in a locative edge.
///
/// Input order is kept; additions follow in lexicographic `(h, t)` order.
pub fn expand_graph<S: AsRef<str>>(triples: &TripleSet, prepositions: &[S]) -> TripleSet {
    let mut ids: BTreeMap<&str, usize> = BTreeMap::new();
    for t in triples {
        ids.insert(&t.head, 0);
        ids.insert(&t.tail, 0);
    }
    let names: Vec<&str> = ids.keys().copied().collect();
    for (i, id) in ids.values_mut().enumerate() {
        *id = i;
    }

    let n = names.len();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    // incoming edges as (source, locative?)
    let mut in_edges: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for t in triples {
        let (h, tl) = (ids[t.head.as_str()], ids[t.tail.as_str()]);
        out_edges[h].push(tl);
        in_edges[tl].push((h, is_locative(&t.relation, prepositions)));
    }

    let mut expanded = triples.clone();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for source in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &v in &out_edges[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for target in 0..n {
            let d = dist[target];
            if d < 2 || d == usize::MAX {
                continue;
            }
            let qualifies = in_edges[target]
                .iter()
                .any(|&(pred, locative)| locative && dist[pred] == d - 1);
            if qualifies {
                if let Some(t) = Triple::new(names[source], "in", names[target], Provenance::Graph) {
                    expanded.insert(t);
                }
            }
        }
    }
    expanded
}
