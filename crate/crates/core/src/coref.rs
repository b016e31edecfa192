//! Coreference substitution on entity chunks.

use crate::chunker::{ChunkKind, ChunkedDocument};

/// Mentions with these surface forms are never substituted: the bare noun
/// phrase they modify is kept ("its main headquarters" stays as is).
pub const POSSESSIVE_PRONOUNS: [&str; 7] = ["its", "his", "her", "their", "my", "our", "your"];

/// Replaces the text of entity chunks that a cluster mention starts with by
/// the text of the cluster's representative mention.
///
/// A mention is mapped to the chunk containing its first token, and only when
/// that token is also the chunk's first token. Spans, kinds, order and chunk
/// count never change.
pub fn resolve_coreferences(mut cd: ChunkedDocument) -> ChunkedDocument {
    let mut replacements: Vec<(usize, String)> = Vec::new();
    for cluster in cd.doc.coref() {
        let main = cluster.representative();
        let representative = cd.doc.mention_text(main).to_string();
        for (mi, mention) in cluster.mentions.iter().enumerate() {
            if mi == cluster.main {
                continue;
            }
            let surface = cd.doc.mention_text(mention).to_lowercase();
            if POSSESSIVE_PRONOUNS.contains(&surface.as_str()) {
                continue;
            }
            let target = cd.chunks.iter().position(|c| {
                c.sentence == mention.sentence && c.span.contains(&mention.start)
            });
            if let Some(ci) = target {
                let chunk = &cd.chunks[ci];
                if chunk.kind == ChunkKind::Entity && chunk.span.start == mention.start {
                    replacements.push((ci, representative.clone()));
                }
            }
        }
    }
    for (ci, text) in replacements {
        cd.chunks[ci].text = text;
    }
    cd
}
