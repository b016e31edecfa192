//! Knowledge-graph triple extraction from annotated text.
//!
//! The engine consumes documents that an external annotator has already
//! tokenized, tagged and clustered for coreference (see [`ingest`]), and
//! turns them into `(head, relation, tail)` triples:
//!
//! 1. [`chunker`] partitions sentences into noun-phrase and verb-phrase chunks;
//! 2. [`coref`] substitutes cluster representatives into entity chunks;
//! 3. [`extractor`] maps relation segments to triples, links entities through
//!    locative shortest paths, drops stop-word heads and strips articles;
//! 4. [`graph`] and [`enricher`] attach degree, betweenness, entity classes and
//!    relation labels, and [`export`] writes DOT, GraphML or JSON.
//!
//! ```no_run
//! use kgx::ingest::parse_annotation;
//! use kgx::pipeline::Pipeline;
//!
//! let doc = parse_annotation(&std::fs::read("doc.ann.json").unwrap()).unwrap();
//! let pipeline = Pipeline::default();
//! let triples = pipeline.extract(&doc).triples;
//! let (_metrics, rows) = pipeline.enrich(&doc, &triples);
//! println!("{}", kgx::export::export_dot(&rows));
//! ```

pub mod chunker;
pub mod config;
pub mod coref;
pub mod enricher;
pub mod export;
pub mod extractor;
pub mod graph;
pub mod ingest;
pub mod pipeline;
pub mod tsv;

pub use chunker::{chunk_document, Chunk, ChunkKind, ChunkedDocument};
pub use config::PipelineConfig;
pub use enricher::{EnrichedTriple, EntityClass};
pub use extractor::{Provenance, Triple, TripleSet};
pub use graph::{CentralityReport, KnowledgeGraph};
pub use ingest::{parse_annotation, AnnotatedDocument};
pub use pipeline::{extract_triples, Pipeline};
