//! End-to-end composition: chunk, resolve coreference, map, expand, filter,
//! strip, then enrich.

use thiserror::Error;

use crate::chunker::{chunk_document, ChunkOptions, ChunkedDocument};
use crate::config::{ConfigError, PipelineConfig};
use crate::coref::resolve_coreferences;
use crate::enricher::{enrich_triples, EnrichedTriple, LookupTyper, RelationTyper, TyperError};
use crate::extractor::{
    expand_graph, filter_triples, get_triples, strip_articles, DegenerateTriple, MappingOptions,
    StopList, TripleSet,
};
use crate::graph::{build_graph, CentralityReport};
use crate::ingest::{normalize_pos, AnnotatedDocument};

#[derive(Debug, Error)]
pub enum SetupError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot read stop list {path}: {source}")]
    StopList {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Typer(#[from] TyperError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Extraction {
    pub triples: TripleSet,
    /// Triples dropped because article stripping emptied a side.
    pub degenerate: Vec<DegenerateTriple>,
}

/// Everything needed to run documents through the engine, loaded once.
pub struct Pipeline {
    config: PipelineConfig,
    stop: StopList,
    typer: Box<dyn RelationTyper>,
}

impl Default for Pipeline {
    fn default() -> Self {
        Pipeline {
            config: PipelineConfig::default(),
            stop: StopList::default(),
            typer: Box::new(LookupTyper::new()),
        }
    }
}

impl Pipeline {
    /// Validates the config and loads the stop list and relation table it
    /// points at.
    pub fn from_config(config: PipelineConfig) -> Result<Self, SetupError> {
        config.validate()?;
        let stop = match &config.stopwords_path {
            Some(path) => StopList::from_file(path).map_err(|source| SetupError::StopList {
                path: path.display().to_string(),
                source,
            })?,
            None => StopList::default(),
        };
        let typer = match &config.relation_table_path {
            Some(path) => LookupTyper::load_table(path)?,
            None => LookupTyper::new(),
        };
        Ok(Pipeline {
            config,
            stop,
            typer: Box::new(typer),
        })
    }

    pub fn with_typer(mut self, typer: Box<dyn RelationTyper>) -> Self {
        self.typer = typer;
        self
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    fn chunk_options(&self) -> ChunkOptions {
        ChunkOptions {
            adv_in_verb_chunks: self.config.adv_in_verb_chunks,
        }
    }

    /// Chunks with coreferences already substituted.
    pub fn chunks(&self, doc: &AnnotatedDocument) -> ChunkedDocument {
        let normalized = normalize_pos(doc.clone());
        resolve_coreferences(chunk_document(normalized, self.chunk_options()))
    }

    pub fn extract(&self, doc: &AnnotatedDocument) -> Extraction {
        let chunked = self.chunks(doc);
        let mapped = get_triples(
            &chunked,
            MappingOptions {
                literal_leftright: self.config.literal_leftright_mapping,
            },
        );
        let expanded = expand_graph(&mapped, &self.config.expansion_prepositions);
        let filtered = filter_triples(&expanded, &self.stop);
        let stripped = strip_articles(&filtered);
        Extraction {
            triples: stripped.triples,
            degenerate: stripped.degenerate,
        }
    }

    pub fn enrich(&self, doc: &AnnotatedDocument, triples: &TripleSet) -> (CentralityReport, Vec<EnrichedTriple>) {
        let report = CentralityReport::compute(&build_graph(triples));
        let rows = enrich_triples(
            triples,
            doc,
            &report,
            self.typer.as_ref(),
            self.config.similarity_threshold,
        );
        (report, rows)
    }
}

/// Runs the default pipeline.
pub fn extract_triples(doc: &AnnotatedDocument) -> TripleSet {
    Pipeline::default().extract(doc).triples
}
