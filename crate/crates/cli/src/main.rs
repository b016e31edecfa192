use std::collections::HashMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use kgx::enricher::LookupTyper;
use kgx::export::{export_dot, export_graphml, export_json};
use kgx::graph::build_graph;
use kgx::ingest::clean_text;
use kgx::tsv;
use kgx::{parse_annotation, AnnotatedDocument, CentralityReport, Pipeline, PipelineConfig, TripleSet};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "kgx", version, about = "Extract knowledge-graph triples from annotated text")]
struct Cli {
    /// Pipeline config file (key = value lines)
    #[arg(long, global = true, env = "KGX_CONFIG")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize quotes, dashes and spacing in raw text
    Clean {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract triples from an annotation file
    Extract {
        #[arg(long)]
        ann: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = TripleFormat::Tsv)]
        format: TripleFormat,
        /// Also write the chunk listing to this TSV
        #[arg(long)]
        chunks: Option<PathBuf>,
    },
    /// Degree and betweenness for every node of a triple file
    Metrics {
        #[arg(long)]
        triples: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Attach entity types, relation labels and centrality to triples
    Enrich {
        #[arg(long)]
        ann: PathBuf,
        #[arg(long)]
        triples: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Precomputed relation labels: head, relation, tail, label
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Render an enriched TSV as a graph file
    Export {
        #[arg(long)]
        enriched: PathBuf,
        #[arg(long, value_enum)]
        format: GraphFormat,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every stage over a batch of annotation files
    Pipeline {
        #[arg(long, num_args = 0.., required = false)]
        ann: Vec<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        /// Graph exports to write per document (repeatable)
        #[arg(long = "export", value_enum)]
        exports: Vec<GraphFormat>,
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TripleFormat {
    Tsv,
    Jsonl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Dot,
    Graphml,
    Json,
}

impl GraphFormat {
    fn extension(self) -> &'static str {
        match self {
            GraphFormat::Dot => "dot",
            GraphFormat::Graphml => "graphml",
            GraphFormat::Json => "json",
        }
    }

    fn render(self, rows: &[kgx::EnrichedTriple]) -> String {
        match self {
            GraphFormat::Dot => export_dot(rows),
            GraphFormat::Graphml => export_graphml(rows),
            GraphFormat::Json => export_json(rows),
        }
    }
}

/// Writes through a temp file in the target directory, then renames.
fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create temp file in {}", dir.display()))?;
    tmp.write_all(content.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_document(path: &Path) -> Result<AnnotatedDocument> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(parse_annotation(&bytes)?)
}

fn read_triples(path: &Path) -> Result<TripleSet> {
    let content = read_text(path)?;
    let parsed = if path.extension().is_some_and(|e| e == "jsonl") {
        tsv::read_triples_jsonl(&content)
    } else {
        tsv::read_triples_tsv(&content)
    };
    parsed.with_context(|| format!("in {}", path.display()))
}

fn build_pipeline(config: Option<&Path>, sidecar: Option<&Path>) -> Result<Pipeline> {
    let config = match config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    let table = config.relation_table_path.clone();
    let mut pipeline = Pipeline::from_config(config)?;
    if let Some(sidecar) = sidecar {
        let typer = match &table {
            Some(path) => LookupTyper::load_table(path)?,
            None => LookupTyper::new(),
        };
        pipeline = pipeline.with_typer(Box::new(typer.with_sidecar_file(sidecar)?));
    }
    Ok(pipeline)
}

/// `ford.ann.json` -> `ford`.
fn output_stem(path: &Path) -> String {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let name = name.strip_suffix(".json").unwrap_or(&name);
    let name = name.strip_suffix(".ann").unwrap_or(name);
    name.to_string()
}

fn process_document(pipeline: &Pipeline, path: &Path, stem: &str, out_dir: &Path, exports: &[GraphFormat]) -> Result<Vec<String>> {
    let doc = load_document(path)?;
    let triples = pipeline.extract(&doc).triples;
    let (report, rows) = pipeline.enrich(&doc, &triples);

    let mut files = vec![
        (format!("{stem}.triples.tsv"), tsv::write_triples_tsv(&triples)),
        (format!("{stem}.enriched.tsv"), tsv::write_enriched_tsv(&rows)),
        (format!("{stem}.metrics.tsv"), tsv::write_metrics_tsv(&report)),
    ];
    for format in exports {
        files.push((format!("{stem}.{}", format.extension()), format.render(&rows)));
    }
    for (name, content) in &files {
        write_atomic(&out_dir.join(name), content)?;
    }
    Ok(files.into_iter().map(|(name, _)| name).collect())
}

fn run_pipeline(pipeline: &Pipeline, inputs: &[PathBuf], out_dir: &Path, exports: &[GraphFormat]) -> Result<bool> {
    fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    let mut unique: Vec<GraphFormat> = Vec::new();
    for f in exports {
        if !unique.contains(f) {
            unique.push(*f);
        }
    }
    let exports = unique;

    let mut seen: HashMap<String, &Path> = HashMap::new();
    let jobs: Vec<(&PathBuf, String, Option<String>)> = inputs
        .iter()
        .map(|path| {
            let stem = output_stem(path);
            let clash = seen
                .insert(stem.clone(), path)
                .map(|other| format!("output name `{stem}` already used by {}", other.display()));
            (path, stem, clash)
        })
        .collect();

    let results: Vec<Result<Vec<String>>> = jobs
        .par_iter()
        .map(|(path, stem, clash)| match clash {
            Some(msg) => bail!("{msg}"),
            None => process_document(pipeline, path, stem, out_dir, &exports),
        })
        .collect();

    let mut manifest = String::from("input\tstatus\toutputs\n");
    let mut ok = true;
    for ((path, _, _), result) in jobs.iter().zip(results) {
        match result {
            Ok(files) => manifest.push_str(&format!("{}\tok\t{}\n", path.display(), files.join(","))),
            Err(e) => {
                ok = false;
                let msg = format!("{e:#}").replace(['\t', '\n'], " ");
                eprintln!("error: {}: {msg}", path.display());
                manifest.push_str(&format!("{}\terror\t{msg}\n", path.display()));
            }
        }
    }
    write_atomic(&out_dir.join("manifest.tsv"), &manifest)?;
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    let config = cli.config.as_deref();
    match cli.command {
        Command::Clean { input, out } => {
            write_atomic(&out, &clean_text(&read_text(&input)?))?;
        }
        Command::Extract { ann, out, format, chunks } => {
            let pipeline = build_pipeline(config, None)?;
            let doc = load_document(&ann)?;
            let extraction = pipeline.extract(&doc);
            if !extraction.degenerate.is_empty() {
                eprintln!(
                    "note: dropped {} triples left empty by article stripping",
                    extraction.degenerate.len()
                );
            }
            let content = match format {
                TripleFormat::Tsv => tsv::write_triples_tsv(&extraction.triples),
                TripleFormat::Jsonl => tsv::write_triples_jsonl(&extraction.triples),
            };
            write_atomic(&out, &content)?;
            if let Some(path) = chunks {
                write_atomic(&path, &tsv::write_chunks_tsv(&pipeline.chunks(&doc)))?;
            }
        }
        Command::Metrics { triples, out } => {
            let triples = read_triples(&triples)?;
            let report = CentralityReport::compute(&build_graph(&triples));
            write_atomic(&out, &tsv::write_metrics_tsv(&report))?;
        }
        Command::Enrich { ann, triples, out, sidecar } => {
            let pipeline = build_pipeline(config, sidecar.as_deref())?;
            let doc = load_document(&ann)?;
            let triples = read_triples(&triples)?;
            let (_, rows) = pipeline.enrich(&doc, &triples);
            write_atomic(&out, &tsv::write_enriched_tsv(&rows))?;
        }
        Command::Export { enriched, format, out } => {
            let rows = tsv::read_enriched_tsv(&read_text(&enriched)?)
                .with_context(|| format!("in {}", enriched.display()))?;
            write_atomic(&out, &format.render(&rows))?;
        }
        Command::Pipeline { ann, out_dir, exports, sidecar } => {
            let pipeline = build_pipeline(config, sidecar.as_deref())?;
            return run_pipeline(&pipeline, &ann, &out_dir, &exports);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
