//! `legalkg`: build, query, serve and validate the legal knowledge graph.

mod config;

use std::fmt;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use legalkg_core::ingestion::{load_corpus, CorpusManifest, Fetcher, IngestContext, IngestError, LoadedCase};
use legalkg_core::llm::{
    run_pipeline, HttpProvider, InputStrategy, LlmError, MockProvider, PipelineConfig, Provider, ProviderError,
    SectionSelector,
};
use legalkg_core::mapping::{build_kg, entity_census, kg_stats, validate_corpus};
use legalkg_core::nlp::{self, NlpResources, ResourceError};
use legalkg_core::rdf::{parse_ntriples, parse_turtle, serialize_ntriples, serialize_turtle, Graph, RdfError};
use legalkg_core::sparql::{run_query, serialize_results_csv, serialize_results_json, QueryFailure};
use legalkg_endpoint::{EndpointError, ServiceConfig};

use config::{AppConfig, ProviderKind};

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_IO: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;

/// An error plus the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl fmt::Display) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }

    pub fn invalid(message: impl fmt::Display) -> Self {
        Self::new(EXIT_FAILURE, message)
    }

    pub fn io(message: impl fmt::Display) -> Self {
        Self::new(EXIT_IO, message)
    }

    pub fn config(message: impl fmt::Display) -> Self {
        Self::new(EXIT_CONFIG, message)
    }
}

impl From<IngestError> for Failure {
    fn from(e: IngestError) -> Self {
        match e.root() {
            IngestError::Io { .. } => Failure::io(e),
            _ => Failure::invalid(e),
        }
    }
}

impl From<LlmError> for Failure {
    fn from(e: LlmError) -> Self {
        match &e {
            LlmError::Io { .. } | LlmError::Provider(ProviderError::Io { .. } | ProviderError::Http(_)) => Failure::io(e),
            LlmError::Provider(ProviderError::MissingFixture(_)) => Failure::io(e),
            LlmError::Config(_) | LlmError::Provider(ProviderError::Config(_)) => Failure::config(e),
            _ => Failure::invalid(e),
        }
    }
}

impl From<ResourceError> for Failure {
    fn from(e: ResourceError) -> Self {
        match e {
            ResourceError::Io { .. } => Failure::io(e),
            ResourceError::Format { .. } => Failure::invalid(e),
        }
    }
}

impl From<EndpointError> for Failure {
    fn from(e: EndpointError) -> Self {
        match e {
            EndpointError::Config(_) => Failure::config(e),
            EndpointError::Load { .. } => Failure::invalid(e),
            EndpointError::Bind { .. } | EndpointError::Serve(_) => Failure::io(e),
        }
    }
}

#[derive(Parser)]
#[command(name = "legalkg", version, about = "Legal knowledge graph toolkit")]
struct Cli {
    /// TOML file with optional [vocabulary] and [llm] tables.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CorpusArgs {
    /// Corpus manifest (case_id,url,local_path).
    #[arg(long, conflicts_with = "corpus")]
    manifest: Option<PathBuf>,
    /// Corpus directory holding manifest.csv.
    #[arg(long)]
    corpus: Option<PathBuf>,
}

impl CorpusArgs {
    fn manifest_path(&self) -> Result<PathBuf, Failure> {
        match (&self.manifest, &self.corpus) {
            (Some(m), _) => Ok(m.clone()),
            (None, Some(dir)) => Ok(dir.join("manifest.csv")),
            (None, None) => Err(Failure::config("give --manifest or --corpus")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Ttl,
    Nt,
}

impl GraphFormat {
    fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("nt") => GraphFormat::Nt,
            _ => GraphFormat::Ttl,
        }
    }

    fn serialize(self, graph: &Graph) -> String {
        match self {
            GraphFormat::Ttl => serialize_turtle(graph),
            GraphFormat::Nt => serialize_ntriples(graph),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ResultFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Fulltext,
    Subpart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NlpFormat {
    Json,
    Ttl,
    Nt,
}

#[derive(Subcommand)]
enum Command {
    /// Parse every case in the corpus and report warnings.
    Ingest {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Download entries whose local file is missing.
        #[arg(long)]
        fetch: bool,
    },
    /// Map the corpus to RDF.
    Build {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Defaults to the output file extension, then Turtle.
        #[arg(long, value_enum)]
        format: Option<GraphFormat>,
    },
    /// Print triple, predicate and entity counts of a graph file.
    Stats {
        graph: PathBuf,
        /// Also print entity counts under alternative definitions.
        #[arg(long)]
        census: bool,
    },
    /// Run a SPARQL query against a graph file.
    Query {
        graph: PathBuf,
        /// Query text; use --file to read it from disk.
        #[arg(required_unless_present = "file")]
        query: Option<String>,
        #[arg(long, conflicts_with = "query")]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: ResultFormat,
    },
    /// Serve a graph over HTTP.
    Serve {
        graph: PathBuf,
        #[arg(long, default_value = legalkg_endpoint::DEFAULT_BIND)]
        bind: SocketAddr,
        /// Directory with the built query console.
        #[arg(long)]
        console: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        timeout_secs: u64,
    },
    /// Check that each case answers the competency queries.
    CqValidate {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Validate this graph instead of one built from the corpus.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Generate ontology, KG and CQ answers with a language model.
    LlmRun {
        #[arg(long, value_enum)]
        provider: Option<ProviderKind>,
        #[arg(long, value_enum, default_value = "fulltext")]
        strategy: Strategy,
        #[arg(long)]
        documents: Option<PathBuf>,
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Directory of `<doc>.sections` files; defaults to the documents.
        #[arg(long)]
        sections: Option<PathBuf>,
        /// Turtle seed ontology.
        #[arg(long)]
        seed: Option<PathBuf>,
        /// Manual CQ score sheet (CSV).
        #[arg(long)]
        scores: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tokenize, tag and extract subject-verb-object triples from text.
    NlpRun {
        input: PathBuf,
        /// Directory with stopwords.txt, lemma_exceptions.txt, pos_lexicon.txt.
        #[arg(long)]
        resources: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: NlpFormat,
    },
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write(path, text),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::io(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = read(path)?;
    let parsed = match GraphFormat::for_path(path) {
        GraphFormat::Nt => parse_ntriples(&text),
        GraphFormat::Ttl => parse_turtle(&text),
    };
    parsed.map_err(|e: RdfError| Failure::invalid(format!("{}: {e}", path.display())))
}

fn load_cases(corpus: &CorpusArgs, report_warnings: bool) -> Result<Vec<LoadedCase>, Failure> {
    let manifest = CorpusManifest::load(&corpus.manifest_path()?)?;
    let cases = load_corpus(&manifest, &IngestContext::default())?;
    for case in cases.iter().filter(|_| report_warnings) {
        for w in &case.warnings {
            eprintln!("warning: {}: {w}", case.case_id);
        }
    }
    Ok(cases)
}

fn ingest(corpus: &CorpusArgs, fetch: bool) -> Result<(), Failure> {
    if fetch {
        let path = corpus.manifest_path()?;
        let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let manifest = CorpusManifest::parse(&read(&path)?, root)?;
        let fetcher = Fetcher::new(true).map_err(Failure::io)?;
        for entry in manifest.entries() {
            let outcome = fetcher.fetch(&entry.url, &manifest.resolve(entry)).map_err(Failure::io)?;
            if !outcome.cached {
                eprintln!("fetched {} ({} bytes)", entry.case_id, outcome.bytes);
            }
        }
    }
    let cases = load_cases(corpus, false)?;
    let mut listing = String::new();
    for case in &cases {
        listing.push_str(&format!("{}\t{}\t{} warning(s)\n", case.case_id, case.record.ecli, case.warnings.len()));
        for w in &case.warnings {
            listing.push_str(&format!("  {w}\n"));
        }
    }
    eprintln!("{} case(s) loaded", cases.len());
    emit(None, &listing)
}

fn build(cfg: &AppConfig, corpus: &CorpusArgs, out: Option<&Path>, format: Option<GraphFormat>) -> Result<(), Failure> {
    let cases = load_cases(corpus, true)?;
    let records: Vec<_> = cases.into_iter().map(|c| c.record).collect();
    let graph = build_kg(&records, &cfg.vocabulary);
    let format = format.unwrap_or_else(|| out.map(GraphFormat::for_path).unwrap_or(GraphFormat::Ttl));
    emit(out, &format.serialize(&graph))?;
    let stats = kg_stats(&graph);
    eprintln!(
        "{} case(s), {} triples, {} predicates, {} entities",
        records.len(),
        stats.triple_count,
        stats.distinct_predicates,
        stats.distinct_entities
    );
    Ok(())
}

fn to_json(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("serializable value") + "\n"
}

fn stats(graph: &Path, census: bool) -> Result<(), Failure> {
    let graph = load_graph(graph)?;
    let mut value = serde_json::to_value(kg_stats(&graph)).expect("stats serialize");
    if census {
        value["census"] = serde_json::to_value(entity_census(&graph)).expect("census serializes");
    }
    emit(None, &to_json(&value))
}

fn query(graph: &Path, text: Option<String>, file: Option<&Path>, format: ResultFormat) -> Result<(), Failure> {
    let graph = load_graph(graph)?;
    let text = match (text, file) {
        (Some(t), _) => t,
        (None, Some(f)) => read(f)?,
        (None, None) => return Err(Failure::config("no query given")),
    };
    let results = run_query(&text, &graph).map_err(|e: QueryFailure| Failure::invalid(e))?;
    let body = match format {
        ResultFormat::Json => serialize_results_json(&results),
        ResultFormat::Csv => serialize_results_csv(&results).map_err(Failure::invalid)?,
    };
    emit(None, &body)
}

fn serve(graph: &Path, bind: SocketAddr, console: Option<PathBuf>, timeout_secs: u64) -> Result<(), Failure> {
    let loaded = load_graph(graph)?;
    let config = ServiceConfig {
        bind,
        graph_path: Some(graph.to_path_buf()),
        console_dir: console,
        request_timeout: Duration::from_secs(timeout_secs),
        ..ServiceConfig::default()
    };
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(Failure::io)?;
    eprintln!("serving {} triples on http://{bind}", loaded.len());
    runtime.block_on(legalkg_endpoint::serve(loaded, &config))?;
    Ok(())
}

fn cq_validate(cfg: &AppConfig, corpus: &CorpusArgs, graph: Option<&Path>) -> Result<(), Failure> {
    let cases = load_cases(corpus, true)?;
    let records: Vec<_> = cases.iter().map(|c| c.record.clone()).collect();
    let graph = match graph {
        Some(path) => load_graph(path)?,
        None => build_kg(&records, &cfg.vocabulary),
    };
    let report = validate_corpus(&graph, cases.iter().map(|c| (c.case_id.as_str(), &c.record)), &cfg.vocabulary);
    let mut out = String::new();
    for (case, check) in report.failures() {
        out += &format!(
            "FAIL {case} {}: expected {:?}, got {:?}{}",
            check.name,
            check.expected,
            check.actual,
            check.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
        );
        out.push('\n');
    }
    let pct = if report.total() == 0 {
        100.0
    } else {
        100.0 * report.passed() as f64 / report.total() as f64
    };
    out += &format!("{}/{} checks passed ({pct:.1}%)\n", report.passed(), report.total());
    emit(None, &out)?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::invalid("competency validation failed"))
    }
}

struct LlmArgs {
    provider: Option<ProviderKind>,
    strategy: Strategy,
    documents: Option<PathBuf>,
    fixtures: Option<PathBuf>,
    sections: Option<PathBuf>,
    seed: Option<PathBuf>,
    scores: Option<PathBuf>,
    out: PathBuf,
}

fn llm_run(cfg: &AppConfig, args: LlmArgs) -> Result<(), Failure> {
    let section = &cfg.llm;
    let documents = args
        .documents
        .or_else(|| section.documents.clone())
        .ok_or_else(|| Failure::config("no documents directory (--documents or [llm] documents)"))?;
    let provider: Box<dyn Provider> = match args.provider.or(section.provider).unwrap_or(ProviderKind::Mock) {
        ProviderKind::Mock => {
            let fixtures = args
                .fixtures
                .or_else(|| section.fixtures.clone())
                .ok_or_else(|| Failure::config("the mock provider needs --fixtures or [llm] fixtures"))?;
            Box::new(MockProvider::new(fixtures))
        }
        ProviderKind::Http => Box::new(HttpProvider::from_env().map_err(|e| Failure::from(LlmError::from(e)))?),
    };
    let mut config = PipelineConfig::new(&documents);
    config.strategy = match args.strategy {
        Strategy::Fulltext => InputStrategy::FullText,
        Strategy::Subpart => {
            let dir = args.sections.or_else(|| section.sections.clone()).unwrap_or_else(|| documents.clone());
            InputStrategy::SubPart(SectionSelector::from_dir(&dir)?)
        }
    };
    if let Some(seed) = args.seed.or_else(|| section.seed.clone()) {
        config.seed = load_graph(&seed)?;
    }
    config.scores = args.scores.or_else(|| section.scores.clone());
    config.chunk_size = section.chunk_size.unwrap_or(config.chunk_size);
    config.chunk_overlap = section.chunk_overlap.unwrap_or(config.chunk_overlap);
    config.top_k = section.top_k.unwrap_or(config.top_k);

    let outcome = run_pipeline(provider.as_ref(), &config)?;
    let files = outcome.write_to(&args.out)?;
    let (classes, objects, data) = outcome.census.counts();
    let answered = outcome.answers.iter().filter(|a| !a.no_context).count();
    let mut summary = format!(
        "documents: {}\nontology: {classes} classes, {objects} object properties, {data} data properties\n\
         kg: {} triples\npruned: {}, rejected: {}\ncompetency questions: {}, answered: {answered}\n",
        outcome.documents.len(),
        outcome.kg.len(),
        outcome.pruned.len(),
        outcome.rejects.len(),
        outcome.cqs.len(),
    );
    if let Some(sheet) = &outcome.scores {
        summary.push_str(&sheet.report());
    }
    emit(None, &summary)?;
    for f in files {
        eprintln!("wrote {}", f.display());
    }
    Ok(())
}

fn nlp_run(cfg: &AppConfig, input: &Path, resources: Option<&Path>, format: NlpFormat) -> Result<(), Failure> {
    let res = match resources {
        Some(dir) => NlpResources::from_dir(dir)?,
        None => NlpResources::default(),
    };
    let output = nlp::run_pipeline(&read(input)?, &res);
    let text = match format {
        NlpFormat::Json => to_json(&output),
        NlpFormat::Ttl => serialize_turtle(&nlp::svo_to_rdf(&output.triples, &cfg.vocabulary)),
        NlpFormat::Nt => serialize_ntriples(&nlp::svo_to_rdf(&output.triples, &cfg.vocabulary)),
    };
    emit(None, &text)
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let cfg = AppConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Ingest { corpus, fetch } => ingest(&corpus, fetch),
        Command::Build { corpus, out, format } => build(&cfg, &corpus, out.as_deref(), format),
        Command::Stats { graph, census } => stats(&graph, census),
        Command::Query {
            graph,
            query: text,
            file,
            format,
        } => query(&graph, text, file.as_deref(), format),
        Command::Serve {
            graph,
            bind,
            console,
            timeout_secs,
        } => serve(&graph, bind, console, timeout_secs),
        Command::CqValidate { corpus, graph } => cq_validate(&cfg, &corpus, graph.as_deref()),
        Command::LlmRun {
            provider,
            strategy,
            documents,
            fixtures,
            sections,
            seed,
            scores,
            out,
        } => llm_run(
            &cfg,
            LlmArgs {
                provider,
                strategy,
                documents,
                fixtures,
                sections,
                seed,
                scores,
                out,
            },
        ),
        Command::NlpRun { input, resources, format } => nlp_run(&cfg, &input, resources.as_deref(), format),
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "warn".into()))
        .with_writer(std::io::stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
