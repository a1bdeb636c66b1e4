//! Read-only HTTP service over one knowledge graph: a SPARQL query route,
//! graph downloads, statistics and the static query console.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{FromRequest, Query, Request, State};
use axum::http::{header, HeaderMap, HeaderValue, Method, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::{Form, Json, Router};
use legalkg_core::mapping::kg_stats;
use legalkg_core::rdf::{parse_ntriples, parse_turtle, serialize_ntriples, serialize_turtle, Graph};
use legalkg_core::sparql::{
    evaluate_with_deadline, parse_query, serialize_results_csv, serialize_results_json, EvalError, ResultSet,
    CSV_MEDIA_TYPE, JSON_MEDIA_TYPE,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tower_http::services::ServeDir;

pub const BIND_ENV: &str = "LEGALKG_BIND";
pub const GRAPH_ENV: &str = "LEGALKG_GRAPH";
pub const CONSOLE_ENV: &str = "LEGALKG_CONSOLE";
pub const DEFAULT_BIND: &str = "127.0.0.1:7878";
pub const DEFAULT_MAX_QUERY_LENGTH: usize = 64 * 1024;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

pub const TURTLE_MEDIA_TYPE: &str = "text/turtle; charset=utf-8";
pub const NTRIPLES_MEDIA_TYPE: &str = "application/n-triples";

#[derive(Debug, Error)]
pub enum EndpointError {
    #[error("cannot load graph {path}: {message}")]
    Load { path: String, message: String },
    #[error("cannot bind {addr}: {message}")]
    Bind { addr: String, message: String },
    #[error("configuration: {0}")]
    Config(String),
    #[error("server error: {0}")]
    Serve(String),
}

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub bind: SocketAddr,
    pub graph_path: Option<PathBuf>,
    pub console_dir: Option<PathBuf>,
    pub max_query_length: usize,
    pub request_timeout: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            bind: DEFAULT_BIND.parse().expect("default bind address"),
            graph_path: None,
            console_dir: None,
            max_query_length: DEFAULT_MAX_QUERY_LENGTH,
            request_timeout: DEFAULT_TIMEOUT,
        }
    }
}

impl ServiceConfig {
    /// Defaults overridden by `LEGALKG_BIND`, `LEGALKG_GRAPH` and
    /// `LEGALKG_CONSOLE`.
    pub fn from_env() -> Result<Self, EndpointError> {
        let mut config = ServiceConfig::default();
        if let Ok(bind) = std::env::var(BIND_ENV) {
            config.bind = bind
                .parse()
                .map_err(|e| EndpointError::Config(format!("{BIND_ENV}={bind}: {e}")))?;
        }
        config.graph_path = std::env::var_os(GRAPH_ENV).map(PathBuf::from);
        config.console_dir = std::env::var_os(CONSOLE_ENV).map(PathBuf::from);
        Ok(config)
    }
}

/// Reads N-Triples for `.nt` files and Turtle otherwise.
pub fn load_graph(path: &Path) -> Result<Graph, EndpointError> {
    let fail = |message: String| EndpointError::Load {
        path: path.display().to_string(),
        message,
    };
    let text = std::fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
    let parsed = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("nt")) {
        parse_ntriples(&text)
    } else {
        parse_turtle(&text)
    };
    parsed.map_err(|e| fail(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsBody {
    pub triples: usize,
    pub distinct_predicates: usize,
    pub distinct_entities: usize,
}

struct AppState {
    graph: Graph,
    stats: StatsBody,
    turtle: String,
    ntriples: String,
    max_query_length: usize,
    timeout: Duration,
}

/// Routes over an immutable `graph`.
pub fn router(graph: Graph, config: &ServiceConfig) -> Router {
    let stats = kg_stats(&graph);
    let state = Arc::new(AppState {
        stats: StatsBody {
            triples: stats.triple_count,
            distinct_predicates: stats.distinct_predicates,
            distinct_entities: stats.distinct_entities,
        },
        turtle: serialize_turtle(&graph),
        ntriples: serialize_ntriples(&graph),
        graph,
        max_query_length: config.max_query_length,
        timeout: config.request_timeout,
    });
    let api = Router::new()
        .route("/query", get(query_get).post(query_post))
        .route("/graph", get(graph_route))
        .route("/stats", get(stats_route))
        .with_state(state);
    match config.console_dir.as_ref().filter(|d| d.join("index.html").is_file()) {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(fallback_console)),
    }
}

/// Loads the configured graph, then [`serve`]s it.
pub async fn run(config: ServiceConfig) -> Result<(), EndpointError> {
    let path = config
        .graph_path
        .clone()
        .ok_or_else(|| EndpointError::Config(format!("no graph given (set {GRAPH_ENV})")))?;
    let graph = load_graph(&path)?;
    tracing::info!(triples = graph.len(), path = %path.display(), "graph loaded");
    serve(graph, &config).await
}

/// Binds `config.bind` and serves `graph` until Ctrl-C.
pub async fn serve(graph: Graph, config: &ServiceConfig) -> Result<(), EndpointError> {
    let listener = tokio::net::TcpListener::bind(config.bind)
        .await
        .map_err(|e| EndpointError::Bind {
            addr: config.bind.to_string(),
            message: e.to_string(),
        })?;
    let addr = listener.local_addr().map_err(|e| EndpointError::Serve(e.to_string()))?;
    tracing::info!(%addr, "listening");
    axum::serve(listener, router(graph, config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| EndpointError::Serve(e.to_string()))
}

const FALLBACK_PAGE: &str = r#"<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>SPARQL query</title></head>
<body>
<h1>SPARQL query</h1>
<form method="post" action="/query">
<textarea name="query" rows="12" cols="80">SELECT ?s ?p ?o WHERE { ?s ?p ?o } LIMIT 10</textarea>
<p><button type="submit">Run</button></p>
</form>
<p><a href="/stats">Statistics</a> | <a href="/graph?format=ttl">Turtle</a> | <a href="/graph?format=nt">N-Triples</a></p>
</body>
</html>
"#;

async fn fallback_console() -> Html<&'static str> {
    Html(FALLBACK_PAGE)
}

#[derive(Deserialize)]
struct QueryParams {
    query: Option<String>,
}

fn plain(status: StatusCode, message: impl Into<String>) -> Response {
    (status, [(header::CONTENT_TYPE, "text/plain; charset=utf-8")], message.into()).into_response()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ResultFormat {
    Json,
    Csv,
}

/// Picks the highest-weighted acceptable media type; no header means JSON.
fn negotiate(headers: &HeaderMap) -> Option<ResultFormat> {
    let Some(accept) = headers.get(header::ACCEPT).and_then(|v| v.to_str().ok()) else {
        return Some(ResultFormat::Json);
    };
    let mut ranges: Vec<(f32, usize, String)> = accept
        .split(',')
        .enumerate()
        .filter_map(|(i, part)| {
            let mut pieces = part.split(';');
            let media = pieces.next()?.trim().to_ascii_lowercase();
            let q = pieces
                .filter_map(|p| p.trim().strip_prefix("q="))
                .find_map(|q| q.trim().parse::<f32>().ok())
                .unwrap_or(1.0);
            (!media.is_empty() && q > 0.0).then_some((q, i, media))
        })
        .collect();
    ranges.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    ranges.into_iter().find_map(|(_, _, media)| match media.as_str() {
        JSON_MEDIA_TYPE | "application/json" | "application/*" | "*/*" => Some(ResultFormat::Json),
        CSV_MEDIA_TYPE | "text/*" => Some(ResultFormat::Csv),
        _ => None,
    })
}

async fn execute(state: Arc<AppState>, headers: HeaderMap, query: Option<String>) -> Response {
    let Some(text) = query.filter(|q| !q.trim().is_empty()) else {
        return plain(StatusCode::BAD_REQUEST, "missing query");
    };
    if text.len() > state.max_query_length {
        return plain(
            StatusCode::PAYLOAD_TOO_LARGE,
            format!("query is {} bytes; the limit is {}", text.len(), state.max_query_length),
        );
    }
    let Some(format) = negotiate(&headers) else {
        return plain(
            StatusCode::NOT_ACCEPTABLE,
            format!("supported result types: {JSON_MEDIA_TYPE}, {CSV_MEDIA_TYPE}"),
        );
    };
    let parsed = match parse_query(&text) {
        Ok(q) => q,
        Err(e) => return plain(StatusCode::BAD_REQUEST, e.to_string()),
    };
    let deadline = Instant::now() + state.timeout;
    let worker = state.clone();
    let outcome = tokio::task::spawn_blocking(move || evaluate_with_deadline(&parsed, &worker.graph, Some(deadline))).await;
    let results: ResultSet = match outcome {
        Ok(Ok(results)) => results,
        Ok(Err(EvalError::Timeout)) => {
            return plain(
                StatusCode::GATEWAY_TIMEOUT,
                format!("query exceeded the {} s time limit", state.timeout.as_secs_f32()),
            )
        }
        Err(e) => return plain(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    };
    match format {
        ResultFormat::Json => (
            [(header::CONTENT_TYPE, HeaderValue::from_static(JSON_MEDIA_TYPE))],
            serialize_results_json(&results),
        )
            .into_response(),
        ResultFormat::Csv => match serialize_results_csv(&results) {
            Ok(body) => ([(header::CONTENT_TYPE, "text/csv; charset=utf-8")], body).into_response(),
            Err(e) => plain(StatusCode::NOT_ACCEPTABLE, e.to_string()),
        },
    }
}

async fn query_get(State(state): State<Arc<AppState>>, headers: HeaderMap, Query(params): Query<QueryParams>) -> Response {
    execute(state, headers, params.query).await
}

async fn query_post(State(state): State<Arc<AppState>>, request: Request) -> Response {
    debug_assert_eq!(request.method(), Method::POST);
    let headers = request.headers().clone();
    let content_type = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .map(|v| v.split(';').next().unwrap_or_default().trim().to_ascii_lowercase())
        .unwrap_or_default();
    let query = match content_type.as_str() {
        "application/x-www-form-urlencoded" => match Form::<QueryParams>::from_request(request, &()).await {
            Ok(Form(params)) => params.query,
            Err(e) => return plain(StatusCode::BAD_REQUEST, e.body_text()),
        },
        "application/sparql-query" => match Bytes::from_request(request, &()).await {
            Ok(body) => match String::from_utf8(body.to_vec()) {
                Ok(text) => Some(text),
                Err(_) => return plain(StatusCode::BAD_REQUEST, "query body is not UTF-8"),
            },
            Err(e) => return plain(StatusCode::PAYLOAD_TOO_LARGE, e.body_text()),
        },
        other => {
            return plain(
                StatusCode::UNSUPPORTED_MEDIA_TYPE,
                format!("unsupported content type {other:?}; use application/x-www-form-urlencoded or application/sparql-query"),
            )
        }
    };
    execute(state, headers, query).await
}

#[derive(Deserialize)]
struct GraphParams {
    format: Option<String>,
}

async fn graph_route(State(state): State<Arc<AppState>>, Query(params): Query<GraphParams>) -> Response {
    match params.format.as_deref().unwrap_or("ttl") {
        "ttl" | "turtle" => ([(header::CONTENT_TYPE, TURTLE_MEDIA_TYPE)], state.turtle.clone()).into_response(),
        "nt" | "ntriples" => ([(header::CONTENT_TYPE, NTRIPLES_MEDIA_TYPE)], state.ntriples.clone()).into_response(),
        other => plain(StatusCode::BAD_REQUEST, format!("unknown format {other:?}; use ttl or nt")),
    }
}

async fn stats_route(State(state): State<Arc<AppState>>) -> Json<StatsBody> {
    Json(state.stats)
}
