use std::hash::Hasher;
use std::path::{Path, PathBuf};
use std::time::Duration;

use fnv::FnvHasher;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::index::EmbeddingVector;
use super::prompts::TemplateId;

pub const DEFAULT_DIMENSION: usize = 256;
pub const ENDPOINT_ENV: &str = "LEGALKG_LLM_ENDPOINT";
pub const TOKEN_ENV: &str = "LEGALKG_LLM_TOKEN";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProviderError {
    #[error("no fixture response at {0}")]
    MissingFixture(String),
    #[error("provider I/O error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("provider request failed: {0}")]
    Http(String),
    #[error("provider configuration: {0}")]
    Config(String),
}

/// What the provider is asked to complete. `key` names the input (a
/// document id, or a fixed key such as `seed`) so lookups can be replayed.
#[derive(Debug, Clone, Copy)]
pub struct CompletionRequest<'a> {
    pub template: TemplateId,
    pub key: &'a str,
    pub prompt: &'a str,
}

/// Text completion plus text embedding.
pub trait Provider: Send + Sync {
    fn complete(&self, request: &CompletionRequest<'_>) -> Result<String, ProviderError>;
    fn embed(&self, text: &str) -> Result<EmbeddingVector, ProviderError>;
}

/// Deterministic provider: completions are read from
/// `<fixtures>/<template id>/<key>.txt` and embeddings are hashed
/// bag-of-words counts, L2-normalized.
#[derive(Debug, Clone)]
pub struct MockProvider {
    fixtures: PathBuf,
    dimension: usize,
}

impl MockProvider {
    pub fn new(fixtures: impl Into<PathBuf>) -> Self {
        Self::with_dimension(fixtures, DEFAULT_DIMENSION)
    }

    pub fn with_dimension(fixtures: impl Into<PathBuf>, dimension: usize) -> Self {
        MockProvider {
            fixtures: fixtures.into(),
            dimension: dimension.max(1),
        }
    }

    pub fn fixture_path(&self, template: TemplateId, key: &str) -> PathBuf {
        self.fixtures.join(template.id()).join(format!("{key}.txt"))
    }

    pub fn fixtures(&self) -> &Path {
        &self.fixtures
    }
}

pub(crate) fn words(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
}

pub fn hashed_embedding(text: &str, dimension: usize) -> EmbeddingVector {
    let mut values = vec![0.0f64; dimension];
    for word in words(text) {
        let mut h = FnvHasher::default();
        h.write(word.as_bytes());
        values[(h.finish() % dimension as u64) as usize] += 1.0;
    }
    EmbeddingVector::normalized(values)
}

impl Provider for MockProvider {
    fn complete(&self, request: &CompletionRequest<'_>) -> Result<String, ProviderError> {
        let path = self.fixture_path(request.template, request.key);
        match std::fs::read_to_string(&path) {
            Ok(text) => Ok(text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                Err(ProviderError::MissingFixture(path.display().to_string()))
            }
            Err(e) => Err(ProviderError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            }),
        }
    }

    fn embed(&self, text: &str) -> Result<EmbeddingVector, ProviderError> {
        Ok(hashed_embedding(text, self.dimension))
    }
}

#[derive(Serialize)]
struct CompleteBody<'a> {
    template: &'a str,
    key: &'a str,
    prompt: &'a str,
}

#[derive(Deserialize)]
struct CompleteReply {
    text: String,
}

#[derive(Serialize)]
struct EmbedBody<'a> {
    input: &'a str,
}

#[derive(Deserialize)]
struct EmbedReply {
    embedding: Vec<f64>,
}

/// Client for a JSON service exposing `POST /complete` (`{template, key,
/// prompt}` -> `{text}`) and `POST /embed` (`{input}` -> `{embedding}`).
/// A bearer token is sent when `LEGALKG_LLM_TOKEN` is set.
pub struct HttpProvider {
    base: String,
    token: Option<String>,
    client: reqwest::blocking::Client,
}

impl HttpProvider {
    pub fn new(base: impl Into<String>, token: Option<String>, timeout: Duration) -> Result<Self, ProviderError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| ProviderError::Config(e.to_string()))?;
        Ok(HttpProvider {
            base: base.into().trim_end_matches('/').to_string(),
            token,
            client,
        })
    }

    /// Reads the endpoint and token from the environment.
    pub fn from_env() -> Result<Self, ProviderError> {
        let base = std::env::var(ENDPOINT_ENV).map_err(|_| ProviderError::Config(format!("{ENDPOINT_ENV} is not set")))?;
        Self::new(base, std::env::var(TOKEN_ENV).ok(), Duration::from_secs(120))
    }

    fn post<B: Serialize, R: for<'de> Deserialize<'de>>(&self, path: &str, body: &B) -> Result<R, ProviderError> {
        let mut request = self.client.post(format!("{}{path}", self.base)).json(body);
        if let Some(token) = &self.token {
            request = request.bearer_auth(token);
        }
        let response = request.send().map_err(|e| ProviderError::Http(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(ProviderError::Http(format!("{path} answered HTTP {status}")));
        }
        response.json().map_err(|e| ProviderError::Http(e.to_string()))
    }
}

impl Provider for HttpProvider {
    fn complete(&self, request: &CompletionRequest<'_>) -> Result<String, ProviderError> {
        let reply: CompleteReply = self.post(
            "/complete",
            &CompleteBody {
                template: request.template.id(),
                key: request.key,
                prompt: request.prompt,
            },
        )?;
        Ok(reply.text)
    }

    fn embed(&self, text: &str) -> Result<EmbeddingVector, ProviderError> {
        let reply: EmbedReply = self.post("/embed", &EmbedBody { input: text })?;
        if reply.embedding.iter().any(|v| !v.is_finite()) {
            return Err(ProviderError::Http("embedding contains non-finite values".into()));
        }
        Ok(EmbeddingVector::new(reply.embedding))
    }
}
