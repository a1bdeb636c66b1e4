use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use thiserror::Error;

use super::{CorpusManifest, ManifestEntry};

/// Environment variable holding the request timeout in seconds.
pub const FETCH_TIMEOUT_ENV: &str = "LEGALKG_FETCH_TIMEOUT_SECS";
const DEFAULT_TIMEOUT_SECS: u64 = 30;

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("network error fetching {url}: {message}")]
    Network { url: String, message: String, retryable: bool },
    #[error("{url} answered HTTP {status}")]
    Status { url: String, status: u16, retryable: bool },
    #[error("I/O error writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl FetchError {
    pub fn is_retryable(&self) -> bool {
        match self {
            FetchError::Network { retryable, .. } | FetchError::Status { retryable, .. } => *retryable,
            FetchError::Io { .. } => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchOutcome {
    pub path: PathBuf,
    pub bytes: u64,
    /// True when the file already existed and no request was made.
    pub cached: bool,
}

/// Blocking downloader for pre-resolved document URLs. Requests to the same
/// host are serialized.
pub struct Fetcher {
    client: reqwest::blocking::Client,
    cache: bool,
    host_locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
}

impl Fetcher {
    pub fn new(cache: bool) -> Result<Self, FetchError> {
        let secs = std::env::var(FETCH_TIMEOUT_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_TIMEOUT_SECS);
        Self::with_timeout(cache, Duration::from_secs(secs))
    }

    pub fn with_timeout(cache: bool, timeout: Duration) -> Result<Self, FetchError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| FetchError::Network {
                url: String::new(),
                message: e.to_string(),
                retryable: false,
            })?;
        Ok(Fetcher {
            client,
            cache,
            host_locks: Mutex::new(HashMap::new()),
        })
    }

    fn host_lock(&self, url: &str) -> Arc<Mutex<()>> {
        let host = reqwest::Url::parse(url)
            .ok()
            .and_then(|u| u.host_str().map(|h| format!("{h}:{}", u.port_or_known_default().unwrap_or(0))))
            .unwrap_or_default();
        let mut locks = self.host_locks.lock().expect("host lock map poisoned");
        locks.entry(host).or_default().clone()
    }

    /// Downloads `url` to `destination`, storing the body verbatim.
    pub fn fetch(&self, url: &str, destination: &Path) -> Result<FetchOutcome, FetchError> {
        if self.cache {
            if let Ok(meta) = fs::metadata(destination) {
                if meta.is_file() {
                    return Ok(FetchOutcome {
                        path: destination.to_path_buf(),
                        bytes: meta.len(),
                        cached: true,
                    });
                }
            }
        }
        let lock = self.host_lock(url);
        let _guard = lock.lock().expect("host lock poisoned");

        let response = self.client.get(url).send().map_err(|e| FetchError::Network {
            url: url.to_string(),
            message: e.to_string(),
            retryable: e.is_timeout() || e.is_connect(),
        })?;
        let status = response.status();
        if !status.is_success() {
            return Err(FetchError::Status {
                url: url.to_string(),
                status: status.as_u16(),
                retryable: status.is_server_error() || status.as_u16() == 429,
            });
        }
        let declared = response.content_length();
        let body = response.bytes().map_err(|e| FetchError::Network {
            url: url.to_string(),
            message: e.to_string(),
            retryable: true,
        })?;
        if let Some(expected) = declared {
            if expected != body.len() as u64 {
                return Err(FetchError::Network {
                    url: url.to_string(),
                    message: format!("body has {} bytes, Content-Length was {expected}", body.len()),
                    retryable: true,
                });
            }
        }
        let io = |source| FetchError::Io {
            path: destination.to_path_buf(),
            source,
        };
        if let Some(parent) = destination.parent() {
            fs::create_dir_all(parent).map_err(io)?;
        }
        fs::write(destination, &body).map_err(io)?;
        Ok(FetchOutcome {
            path: destination.to_path_buf(),
            bytes: body.len() as u64,
            cached: false,
        })
    }

    /// Fetches into the manifest's directory and records the entry.
    pub fn fetch_into(
        &self,
        manifest: &mut CorpusManifest,
        case_id: &str,
        url: &str,
        local_path: &Path,
    ) -> Result<FetchOutcome, FetchError> {
        let entry = ManifestEntry {
            case_id: case_id.to_string(),
            url: url.to_string(),
            local_path: local_path.to_path_buf(),
        };
        let outcome = self.fetch(url, &manifest.resolve(&entry))?;
        manifest.upsert(entry);
        Ok(outcome)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::{Read, Write};
    use std::net::TcpListener;
    use std::sync::atomic::{AtomicUsize, Ordering};

    /// Serves `/ok` with a fixed body and everything else with 404.
    fn serve(hits: Arc<AtomicUsize>) -> String {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        std::thread::spawn(move || {
            for stream in listener.incoming() {
                let mut stream = stream.unwrap();
                let mut buf = [0u8; 1024];
                let n = stream.read(&mut buf).unwrap_or(0);
                hits.fetch_add(1, Ordering::SeqCst);
                let request = String::from_utf8_lossy(&buf[..n]);
                let response = if request.starts_with("GET /ok ") {
                    "HTTP/1.1 200 OK\r\nContent-Length: 5\r\nConnection: close\r\n\r\nhello".to_string()
                } else {
                    "HTTP/1.1 404 Not Found\r\nContent-Length: 0\r\nConnection: close\r\n\r\n".to_string()
                };
                let _ = stream.write_all(response.as_bytes());
            }
        });
        format!("http://{addr}")
    }

    #[test]
    fn downloads_and_caches() {
        let hits = Arc::new(AtomicUsize::new(0));
        let base = serve(hits.clone());
        let dir = tempfile::tempdir().unwrap();
        let dest = dir.path().join("sub/case.html");
        let fetcher = Fetcher::with_timeout(true, Duration::from_secs(5)).unwrap();

        let first = fetcher.fetch(&format!("{base}/ok"), &dest).unwrap();
        assert!(!first.cached);
        assert_eq!(first.bytes, 5);
        assert_eq!(fs::read_to_string(&dest).unwrap(), "hello");

        let second = fetcher.fetch(&format!("{base}/ok"), &dest).unwrap();
        assert!(second.cached);
        assert_eq!(hits.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn not_found_is_not_retryable() {
        let base = serve(Arc::new(AtomicUsize::new(0)));
        let dir = tempfile::tempdir().unwrap();
        let fetcher = Fetcher::with_timeout(false, Duration::from_secs(5)).unwrap();
        let err = fetcher.fetch(&format!("{base}/missing"), &dir.path().join("x")).unwrap_err();
        assert!(matches!(err, FetchError::Status { status: 404, .. }), "{err}");
        assert!(!err.is_retryable());
    }

    #[test]
    fn refused_connection_is_retryable() {
        let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
        let dir = tempfile::tempdir().unwrap();
        let fetcher = Fetcher::with_timeout(false, Duration::from_secs(5)).unwrap();
        let err = fetcher.fetch(&format!("http://127.0.0.1:{port}/x"), &dir.path().join("x")).unwrap_err();
        assert!(err.is_retryable(), "{err}");
    }

    #[test]
    fn fetch_into_records_entry() {
        let base = serve(Arc::new(AtomicUsize::new(0)));
        let dir = tempfile::tempdir().unwrap();
        let mut manifest = CorpusManifest::new(dir.path());
        let fetcher = Fetcher::with_timeout(true, Duration::from_secs(5)).unwrap();
        fetcher
            .fetch_into(&mut manifest, "c1", &format!("{base}/ok"), Path::new("c1.html"))
            .unwrap();
        assert_eq!(manifest.entries()[0].case_id, "c1");
        assert!(dir.path().join("c1.html").is_file());
    }
}
