use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{parse_case_details_html, parse_case_record_json, CaseRecord, IngestContext, IngestError, IngestWarning};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub case_id: String,
    pub url: String,
    pub local_path: PathBuf,
}

/// The corpus index: one row per case, `case_id,url,local_path`.
///
/// Relative local paths are resolved against the manifest's directory.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusManifest {
    entries: Vec<ManifestEntry>,
    root: PathBuf,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> IngestError {
    IngestError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

impl CorpusManifest {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        CorpusManifest {
            entries: Vec::new(),
            root: root.into(),
        }
    }

    /// Reads a manifest and checks ids are unique and files exist.
    pub fn load(path: &Path) -> Result<Self, IngestError> {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let manifest = Self::parse(&text, root)?;
        for entry in &manifest.entries {
            let resolved = manifest.resolve(entry);
            if !resolved.is_file() {
                return Err(IngestError::Manifest(format!(
                    "case {}: local file {} does not exist",
                    entry.case_id,
                    resolved.display()
                )));
            }
        }
        Ok(manifest)
    }

    pub fn parse(text: &str, root: PathBuf) -> Result<Self, IngestError> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| IngestError::Manifest(e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["case_id", "url", "local_path"] {
            return Err(IngestError::Manifest(format!(
                "expected header case_id,url,local_path, found {}",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut seen = HashSet::new();
        let mut entries = Vec::new();
        for row in reader.deserialize::<ManifestEntry>() {
            let entry = row.map_err(|e| IngestError::Manifest(e.to_string()))?;
            if !seen.insert(entry.case_id.clone()) {
                return Err(IngestError::Manifest(format!("duplicate case id {:?}", entry.case_id)));
            }
            entries.push(entry);
        }
        Ok(CorpusManifest { entries, root })
    }

    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn resolve(&self, entry: &ManifestEntry) -> PathBuf {
        if entry.local_path.is_absolute() {
            entry.local_path.clone()
        } else {
            self.root.join(&entry.local_path)
        }
    }

    /// Inserts or replaces the entry for `entry.case_id`, keeping position.
    pub fn upsert(&mut self, entry: ManifestEntry) {
        match self.entries.iter_mut().find(|e| e.case_id == entry.case_id) {
            Some(existing) => *existing = entry,
            None => self.entries.push(entry),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for entry in &self.entries {
            writer.serialize(entry).expect("in-memory CSV write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
    }

    pub fn save(&self, path: &Path) -> Result<(), IngestError> {
        fs::write(path, self.to_csv()).map_err(|e| io_err(path, e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedCase {
    pub case_id: String,
    pub record: CaseRecord,
    pub warnings: Vec<IngestWarning>,
}

/// Parses every manifest entry, in manifest order. The first failing case
/// aborts the load with its case id attached.
pub fn load_corpus(manifest: &CorpusManifest, ctx: &IngestContext) -> Result<Vec<LoadedCase>, IngestError> {
    manifest
        .entries()
        .par_iter()
        .map(|entry| {
            let wrap = |source: IngestError| IngestError::Case {
                case_id: entry.case_id.clone(),
                source: Box::new(source),
            };
            let path = manifest.resolve(entry);
            let text = fs::read_to_string(&path).map_err(|e| wrap(io_err(&path, e)))?;
            let parsed = match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
                Some("html" | "htm") => parse_case_details_html(&text, ctx),
                Some("json") => parse_case_record_json(&text, ctx),
                _ => Err(IngestError::Manifest(format!("unsupported fixture format: {}", path.display()))),
            }
            .map_err(wrap)?;
            Ok(LoadedCase {
                case_id: entry.case_id.clone(),
                record: parsed.record,
                warnings: parsed.warnings,
            })
        })
        .collect()
}
