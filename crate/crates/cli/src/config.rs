use std::path::{Path, PathBuf};

use legalkg_core::mapping::VocabularyConfig;
use serde::Deserialize;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProviderKind {
    Mock,
    Http,
}

/// `[llm]` table. Relative paths are taken from the config file's directory.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LlmSection {
    pub provider: Option<ProviderKind>,
    pub fixtures: Option<PathBuf>,
    pub documents: Option<PathBuf>,
    pub sections: Option<PathBuf>,
    pub seed: Option<PathBuf>,
    pub scores: Option<PathBuf>,
    pub chunk_size: Option<usize>,
    pub chunk_overlap: Option<usize>,
    pub top_k: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileForm {
    vocabulary: Option<toml::Table>,
    #[serde(default)]
    llm: LlmSection,
}

#[derive(Debug)]
pub struct AppConfig {
    pub vocabulary: VocabularyConfig,
    pub llm: LlmSection,
}

impl Default for AppConfig {
    fn default() -> Self {
        AppConfig {
            vocabulary: VocabularyConfig::default(),
            llm: LlmSection::default(),
        }
    }
}

fn rebase(base: &Path, path: &mut Option<PathBuf>) {
    if let Some(p) = path.as_mut() {
        if p.is_relative() {
            *p = base.join(&*p);
        }
    }
}

impl AppConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(AppConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
            .map_err(|e| Failure::config(format!("{}: {}", path.display(), e.message)))
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, Failure> {
        let file: FileForm = toml::from_str(text).map_err(|e| Failure::config(e.to_string()))?;
        let vocabulary = match file.vocabulary {
            Some(table) => VocabularyConfig::from_toml_str(&table.to_string()).map_err(|e| Failure::config(e.to_string()))?,
            None => VocabularyConfig::default(),
        };
        let mut llm = file.llm;
        for p in [&mut llm.fixtures, &mut llm.documents, &mut llm.sections, &mut llm.seed, &mut llm.scores] {
            rebase(base, p);
        }
        Ok(AppConfig { vocabulary, llm })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_config_parses() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/config/legalkg.toml");
        let cfg = AppConfig::load(Some(&path)).unwrap();
        assert_eq!(cfg.llm.provider, Some(ProviderKind::Mock));
        assert!(cfg.llm.documents.unwrap().join("doc1.txt").is_file());
        assert_eq!(cfg.vocabulary.custom_prefix, "pj4w");
    }

    #[test]
    fn unknown_keys_are_config_errors() {
        let err = AppConfig::parse("[llm]\nchunk = 3\n", Path::new(".")).unwrap_err();
        assert_eq!(err.code, crate::EXIT_CONFIG);
        let err = AppConfig::parse("[vocabulary]\ncustom_prefix = \"9x\"\n", Path::new(".")).unwrap_err();
        assert_eq!(err.code, crate::EXIT_CONFIG);
    }

    #[test]
    fn relative_paths_follow_the_file() {
        let cfg = AppConfig::parse("[llm]\ndocuments = \"docs\"\n", Path::new("/etc/kg")).unwrap();
        assert_eq!(cfg.llm.documents.unwrap(), Path::new("/etc/kg/docs"));
    }
}
