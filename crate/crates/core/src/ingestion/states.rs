use std::collections::HashMap;

use crate::rdf::Iri;

use super::IngestError;

const BUNDLED: &str = include_str!("../../data/wikidata_states.tsv");
const WIKIDATA_ENTITY: &str = "http://www.wikidata.org/entity/";

/// Respondent state name → Wikidata entity lookup.
#[derive(Debug, Clone)]
pub struct StateTable {
    by_name: HashMap<String, String>,
}

impl Default for StateTable {
    fn default() -> Self {
        StateTable::parse(BUNDLED).expect("bundled state table is well-formed")
    }
}

impl StateTable {
    /// Parses `name<TAB>Qnnn` rows; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, IngestError> {
        let mut by_name = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || IngestError::InvalidField {
                field: format!("state table line {}", idx + 1),
                message: format!("expected name<TAB>Q-id, got {line:?}"),
            };
            let (name, qid) = line.split_once('\t').ok_or_else(bad)?;
            let qid = qid.trim();
            if !(qid.starts_with('Q') && qid.len() > 1 && qid[1..].chars().all(|c| c.is_ascii_digit())) {
                return Err(bad());
            }
            by_name.insert(normalize(name), qid.to_string());
        }
        Ok(StateTable { by_name })
    }

    pub fn resolve(&self, name: &str) -> Result<Iri, IngestError> {
        self.by_name
            .get(&normalize(name))
            .map(|qid| Iri::new(format!("{WIKIDATA_ENTITY}{qid}")).expect("Q-id IRIs are valid"))
            .ok_or_else(|| IngestError::UnresolvedState(name.trim().to_string()))
    }

    pub fn len(&self) -> usize {
        self.by_name.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_name.is_empty()
    }
}

fn normalize(name: &str) -> String {
    name.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Resolves a state name with the bundled table.
pub fn map_state_to_wikidata(name: &str) -> Result<Iri, IngestError> {
    StateTable::default().resolve(name)
}
