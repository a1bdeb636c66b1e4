use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{io_error, LlmError};

pub const QUESTION_COUNT: usize = 13;
pub const MAX_SCORE: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScoreRow {
    pub question: String,
    pub fulltext: u32,
    pub subpart: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScoreTotals {
    pub fulltext: u32,
    pub subpart: u32,
}

/// Manually assigned answer scores per question, for the full-text and
/// sub-part input strategies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CqScoreSheet {
    rows: Vec<ScoreRow>,
    declared: Option<ScoreTotals>,
}

#[derive(Deserialize)]
struct RawRow {
    question: String,
    fulltext: String,
    subpart: String,
}

fn parse_total(cell: &str) -> Result<u32, LlmError> {
    let value = cell.trim().split('/').next().unwrap_or_default().trim();
    value
        .parse()
        .map_err(|_| LlmError::Scores(format!("total {cell:?} is not a number")))
}

impl CqScoreSheet {
    pub fn new(rows: Vec<ScoreRow>, declared: Option<ScoreTotals>) -> Result<Self, LlmError> {
        if rows.len() != QUESTION_COUNT {
            return Err(LlmError::Scores(format!("expected {QUESTION_COUNT} questions, found {}", rows.len())));
        }
        for row in &rows {
            for (column, value) in [("fulltext", row.fulltext), ("subpart", row.subpart)] {
                if value > MAX_SCORE {
                    return Err(LlmError::Scores(format!(
                        "{column} score {value} for {:?} is outside 0..={MAX_SCORE}",
                        row.question
                    )));
                }
            }
        }
        Ok(CqScoreSheet { rows, declared })
    }

    /// CSV with header `question,fulltext,subpart`. A final row whose
    /// question is `Total` records declared totals instead of scores.
    pub fn from_csv(text: &str) -> Result<Self, LlmError> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let mut rows = Vec::new();
        let mut declared = None;
        for (i, record) in reader.deserialize::<RawRow>().enumerate() {
            let raw = record.map_err(|e| LlmError::Scores(format!("row {}: {e}", i + 2)))?;
            if declared.is_some() {
                return Err(LlmError::Scores("rows after the Total row".into()));
            }
            if raw.question.eq_ignore_ascii_case("total") {
                declared = Some(ScoreTotals {
                    fulltext: parse_total(&raw.fulltext)?,
                    subpart: parse_total(&raw.subpart)?,
                });
                continue;
            }
            let score = |cell: &str| {
                cell.parse::<u32>()
                    .map_err(|_| LlmError::Scores(format!("row {}: score {cell:?} is not a whole number", i + 2)))
            };
            rows.push(ScoreRow {
                fulltext: score(&raw.fulltext)?,
                subpart: score(&raw.subpart)?,
                question: raw.question,
            });
        }
        Self::new(rows, declared)
    }

    pub fn load(path: &Path) -> Result<Self, LlmError> {
        Self::from_csv(&std::fs::read_to_string(path).map_err(|e| io_error(path, e))?)
    }

    pub fn rows(&self) -> &[ScoreRow] {
        &self.rows
    }

    pub fn declared(&self) -> Option<ScoreTotals> {
        self.declared
    }

    pub fn max_total(&self) -> u32 {
        MAX_SCORE * self.rows.len() as u32
    }

    /// Column sums.
    pub fn totals(&self) -> ScoreTotals {
        ScoreTotals {
            fulltext: self.rows.iter().map(|r| r.fulltext).sum(),
            subpart: self.rows.iter().map(|r| r.subpart).sum(),
        }
    }

    pub fn render_total(&self, total: u32) -> String {
        format!("{total}/{}", self.max_total())
    }

    /// Present when the sheet declares totals that differ from its sums.
    pub fn known_issue(&self) -> Option<String> {
        let declared = self.declared?;
        let sums = self.totals();
        (declared != sums).then(|| {
            format!(
                "known issue: declared totals {} (full-text) and {} (sub-part) differ from the column sums {} and {}; the column sums are reported",
                self.render_total(declared.fulltext),
                self.render_total(declared.subpart),
                self.render_total(sums.fulltext),
                self.render_total(sums.subpart),
            )
        })
    }

    pub fn report(&self) -> String {
        let mut out = String::from(" # full-text sub-part question\n");
        for (i, row) in self.rows.iter().enumerate() {
            let _ = writeln!(out, "{:>2} {:>9} {:>8} {}", i + 1, row.fulltext, row.subpart, row.question);
        }
        let totals = self.totals();
        let _ = writeln!(
            out,
            "total: full-text {}, sub-part {}",
            self.render_total(totals.fulltext),
            self.render_total(totals.subpart)
        );
        if let Some(note) = self.known_issue() {
            out.push_str(&note);
            out.push('\n');
        }
        out
    }

    /// The sheet with a computed `Total` row.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut write = |fields: [&str; 3]| writer.write_record(fields).expect("in-memory CSV write");
        write(["question", "fulltext", "subpart"]);
        for row in &self.rows {
            write([&row.question, &row.fulltext.to_string(), &row.subpart.to_string()]);
        }
        let totals = self.totals();
        write(["Total", &totals.fulltext.to_string(), &totals.subpart.to_string()]);
        String::from_utf8(writer.into_inner().expect("in-memory CSV flush")).expect("CSV output is UTF-8")
    }
}
