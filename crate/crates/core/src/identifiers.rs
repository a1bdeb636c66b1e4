//! European Case Law Identifiers for Strasbourg rulings, and the derived
//! fields they encode (date, document type, application number), plus
//! importance-level normalization.
//!
//! An identifier looks like `ECLI:CE:ECHR:2022:0210JUD007397516`: issuer,
//! court, year, then an ordinal tail made of the month and day of the
//! ruling, a document-type code, a 7-digit zero-padded application serial
//! and the two-digit application year.

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentifierError {
    #[error("ECLI {0:?} must have exactly five colon-separated parts")]
    PartCount(String),
    #[error("ECLI {0:?} must start with \"ECLI\"")]
    Prefix(String),
    #[error("invalid issuer code {0:?}")]
    Issuer(String),
    #[error("invalid court code {0:?}")]
    Court(String),
    #[error("invalid year {0:?} (expected 1950-2100)")]
    Year(String),
    #[error("ordinal {0:?} must be MMDD, a type code and 9 digits")]
    Ordinal(String),
    #[error("invalid date {year:04}-{month:02}-{day:02}")]
    Date { year: i32, month: u32, day: u32 },
    #[error("application serial must be between 1 and 9999999, got {0}")]
    Serial(u32),
    #[error("invalid application number {0:?}")]
    ApplicationNumber(String),
    #[error("unknown importance level {0:?}")]
    Importance(String),
}

/// A ruling's document type, encoded in the ECLI ordinal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DocumentType {
    Judgment,
    Decision,
    Other(String),
}

impl DocumentType {
    pub fn from_code(code: &str) -> Result<Self, IdentifierError> {
        let code = code.trim().to_ascii_uppercase();
        if code.is_empty() || !code.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(IdentifierError::Ordinal(code));
        }
        Ok(match code.as_str() {
            "JUD" => DocumentType::Judgment,
            "DEC" => DocumentType::Decision,
            _ => DocumentType::Other(code),
        })
    }

    pub fn code(&self) -> &str {
        match self {
            DocumentType::Judgment => "JUD",
            DocumentType::Decision => "DEC",
            DocumentType::Other(code) => code,
        }
    }
}

impl fmt::Display for DocumentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Application number as displayed by the court, e.g. `73975/16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ApplicationNumber {
    serial: u32,
    year_suffix: u8,
}

impl ApplicationNumber {
    pub fn new(serial: u32, year_suffix: u8) -> Result<Self, IdentifierError> {
        if serial == 0 || serial > 9_999_999 {
            return Err(IdentifierError::Serial(serial));
        }
        if year_suffix > 99 {
            return Err(IdentifierError::ApplicationNumber(format!("{serial}/{year_suffix}")));
        }
        Ok(ApplicationNumber { serial, year_suffix })
    }

    pub fn serial(&self) -> u32 {
        self.serial
    }

    pub fn year_suffix(&self) -> u8 {
        self.year_suffix
    }
}

impl fmt::Display for ApplicationNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{:02}", self.serial, self.year_suffix)
    }
}

impl FromStr for ApplicationNumber {
    type Err = IdentifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IdentifierError::ApplicationNumber(s.to_string());
        let (serial, year) = s.trim().split_once('/').ok_or_else(bad)?;
        if year.len() != 2 || !serial.chars().all(|c| c.is_ascii_digit()) || !year.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        ApplicationNumber::new(serial.parse().map_err(|_| bad())?, year.parse().map_err(|_| bad())?)
    }
}

/// The fourth ECLI component for Strasbourg rulings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrdinalCode {
    month: u32,
    day: u32,
    doc_type: DocumentType,
    application: ApplicationNumber,
}

impl OrdinalCode {
    pub fn month(&self) -> u32 {
        self.month
    }

    pub fn day(&self) -> u32 {
        self.day
    }

    pub fn doc_type(&self) -> &DocumentType {
        &self.doc_type
    }

    pub fn application(&self) -> ApplicationNumber {
        self.application
    }
}

impl fmt::Display for OrdinalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:02}{:02}{}{:07}{:02}",
            self.month,
            self.day,
            self.doc_type.code(),
            self.application.serial,
            self.application.year_suffix
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EcliId {
    issuer: String,
    court: String,
    year: i32,
    ordinal: OrdinalCode,
}

/// Issuer written on output; `EC` is accepted as an input spelling.
pub const CANONICAL_ISSUER: &str = "CE";

impl EcliId {
    /// Builds an identifier, checking that the ordinal date exists.
    pub fn new(
        issuer: &str,
        court: &str,
        year: i32,
        month: u32,
        day: u32,
        doc_type: DocumentType,
        application: ApplicationNumber,
    ) -> Result<Self, IdentifierError> {
        let issuer = match issuer.to_ascii_uppercase().as_str() {
            "EC" | "CE" => CANONICAL_ISSUER.to_string(),
            other if other.len() == 2 && other.chars().all(|c| c.is_ascii_alphabetic()) => other.to_string(),
            _ => return Err(IdentifierError::Issuer(issuer.to_string())),
        };
        if court.is_empty() || !court.chars().all(|c| c.is_ascii_alphanumeric()) {
            return Err(IdentifierError::Court(court.to_string()));
        }
        if !(1950..=2100).contains(&year) {
            return Err(IdentifierError::Year(year.to_string()));
        }
        NaiveDate::from_ymd_opt(year, month, day).ok_or(IdentifierError::Date { year, month, day })?;
        Ok(EcliId {
            issuer,
            court: court.to_ascii_uppercase(),
            year,
            ordinal: OrdinalCode {
                month,
                day,
                doc_type,
                application,
            },
        })
    }

    pub fn issuer(&self) -> &str {
        &self.issuer
    }

    pub fn court(&self) -> &str {
        &self.court
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn ordinal(&self) -> &OrdinalCode {
        &self.ordinal
    }

    pub fn date(&self) -> NaiveDate {
        NaiveDate::from_ymd_opt(self.year, self.ordinal.month, self.ordinal.day).expect("validated at construction")
    }

    pub fn doc_type(&self) -> &DocumentType {
        &self.ordinal.doc_type
    }

    pub fn application_number(&self) -> ApplicationNumber {
        self.ordinal.application
    }
}

impl fmt::Display for EcliId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ECLI:{}:{}:{}:{}", self.issuer, self.court, self.year, self.ordinal)
    }
}

impl FromStr for EcliId {
    type Err = IdentifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ecli(s)
    }
}

impl Serialize for EcliId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EcliId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_ecli(&text).map_err(serde::de::Error::custom)
    }
}

pub fn parse_ecli(text: &str) -> Result<EcliId, IdentifierError> {
    let text = text.trim();
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 5 {
        return Err(IdentifierError::PartCount(text.to_string()));
    }
    if !parts[0].eq_ignore_ascii_case("ECLI") {
        return Err(IdentifierError::Prefix(text.to_string()));
    }
    let year_text = parts[3];
    if year_text.len() != 4 || !year_text.chars().all(|c| c.is_ascii_digit()) {
        return Err(IdentifierError::Year(year_text.to_string()));
    }
    let year: i32 = year_text.parse().map_err(|_| IdentifierError::Year(year_text.to_string()))?;
    let ordinal = parts[4];
    let bad_ordinal = || IdentifierError::Ordinal(ordinal.to_string());
    if !ordinal.is_ascii() || ordinal.len() < 4 + 1 + 9 {
        return Err(bad_ordinal());
    }
    let (mmdd, rest) = ordinal.split_at(4);
    if !mmdd.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad_ordinal());
    }
    let code_len = rest.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(rest.len());
    let (code, digits) = rest.split_at(code_len);
    if code.is_empty() || digits.len() != 9 || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad_ordinal());
    }
    let month: u32 = mmdd[..2].parse().map_err(|_| bad_ordinal())?;
    let day: u32 = mmdd[2..].parse().map_err(|_| bad_ordinal())?;
    let serial: u32 = digits[..7].parse().map_err(|_| bad_ordinal())?;
    let year_suffix: u8 = digits[7..].parse().map_err(|_| bad_ordinal())?;
    let application = ApplicationNumber::new(serial, year_suffix)?;
    EcliId::new(parts[1], parts[2], year, month, day, DocumentType::from_code(code)?, application)
}

pub fn format_ecli(ecli: &EcliId) -> String {
    ecli.to_string()
}

/// Canonical importance: 1 is "Key cases", 2..=4 correspond to the court's
/// labels "1", "2" and "3".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct ImportanceLevel(u8);

impl ImportanceLevel {
    pub fn from_canonical(level: u8) -> Result<Self, IdentifierError> {
        if (1..=4).contains(&level) {
            Ok(ImportanceLevel(level))
        } else {
            Err(IdentifierError::Importance(level.to_string()))
        }
    }

    pub fn canonical(&self) -> u8 {
        self.0
    }

    pub fn label(&self) -> String {
        match self.0 {
            1 => "Key cases".to_string(),
            n => (n - 1).to_string(),
        }
    }
}

impl TryFrom<u8> for ImportanceLevel {
    type Error = IdentifierError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        ImportanceLevel::from_canonical(value)
    }
}

impl From<ImportanceLevel> for u8 {
    fn from(value: ImportanceLevel) -> Self {
        value.0
    }
}

/// Label → canonical level table; case and whitespace insensitive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImportanceTable {
    entries: Vec<(String, u8)>,
}

impl Default for ImportanceTable {
    fn default() -> Self {
        ImportanceTable::new([("Key cases", 1), ("Key case", 1), ("1", 2), ("2", 3), ("3", 4)])
            .expect("default table is valid")
    }
}

impl ImportanceTable {
    pub fn new<'a>(entries: impl IntoIterator<Item = (&'a str, u8)>) -> Result<Self, IdentifierError> {
        let entries = entries
            .into_iter()
            .map(|(label, level)| {
                ImportanceLevel::from_canonical(level)?;
                Ok((normalize_label(label), level))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ImportanceTable { entries })
    }

    pub fn normalize(&self, raw: &str) -> Result<ImportanceLevel, IdentifierError> {
        let key = normalize_label(raw);
        self.entries
            .iter()
            .find(|(label, _)| *label == key)
            .map(|&(_, level)| ImportanceLevel(level))
            .ok_or_else(|| IdentifierError::Importance(raw.to_string()))
    }
}

fn normalize_label(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Normalizes a raw importance label with the default table.
pub fn normalize_importance(raw: &str) -> Result<ImportanceLevel, IdentifierError> {
    ImportanceTable::default().normalize(raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_identifier() {
        let e = parse_ecli("ECLI:CE:ECHR:2022:0210JUD007397516").unwrap();
        assert_eq!(e.issuer(), "CE");
        assert_eq!(e.court(), "ECHR");
        assert_eq!(e.year(), 2022);
        assert_eq!(e.date(), NaiveDate::from_ymd_opt(2022, 2, 10).unwrap());
        assert_eq!(e.doc_type(), &DocumentType::Judgment);
        assert_eq!(e.application_number().to_string(), "73975/16");
        assert_eq!(format_ecli(&e), "ECLI:CE:ECHR:2022:0210JUD007397516");
    }

    #[test]
    fn ec_issuer_accepted_and_canonicalized() {
        let e = parse_ecli("ECLI:EC:ECHR:2022:0210JUD007397516").unwrap();
        assert_eq!(format_ecli(&e), "ECLI:CE:ECHR:2022:0210JUD007397516");
    }

    #[test]
    fn decision_with_minimal_serial() {
        let e = parse_ecli("ECLI:CE:ECHR:2019:0101DEC000000119").unwrap();
        assert_eq!(e.doc_type(), &DocumentType::Decision);
        assert_eq!(e.application_number().to_string(), "1/19");
        assert_eq!(e.ordinal().to_string(), "0101DEC000000119");
    }

    #[test]
    fn error_contracts() {
        assert!(matches!(parse_ecli("ECLI:CE:ECHR:2022"), Err(IdentifierError::PartCount(_))));
        assert!(matches!(parse_ecli("ECLX:CE:ECHR:2022:0210JUD007397516"), Err(IdentifierError::Prefix(_))));
        assert!(matches!(parse_ecli("ECLI:CE:ECHR:2022:0230JUD007397516"), Err(IdentifierError::Date { .. })));
        assert!(matches!(parse_ecli("ECLI:CE:ECHR:2022:0210JUD07397516"), Err(IdentifierError::Ordinal(_))));
        assert!(matches!(parse_ecli("ECLI:CE:ECHR:1900:0210JUD007397516"), Err(IdentifierError::Year(_))));
        assert!(matches!(parse_ecli("ECLI:CE:ECHR:2022:0210JUD000000016"), Err(IdentifierError::Serial(0))));
    }

    #[test]
    fn feb_30_never_constructs() {
        let app = ApplicationNumber::new(1, 19).unwrap();
        assert!(EcliId::new("CE", "ECHR", 2019, 2, 30, DocumentType::Judgment, app).is_err());
        assert!(EcliId::new("CE", "ECHR", 2020, 2, 29, DocumentType::Judgment, app).is_ok());
        assert!(EcliId::new("CE", "ECHR", 2019, 2, 29, DocumentType::Judgment, app).is_err());
    }

    #[test]
    fn application_number_forms() {
        let a: ApplicationNumber = "73975/16".parse().unwrap();
        assert_eq!((a.serial(), a.year_suffix()), (73975, 16));
        assert_eq!(ApplicationNumber::new(12, 5).unwrap().to_string(), "12/05");
        assert!("12-05".parse::<ApplicationNumber>().is_err());
        assert!("0/05".parse::<ApplicationNumber>().is_err());
    }

    #[test]
    fn importance_table() {
        assert_eq!(normalize_importance("Key cases").unwrap().canonical(), 1);
        assert_eq!(normalize_importance("  key   CASES ").unwrap().canonical(), 1);
        assert_eq!(normalize_importance("2").unwrap().canonical(), 3);
        assert_eq!(normalize_importance("3").unwrap().label(), "3");
        assert_eq!(normalize_importance("").unwrap_err(), IdentifierError::Importance(String::new()));
        assert!(normalize_importance("4").is_err());
        for level in 1..=4 {
            let l = ImportanceLevel::from_canonical(level).unwrap();
            assert_eq!(normalize_importance(&l.label()).unwrap(), l);
        }
    }
}
