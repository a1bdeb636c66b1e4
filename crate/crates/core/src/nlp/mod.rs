//! Rule-based text pipeline: sentence splitting, tokenization, stopword
//! removal, lemmatization, lexicon tagging and nearest-noun SVO extraction.
//!
//! The linguistic resources are plain text files (see `data/nlp/`) and can
//! be replaced with [`NlpResources::from_dir`].

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use regex::Regex;
use serde::Serialize;
use thiserror::Error;

use crate::mapping::VocabularyConfig;
use crate::rdf::{Graph, Iri, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Pronoun,
    Determiner,
    Preposition,
    Other,
}

impl Pos {
    fn from_tag(tag: &str) -> Option<Pos> {
        Some(match tag {
            "NOUN" => Pos::Noun,
            "VERB" => Pos::Verb,
            "ADJ" => Pos::Adjective,
            "ADV" => Pos::Adverb,
            "PRON" => Pos::Pronoun,
            "DET" => Pos::Determiner,
            "ADP" => Pos::Preposition,
            "OTHER" => Pos::Other,
            _ => return None,
        })
    }

    fn is_nominal(self) -> bool {
        matches!(self, Pos::Noun | Pos::Pronoun)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    /// `Other` until [`pos_tag`] runs.
    pub pos: Pos,
    pub sentence_index: usize,
    /// Position of the word in its sentence before stopword removal.
    pub token_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SvoTriple {
    pub subj: String,
    pub verb: String,
    pub obj: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResourceError {
    #[error("{file}:{line}: {message}")]
    Format { file: String, line: usize, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone)]
pub struct NlpResources {
    stopwords: HashSet<String>,
    exceptions: HashMap<String, String>,
    lexicon: HashMap<String, Pos>,
}

const STOPWORDS: &str = include_str!("../../data/nlp/stopwords.txt");
const EXCEPTIONS: &str = include_str!("../../data/nlp/lemma_exceptions.txt");
const LEXICON: &str = include_str!("../../data/nlp/pos_lexicon.txt");

fn entries(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn pairs(text: &str, file: &str) -> Result<Vec<(usize, String, String)>, ResourceError> {
    let mut seen = HashSet::new();
    entries(text)
        .map(|(line, l)| {
            let err = |message: &str| ResourceError::Format {
                file: file.to_string(),
                line,
                message: message.to_string(),
            };
            let (key, value) = l.split_once('\t').ok_or_else(|| err("expected two tab-separated columns"))?;
            let (key, value) = (key.trim().to_lowercase(), value.trim().to_string());
            if key.is_empty() || value.is_empty() {
                return Err(err("empty column"));
            }
            if !seen.insert(key.clone()) {
                return Err(err(&format!("duplicate entry {key:?}")));
            }
            Ok((line, key, value))
        })
        .collect()
}

impl NlpResources {
    pub fn parse(stopwords: &str, exceptions: &str, lexicon: &str) -> Result<Self, ResourceError> {
        let stopwords = entries(stopwords).map(|(_, w)| strip_punctuation(&w.to_lowercase())).collect();
        let exceptions = pairs(exceptions, "lemma_exceptions.txt")?
            .into_iter()
            .map(|(_, k, v)| (k, v))
            .collect();
        let lexicon = pairs(lexicon, "pos_lexicon.txt")?
            .into_iter()
            .map(|(line, word, tag)| {
                Pos::from_tag(&tag).map(|pos| (word, pos)).ok_or(ResourceError::Format {
                    file: "pos_lexicon.txt".into(),
                    line,
                    message: format!("unknown tag {tag:?}"),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(NlpResources {
            stopwords,
            exceptions,
            lexicon,
        })
    }

    /// Reads `stopwords.txt`, `lemma_exceptions.txt` and `pos_lexicon.txt`
    /// from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self, ResourceError> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).map_err(|e| ResourceError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })
        };
        Self::parse(&read("stopwords.txt")?, &read("lemma_exceptions.txt")?, &read("pos_lexicon.txt")?)
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(&word.to_lowercase())
    }

    pub fn lemmatize(&self, word: &str) -> String {
        let word = word.to_lowercase();
        if let Some(lemma) = self.exceptions.get(&word) {
            return lemma.clone();
        }
        suffix_lemma(&word)
    }

    pub fn tag(&self, lemma: &str) -> Pos {
        if let Some(&pos) = self.lexicon.get(lemma) {
            return pos;
        }
        if lemma.ends_with("ly") {
            Pos::Adverb
        } else if ["tion", "ment", "ity"].iter().any(|s| lemma.ends_with(s)) {
            Pos::Noun
        } else if ["ize", "ate"].iter().any(|s| lemma.ends_with(s)) {
            Pos::Verb
        } else {
            Pos::Noun
        }
    }
}

impl Default for NlpResources {
    fn default() -> Self {
        static DEFAULT: OnceLock<NlpResources> = OnceLock::new();
        DEFAULT
            .get_or_init(|| NlpResources::parse(STOPWORDS, EXCEPTIONS, LEXICON).expect("bundled resources are valid"))
            .clone()
    }
}

fn has_vowel(s: &str) -> bool {
    s.chars().any(|c| "aeiouy".contains(c))
}

/// Undoes consonant doubling ("runn" -> "run"), except for l, s and z
/// where the double is usually part of the stem ("fall", "dismiss").
fn undouble(stem: &str) -> String {
    let bytes = stem.as_bytes();
    let n = bytes.len();
    if n >= 2 && bytes[n - 1] == bytes[n - 2] {
        let c = bytes[n - 1] as char;
        if c.is_ascii_alphabetic() && !"aeioulsz".contains(c) {
            return stem[..n - 1].to_string();
        }
    }
    stem.to_string()
}

fn suffix_lemma(word: &str) -> String {
    if let Some(stem) = word.strip_suffix("ies") {
        if stem.len() >= 2 {
            return format!("{stem}y");
        }
    }
    if let Some(stem) = word.strip_suffix("sses") {
        return format!("{stem}ss");
    }
    for suffix in ["ing", "ed"] {
        if let Some(stem) = word.strip_suffix(suffix) {
            if stem.len() >= 3 && has_vowel(stem) {
                return undouble(stem);
            }
        }
    }
    if word.len() > 3 && word.ends_with('s') && !["ss", "us", "is"].iter().any(|s| word.ends_with(s)) {
        return word[..word.len() - 1].to_string();
    }
    word.to_string()
}

fn strip_punctuation(word: &str) -> String {
    word.chars().filter(|c| c.is_alphanumeric()).collect()
}

fn sentence_splitter() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"[.?!]+(?:\s+|$)").expect("valid regex"))
}

/// Splits, tokenizes, drops stopwords and lemmatizes. Sentences left empty
/// after stopword removal are dropped.
pub fn preprocess_with(text: &str, res: &NlpResources) -> Vec<Vec<Token>> {
    let mut out = Vec::new();
    for raw in sentence_splitter().split(text) {
        let words: Vec<String> = raw
            .split(|c: char| c.is_whitespace() || matches!(c, '-' | '/' | '\u{2013}' | '\u{2014}'))
            .map(strip_punctuation)
            .filter(|w| !w.is_empty())
            .collect();
        let sentence_index = out.len();
        let tokens: Vec<Token> = words
            .iter()
            .enumerate()
            .filter(|(_, w)| !res.is_stopword(w))
            .map(|(token_index, w)| Token {
                surface: w.clone(),
                lemma: res.lemmatize(w),
                pos: Pos::Other,
                sentence_index,
                token_index,
            })
            .collect();
        if !tokens.is_empty() {
            out.push(tokens);
        }
    }
    out
}

pub fn preprocess(text: &str) -> Vec<Vec<Token>> {
    preprocess_with(text, &NlpResources::default())
}

pub fn pos_tag_with(sentence: &[Token], res: &NlpResources) -> Vec<Token> {
    sentence
        .iter()
        .map(|t| Token {
            pos: res.tag(&t.lemma),
            ..t.clone()
        })
        .collect()
}

pub fn pos_tag(sentence: &[Token]) -> Vec<Token> {
    pos_tag_with(sentence, &NlpResources::default())
}

/// For every verb, pairs the nearest noun or pronoun on each side.
pub fn extract_svo(sentences: &[Vec<Token>]) -> Vec<SvoTriple> {
    let mut out = Vec::new();
    for sentence in sentences {
        for (i, verb) in sentence.iter().enumerate() {
            if verb.pos != Pos::Verb {
                continue;
            }
            let subj = sentence[..i].iter().rev().find(|t| t.pos.is_nominal());
            let obj = sentence[i + 1..].iter().find(|t| t.pos.is_nominal());
            if let (Some(s), Some(o)) = (subj, obj) {
                out.push(SvoTriple {
                    subj: s.lemma.clone(),
                    verb: verb.lemma.clone(),
                    obj: o.lemma.clone(),
                });
            }
        }
    }
    out
}

/// RFC 3986 unreserved characters stay as they are.
const LEMMA_ESCAPE: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'_').remove(b'.').remove(b'~');

fn lemma_iri(cfg: &VocabularyConfig, lemma: &str) -> Iri {
    let encoded = utf8_percent_encode(lemma, LEMMA_ESCAPE);
    Iri::new(format!("{}{encoded}", cfg.custom_ns.as_str())).expect("percent-encoded lemma yields a valid IRI")
}

pub fn svo_to_rdf(triples: &[SvoTriple], cfg: &VocabularyConfig) -> Graph {
    let mut g = Graph::new();
    if !triples.is_empty() {
        g.bind_prefix(cfg.custom_prefix.clone(), cfg.custom_ns.clone());
    }
    for t in triples {
        let triple = Triple::new(lemma_iri(cfg, &t.subj), lemma_iri(cfg, &t.verb), lemma_iri(cfg, &t.obj))
            .expect("IRI subject");
        g.insert(triple);
    }
    g
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NlpOutput {
    pub sentences: Vec<Vec<Token>>,
    pub triples: Vec<SvoTriple>,
}

/// preprocess, tag and extract in one pass.
pub fn run_pipeline(text: &str, res: &NlpResources) -> NlpOutput {
    let sentences: Vec<Vec<Token>> = preprocess_with(text, res)
        .iter()
        .map(|s| pos_tag_with(s, res))
        .collect();
    let triples = extract_svo(&sentences);
    NlpOutput { sentences, triples }
}
