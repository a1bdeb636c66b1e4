use serde::Serialize;

use super::LlmError;

pub const DEFAULT_CHUNK_SIZE: usize = 1000;
pub const DEFAULT_CHUNK_OVERLAP: usize = 200;

/// A window of a document. `char_range` is in characters, end exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TextChunk {
    pub doc_id: String,
    pub index: usize,
    pub text: String,
    pub char_range: (usize, usize),
}

impl TextChunk {
    pub fn id(&self) -> String {
        format!("{}#{}", self.doc_id, self.index)
    }
}

/// Fixed-size character windows; consecutive windows share `overlap`
/// characters and the last one ends at the end of the text.
pub fn chunk_document(doc_id: &str, text: &str, size: usize, overlap: usize) -> Result<Vec<TextChunk>, LlmError> {
    if size <= overlap {
        return Err(LlmError::Config(format!(
            "chunk size {size} must exceed overlap {overlap}"
        )));
    }
    let chars: Vec<char> = text.chars().collect();
    let mut chunks = Vec::new();
    let mut start = 0;
    while start < chars.len() {
        let end = (start + size).min(chars.len());
        chunks.push(TextChunk {
            doc_id: doc_id.to_string(),
            index: chunks.len(),
            text: chars[start..end].iter().collect(),
            char_range: (start, end),
        });
        if end == chars.len() {
            break;
        }
        start = end - overlap;
    }
    Ok(chunks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_examples() {
        assert_eq!(chunk_document("d", "abcdefghij", 10, 0).unwrap().len(), 1);
        let chunks = chunk_document("d", "abcdefghijklmno", 10, 5).unwrap();
        let ranges: Vec<_> = chunks.iter().map(|c| c.char_range).collect();
        assert_eq!(ranges, [(0, 10), (5, 15)]);
        assert!(chunk_document("d", "", 10, 5).unwrap().is_empty());
        assert!(matches!(chunk_document("d", "x", 5, 5), Err(LlmError::Config(_))));
    }

    #[test]
    fn overlap_and_coverage() {
        let text: String = (0..2345).map(|i| char::from(b'a' + (i % 26) as u8)).collect();
        let chunks = chunk_document("d", &text, DEFAULT_CHUNK_SIZE, DEFAULT_CHUNK_OVERLAP).unwrap();
        assert_eq!(chunks.first().unwrap().char_range.0, 0);
        assert_eq!(chunks.last().unwrap().char_range.1, 2345);
        for pair in chunks.windows(2) {
            assert_eq!(pair[0].char_range.1 - pair[1].char_range.0, DEFAULT_CHUNK_OVERLAP);
        }
    }

    #[test]
    fn counts_characters_not_bytes() {
        let chunks = chunk_document("d", "ééééé", 3, 1).unwrap();
        assert_eq!(chunks[0].text, "ééé");
        assert_eq!(chunks[1].char_range, (2, 5));
    }
}
