//! Character-level scanning shared by the Turtle and N-Triples parsers.

use super::term::is_valid_langtag;
use super::RdfError;

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    /// Added to the computed line number; N-Triples parses one line at a time.
    line_offset: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor {
            src,
            pos: 0,
            line_offset: 0,
        }
    }

    pub fn with_line(src: &'a str, line: usize) -> Self {
        Cursor {
            src,
            pos: 0,
            line_offset: line - 1,
        }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn peek_nth(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn starts_with(&self, s: &str) -> bool {
        self.rest().starts_with(s)
    }

    pub fn is_eof(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub fn advance(&mut self, bytes: usize) {
        self.pos += bytes;
    }

    pub fn location(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line + self.line_offset, column)
    }

    pub fn error_at(&self, pos: usize, message: impl Into<String>) -> RdfError {
        let (line, column) = self.location(pos);
        RdfError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn error(&self, message: impl Into<String>) -> RdfError {
        self.error_at(self.pos, message)
    }

    /// Skips whitespace and `#` comments.
    pub fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), RdfError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(match self.peek() {
                Some(found) => format!("expected {c:?}, found {found:?}"),
                None => format!("expected {c:?}, found end of input"),
            }))
        }
    }

    /// Reads `<...>` and returns the unescaped content, not yet validated.
    pub fn iriref(&mut self) -> Result<String, RdfError> {
        self.expect('<')?;
        let mut out = String::new();
        loop {
            let at = self.pos;
            match self.bump() {
                Some('>') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some('u') => out.push(self.hex_escape(4)?),
                    Some('U') => out.push(self.hex_escape(8)?),
                    _ => return Err(self.error_at(at, "invalid escape in IRI")),
                },
                Some(c) if c.is_whitespace() || c == '<' || c == '"' => {
                    return Err(self.error_at(at, format!("invalid character {c:?} in IRI")))
                }
                Some(c) => out.push(c),
                None => return Err(self.error("unterminated IRI")),
            }
        }
    }

    fn hex_escape(&mut self, digits: usize) -> Result<char, RdfError> {
        let start = self.pos;
        let hex: String = self.rest().chars().take(digits).collect();
        if hex.len() != digits || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(self.error_at(start, "invalid unicode escape"));
        }
        self.pos += digits;
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.error_at(start, "escape is not a unicode scalar value"))
    }

    /// Reads a quoted string. Handles `"`, `'` and their long (tripled)
    /// forms when `allow_long_and_single` is set.
    pub fn string(&mut self, allow_long_and_single: bool) -> Result<String, RdfError> {
        let start = self.pos;
        let quote = match self.peek() {
            Some('"') => '"',
            Some('\'') if allow_long_and_single => '\'',
            _ => return Err(self.error("expected string literal")),
        };
        let triple: String = std::iter::repeat(quote).take(3).collect();
        let long = allow_long_and_single && self.starts_with(&triple);
        self.advance(if long { 3 } else { 1 });
        let mut out = String::new();
        loop {
            if long && self.starts_with(&triple) {
                // A long string may end with up to two extra quotes before the closing triple.
                let mut extra = 0;
                while self.rest()[3 + extra..].starts_with(quote) && extra < 2 {
                    extra += 1;
                }
                for _ in 0..extra {
                    out.push(quote);
                }
                self.advance(3 + extra);
                return Ok(out);
            }
            let at = self.pos;
            match self.bump() {
                None => return Err(self.error_at(start, "unterminated string literal")),
                Some(c) if c == quote && !long => return Ok(out),
                Some('\\') => out.push(match self.bump() {
                    Some('t') => '\t',
                    Some('b') => '\u{8}',
                    Some('n') => '\n',
                    Some('r') => '\r',
                    Some('f') => '\u{c}',
                    Some('"') => '"',
                    Some('\'') => '\'',
                    Some('\\') => '\\',
                    Some('u') => self.hex_escape(4)?,
                    Some('U') => self.hex_escape(8)?,
                    _ => return Err(self.error_at(at, "invalid escape sequence")),
                }),
                Some(c @ ('\n' | '\r')) if !long => {
                    return Err(self.error_at(at, format!("line break {c:?} in short string")))
                }
                Some(c) => out.push(c),
            }
        }
    }

    /// Reads `@tag` after a string; the cursor sits on `@`.
    pub fn langtag(&mut self) -> Result<String, RdfError> {
        let start = self.pos;
        self.expect('@')?;
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
            .unwrap_or(self.rest().len());
        let tag = &self.rest()[..len];
        if !is_valid_langtag(tag) {
            return Err(self.error_at(start, format!("invalid language tag {tag:?}")));
        }
        let tag = tag.to_string();
        self.advance(len);
        Ok(tag)
    }

    /// Reads `_:label`.
    pub fn blank_label(&mut self) -> Result<String, RdfError> {
        let start = self.pos;
        if !self.starts_with("_:") {
            return Err(self.error("expected blank node label"));
        }
        self.advance(2);
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error_at(start, "empty blank node label"));
        }
        let label = self.rest()[..len].to_string();
        self.advance(len);
        Ok(label)
    }
}
