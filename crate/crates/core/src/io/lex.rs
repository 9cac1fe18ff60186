use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Identifier or keyword; may contain letters, digits, `_` and `-`.
    Word(String),
    Num(u64),
    Punct(char),
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

impl Token {
    pub fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col, msg)
    }

    pub fn describe(&self) -> String {
        match &self.tok {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Punct(c) => format!("`{c}`"),
        }
    }
}

pub(crate) const HEADER: &str = "force-format v1";

/// Lines of `doc` with comments stripped, numbered from 1, skipping blank
/// lines and an optional version header.
pub(crate) fn content_lines(doc: &str) -> Result<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    let mut seen_content = false;
    for (i, raw) in doc.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if !seen_content && line.trim_start().starts_with("force-format") {
            seen_content = true;
            if line.trim() != HEADER {
                let col = line.len() - line.trim_start().len() + 1;
                return Err(Error::parse(
                    i + 1,
                    col,
                    format!("unsupported header, expected `{HEADER}`"),
                ));
            }
            continue;
        }
        seen_content = true;
        out.push((i + 1, line));
    }
    Ok(out)
}

pub(crate) fn tokenize(line: &str, line_no: usize) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (_, c) = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i].1.is_alphabetic() || chars[i].1 == '_') {
                return Err(Error::parse(
                    line_no,
                    col,
                    "identifiers must not start with a digit",
                ));
            }
            let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
            let n = text
                .parse()
                .map_err(|_| Error::parse(line_no, col, format!("number `{text}` is too large")))?;
            out.push(Token {
                tok: Tok::Num(n),
                line: line_no,
                col,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].1.is_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '-')
            {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push(Token {
                tok: Tok::Word(text),
                line: line_no,
                col,
            });
            continue;
        }
        if ":,;().|&~=".contains(c) {
            out.push(Token {
                tok: Tok::Punct(c),
                line: line_no,
                col,
            });
            i += 1;
            continue;
        }
        return Err(Error::parse(
            line_no,
            col,
            format!("unexpected character `{c}`"),
        ));
    }
    Ok(out)
}

/// A cursor over tokens that reports the end position when input runs out.
pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Cursor {
    pub fn new(toks: Vec<Token>, end: (usize, usize)) -> Self {
        Cursor { toks, pos: 0, end }
    }

    pub fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    pub fn peek2(&self) -> Option<&Token> {
        self.toks.get(self.pos + 1)
    }

    pub fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn eof_err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.end.0, self.end.1, msg)
    }

    pub fn expect_word(&mut self, what: &str) -> Result<(String, Token)> {
        match self.next() {
            Some(t) => match &t.tok {
                Tok::Word(w) => Ok((w.clone(), t.clone())),
                _ => Err(t.err(format!("expected {what}, found {}", t.describe()))),
            },
            None => Err(self.eof_err(format!("expected {what}, found end of input"))),
        }
    }

    pub fn expect_num(&mut self, what: &str) -> Result<(u64, Token)> {
        match self.next() {
            Some(t) => match t.tok {
                Tok::Num(n) => Ok((n, t)),
                _ => Err(t.err(format!("expected {what}, found {}", t.describe()))),
            },
            None => Err(self.eof_err(format!("expected {what}, found end of input"))),
        }
    }

    pub fn expect_punct(&mut self, c: char) -> Result<Token> {
        match self.next() {
            Some(t) if t.tok == Tok::Punct(c) => Ok(t),
            Some(t) => Err(t.err(format!("expected `{c}`, found {}", t.describe()))),
            None => Err(self.eof_err(format!("expected `{c}`, found end of input"))),
        }
    }

    pub fn eat_punct(&mut self, c: char) -> bool {
        if self.peek().is_some_and(|t| t.tok == Tok::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}

/// Tokens of a whole document, with the position just past its last line.
pub(crate) fn tokenize_doc(doc: &str) -> Result<Cursor> {
    let lines = content_lines(doc)?;
    let mut toks = Vec::new();
    let mut end = (1, 1);
    for (n, line) in lines {
        toks.extend(tokenize(line, n)?);
        end = (n, line.chars().count() + 1);
    }
    Ok(Cursor::new(toks, end))
}
