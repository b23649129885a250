//! The plain-text algebra file format.
//!
//! ```text
//! algebra z2
//! size 2
//! op + 2
//! 0 1
//! 1 0
//! ```
//!
//! Each `op <name> <arity>` line is followed by `size^arity` table entries in lexicographic
//! argument order, last argument fastest, spread over any number of lines. `#` starts a
//! comment that runs to the end of the line.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::algebra::{table_len, AlgebraError, Element, FiniteAlgebra, Operation};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: operation `{name}` needs {expected} table entries, found {got}")]
    TableLength {
        line: usize,
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: table entry {value} is outside the universe of size {size}")]
    EntryOutOfRange {
        line: usize,
        value: Element,
        size: usize,
    },
    #[error("line {line}: {source}")]
    Algebra { line: usize, source: AlgebraError },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

struct Token<'a> {
    line: usize,
    text: &'a str,
}

fn tokens(src: &str) -> Vec<Token<'_>> {
    src.lines()
        .enumerate()
        .flat_map(|(i, line)| {
            let content = line.split('#').next().unwrap_or("");
            content
                .split_whitespace()
                .map(move |text| Token { line: i + 1, text })
        })
        .collect()
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

struct Cursor<'a> {
    toks: Vec<Token<'a>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.toks.get(self.pos)
    }

    fn next(&mut self, what: &str) -> Result<&Token<'a>, FormatError> {
        let line = self.last_line;
        let tok = self
            .toks
            .get(self.pos)
            .ok_or_else(|| syntax(line, format!("unexpected end of file, expected {what}")))?;
        self.pos += 1;
        self.last_line = tok.line;
        Ok(tok)
    }

    fn keyword(&mut self, kw: &str) -> Result<usize, FormatError> {
        let tok = self.next(&format!("`{kw}`"))?;
        if tok.text != kw {
            return Err(syntax(
                tok.line,
                format!("expected `{kw}`, found `{}`", tok.text),
            ));
        }
        Ok(tok.line)
    }

    fn number(&mut self, what: &str) -> Result<(usize, usize), FormatError> {
        let tok = self.next(what)?;
        let value = tok
            .text
            .parse()
            .map_err(|_| syntax(tok.line, format!("expected {what}, found `{}`", tok.text)))?;
        Ok((tok.line, value))
    }
}

pub fn parse_algebra(src: &str) -> Result<FiniteAlgebra, FormatError> {
    let mut cur = Cursor {
        toks: tokens(src),
        pos: 0,
        last_line: 1,
    };
    cur.keyword("algebra")?;
    let name = cur.next("an algebra name")?.text.to_string();
    cur.keyword("size")?;
    let (size_line, size) = cur.number("the universe size")?;
    let mut alg =
        FiniteAlgebra::new(name, size, Vec::new()).map_err(|source| FormatError::Algebra {
            line: size_line,
            source,
        })?;
    while cur.peek().is_some() {
        let op_line = cur.keyword("op")?;
        let op_name = cur.next("an operation name")?.text.to_string();
        let (_, arity) = cur.number("an arity")?;
        let expected =
            table_len(size, arity).ok_or_else(|| syntax(op_line, "operation table too large"))?;
        let mut table = Vec::with_capacity(expected);
        while table.len() < expected {
            match cur.peek() {
                Some(tok) if tok.text.bytes().all(|b| b.is_ascii_digit()) => {
                    let (line, value) = cur.number("a table entry")?;
                    let value = Element::try_from(value)
                        .ok()
                        .filter(|&v| (v as usize) < size)
                        .ok_or(FormatError::EntryOutOfRange {
                            line,
                            value: value.min(Element::MAX as usize) as Element,
                            size,
                        })?;
                    table.push(value);
                }
                Some(tok) if tok.text != "op" => {
                    return Err(syntax(
                        tok.line,
                        format!("expected a table entry, found `{}`", tok.text),
                    ))
                }
                _ => {
                    return Err(FormatError::TableLength {
                        line: op_line,
                        name: op_name,
                        expected,
                        got: table.len(),
                    })
                }
            }
        }
        alg.push_operation(Operation::new(op_name, arity, table))
            .map_err(|source| FormatError::Algebra {
                line: op_line,
                source,
            })?;
    }
    Ok(alg)
}

/// Canonical text: header, then each table in rows of `size` entries.
pub fn format_algebra(alg: &FiniteAlgebra) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "algebra {}", alg.name());
    let _ = writeln!(out, "size {}", alg.size());
    for op in alg.operations() {
        let _ = writeln!(out, "op {} {}", op.name(), op.arity());
        let row = if op.arity() == 0 { 1 } else { alg.size() };
        for chunk in op.table().chunks(row) {
            let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
    }
    out
}

pub fn load_algebra(path: &Path) -> Result<FiniteAlgebra, FormatError> {
    let src = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_algebra(&src)
}

pub fn save_algebra(alg: &FiniteAlgebra, path: &Path) -> Result<(), FormatError> {
    std::fs::write(path, format_algebra(alg)).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}
