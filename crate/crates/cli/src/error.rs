use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Lexical,
    Syntax,
    Binding,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Lexical => "lexical",
            ErrorKind::Syntax => "syntax",
            ErrorKind::Binding => "binding",
        })
    }
}

/// A positioned error from lexing, parsing or name resolution.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub pos: Pos,
    pub message: String,
    /// Token classes that would have been accepted; empty for binding errors.
    pub expected: BTreeSet<String>,
}

impl ParseError {
    pub fn lexical(pos: Pos, message: impl Into<String>) -> Self {
        ParseError { kind: ErrorKind::Lexical, pos, message: message.into(), expected: BTreeSet::new() }
    }

    pub fn syntax(pos: Pos, message: impl Into<String>, expected: BTreeSet<String>) -> Self {
        ParseError { kind: ErrorKind::Syntax, pos, message: message.into(), expected }
    }

    pub fn binding(pos: Pos, message: impl Into<String>) -> Self {
        ParseError { kind: ErrorKind::Binding, pos, message: message.into(), expected: BTreeSet::new() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} error: {}", self.pos, self.kind, self.message)?;
        if !self.expected.is_empty() {
            let list: Vec<&str> = self.expected.iter().map(String::as_str).collect();
            write!(f, "; expected one of {}", list.join(", "))?;
        }
        Ok(())
    }
}
