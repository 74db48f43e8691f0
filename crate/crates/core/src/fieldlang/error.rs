use std::fmt;

use thiserror::Error;

use crate::symcore::SymError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ParseError {
    #[error("{pos}: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("{pos}: duplicate symbol `{name}`")]
    DuplicateSymbol { pos: Pos, name: String },
    #[error("{pos}: unknown declaration kind `{kind}`")]
    UnknownKind { pos: Pos, kind: String },
    #[error("{pos}: unknown symbol `{name}`")]
    UnknownSymbol { pos: Pos, name: String },
    #[error("{pos}: `{name}` expects {expected} argument(s), got {got}")]
    Arity {
        pos: Pos,
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("{pos}: {message}")]
    InvalidField { pos: Pos, message: String },
    #[error("{pos}: {source}")]
    Math {
        pos: Pos,
        #[source]
        source: SymError,
    },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::DuplicateSymbol { pos, .. }
            | ParseError::UnknownKind { pos, .. }
            | ParseError::UnknownSymbol { pos, .. }
            | ParseError::Arity { pos, .. }
            | ParseError::InvalidField { pos, .. }
            | ParseError::Math { pos, .. } => *pos,
        }
    }
}
