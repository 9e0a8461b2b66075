//! Error types shared across the crate.

use thiserror::Error;

/// Position-annotated syntax error produced by the lexer or parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    /// Tokens that would have been accepted at this point.
    pub expected: Vec<String>,
    /// What was actually seen (`"end of input"` at EOF).
    pub found: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "parse error at {}:{}: expected {}, found {}",
            self.line,
            self.column,
            self.expected.join(" | "),
            self.found
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch in {context}: expected {expected}, got {found}")]
    ArityMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    /// A non-ground tuple was grounded without a declared universe.
    #[error("a declared universe is required to ground non-ground terms")]
    UniverseRequired,

    /// The depth bound was reached while branches were still unexplored, so
    /// the answer table cannot be trusted to be complete.
    #[error("search incomplete: depth bound {depth} reached with unexplored branches")]
    Incomplete { depth: usize },

    #[error("resource limit exceeded: {0}")]
    ResourceExceeded(String),

    #[error("fixpoint variable {name} occurs in a non-monotone position")]
    NonMonotone { name: String },

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("unsupported expression: {0}")]
    UnsupportedExpression(String),

    #[error("unbound identifier: {0}")]
    Unbound(String),

    #[error("invalid program: {0}")]
    InvalidProgram(String),

    #[error("{0}")]
    Parse(ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
