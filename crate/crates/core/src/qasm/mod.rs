//! OpenQASM 2.0 front end (lexer, parser, lowering) and emitter.

mod emit;
mod lexer;
mod lower;
mod parser;

use std::fmt;

pub use emit::emit;
pub use lexer::{tokenize, Token, TokenKind};
pub use lower::{lower, DEFAULT_CIRCUIT_NAME};
pub use parser::{
    parse, parse_param, Argument, Declaration, Include, Item, Program, RegisterKind, Statement,
    StatementKind,
};

use crate::circuit::Circuit;
use crate::diagnostics::ErrorCode;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub code: ErrorCode,
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl ParseDiagnostic {
    pub fn new(code: ErrorCode, message: impl Into<String>, loc: Location) -> Self {
        Self {
            code,
            message: message.into(),
            line: loc.line,
            column: loc.column,
        }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.column, self.code, self.message)
    }
}

impl std::error::Error for ParseDiagnostic {}

/// `parse` followed by `lower`.
pub fn parse_circuit(text: &str) -> Result<Circuit, Vec<ParseDiagnostic>> {
    lower(&parse(text)?)
}
