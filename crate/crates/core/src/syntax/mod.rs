//! DATR theory source: tokens, sentences, and static checks.
//!
//! Node names start with an uppercase letter; atoms start with a lowercase
//! letter, a digit or `_`. Only the spelled-out notation is accepted.

mod lexer;
mod parser;
mod theory;
mod validate;

use thiserror::Error;

pub use lexer::{tokenize, Pos, Token, TokenKind};
pub use parser::parse_theory;
pub use theory::{Descriptor, Sentence, Theory};
pub use validate::{validate_theory, Diagnostic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{pos}: illegal character {ch:?}")]
    IllegalCharacter { pos: Pos, ch: char },
    #[error("{pos}: expected {expected}, found {found}")]
    Syntax {
        pos: Pos,
        expected: String,
        found: String,
    },
    #[error("duplicate definition of {node}:{path}")]
    DuplicateLhs { node: String, path: String },
    #[error("{pos}: evaluable paths (descriptors inside paths) are not supported")]
    EvaluablePathUnsupported { pos: Pos },
    #[error("{pos}: unsupported DATR notation: {what}")]
    Unsupported { pos: Pos, what: String },
}

impl ParseError {
    pub fn pos(&self) -> Option<Pos> {
        match self {
            ParseError::IllegalCharacter { pos, .. }
            | ParseError::Syntax { pos, .. }
            | ParseError::EvaluablePathUnsupported { pos }
            | ParseError::Unsupported { pos, .. } => Some(*pos),
            ParseError::DuplicateLhs { .. } => None,
        }
    }
}

/// Tokenizes and parses in one step.
pub fn parse_source(source: &str) -> Result<Theory, ParseError> {
    parse_theory(&tokenize(source)?)
}
