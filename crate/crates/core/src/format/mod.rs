//! Reading and writing the version 2.0 model file format.
//!
//! A model file has three top-level sections:
//!
//! ```text
//! Version: 2.0
//! Alternatives: &alternatives
//!   OLD:
//!   NEW:
//! Goal:
//!   name: Select Between Old and New Chatbots
//!   preferences:
//!     pairwise:
//!       - [Performance, Humanity, 7]
//!   children:
//!     Performance:
//!       preferences:
//!         pairwise:
//!           - [OLD, NEW, 3]
//!       children: *alternatives
//! ```
//!
//! Ratios such as `1/7` are read as exact fractions. Unknown keys produce
//! warnings; the shape of `pairwise` triplets is strict.

mod read;
mod write;
mod yaml;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use read::{parse_model, parse_model_with_warnings, ParsedModel};
pub use write::serialize_model;

/// 1-based line and column of a diagnostic.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize) -> Self {
        SourceSpan {
            line: line.max(1),
            column: column.max(1),
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParseErrorKind {
    Indentation,
    UnknownKey,
    BadRatio,
    UnresolvedAlias,
    MissingSection,
    BadVersion,
    /// Malformed structure outside the other categories: unterminated flow
    /// sequences, misplaced anchors, non-triplet `pairwise` entries.
    Syntax,
}

impl ParseErrorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ParseErrorKind::Indentation => "INDENTATION",
            ParseErrorKind::UnknownKey => "UNKNOWN_KEY",
            ParseErrorKind::BadRatio => "BAD_RATIO",
            ParseErrorKind::UnresolvedAlias => "UNRESOLVED_ALIAS",
            ParseErrorKind::MissingSection => "MISSING_SECTION",
            ParseErrorKind::BadVersion => "BAD_VERSION",
            ParseErrorKind::Syntax => "SYNTAX",
        }
    }
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A rejection (or, for `UNKNOWN_KEY`, a warning) tied to a source position.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{kind} at {span}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(span: SourceSpan, kind: ParseErrorKind, message: impl Into<String>) -> Self {
        ParseError {
            span,
            kind,
            message: message.into(),
        }
    }
}
