use std::fmt;

use thiserror::Error;

use crate::wellformed::Violation;

/// Byte range into a source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{}: {message}", self.location())]
pub struct ParseError {
    pub span: SourceSpan,
    /// 1-based line number of `span.start`.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn at(src: &str, span: SourceSpan, message: impl Into<String>) -> Self {
        let start = span.start.min(src.len());
        let line = src[..start].bytes().filter(|&b| b == b'\n').count() + 1;
        ParseError {
            span,
            line,
            message: message.into(),
        }
    }

    fn location(&self) -> String {
        format!("line {} (bytes {})", self.line, self.span)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("pattern is not in OPT normal form")]
    NotInOptNormalForm,

    #[error("pattern is not well-designed ({} violation(s)); first: {}", .0.len(), .0.first().map(|v| v.message.as_str()).unwrap_or(""))]
    NotWellDesigned(Vec<Violation>),

    #[error("unsupported pattern node: {0}")]
    UnsupportedNode(&'static str),

    #[error("invalid RDF triple: {0}")]
    InvalidData(String),

    #[error("intermediate result exceeded {limit} mappings")]
    ResourceLimit { limit: usize },

    #[error("shape infeasible: {0}")]
    ShapeInfeasible(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
