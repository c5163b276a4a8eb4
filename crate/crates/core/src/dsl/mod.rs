//! The `.dflow` pipeline language: lexer, parser and canonical printer.
//!
//! ```text
//! program word_count
//! input lines: list<string>
//! words  = lines.flatMap(l -> split(l, " "))
//! pairs  = words.map(w -> (w, 1))
//! counts = pairs.reduceByKey((a, b) -> a + b)
//! output counts
//! ```

use alloc::string::String;
use core::fmt;

pub use crate::model::SourceSpan;

mod format;
mod lexer;
mod parser;

pub use format::{format_call, format_expr, format_lambda, format_program, format_transformation, format_udf};
pub use parser::{parse_lambda, parse_program, parse_source, parse_type};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticCode {
    Lexical,
    Syntax,
    Type,
    UnknownIdentifier,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::Lexical => "lexical",
            DiagnosticCode::Syntax => "syntax",
            DiagnosticCode::Type => "type",
            DiagnosticCode::UnknownIdentifier => "unknown-identifier",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub message: String,
    pub span: SourceSpan,
}

impl ParseDiagnostic {
    pub fn error(code: DiagnosticCode, message: String, span: SourceSpan) -> Self {
        ParseDiagnostic { severity: Severity::Error, code, message, span }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {sev}[{}]: {}", self.span, self.code.as_str(), self.message)
    }
}
