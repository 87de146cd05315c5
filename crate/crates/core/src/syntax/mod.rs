//! The `.deon` text format: formulas, problem files and model output.

mod lexer;
mod model_json;
mod parser;
mod printer;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use model_json::{
    model_from_json, model_from_json_value, model_to_json, model_to_json_value, model_to_text, print_model,
    ModelFormat, ModelJsonError,
};
pub use parser::{parse_formula, parse_problem};
pub use printer::{print_formula, print_problem};

/// Verdict tags a query may carry after `expect`.
pub const EXPECT_TAGS: [&str; 6] =
    ["ModelFound", "NoModel", "Countermodel", "BoundedValid", "Proof", "Refuted"];

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SourcePos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Whether the text is malformed or only refers outside the problem's scope.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    #[default]
    Syntax,
    /// Undeclared names, operators outside the theory, duplicate labels.
    IllFormed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub pos: SourcePos,
    pub message: String,
    pub expected: Option<Vec<String>>,
    #[serde(default)]
    pub kind: DiagnosticKind,
}

impl Diagnostic {
    pub fn new(pos: SourcePos, message: String) -> Self {
        Diagnostic { pos, message, expected: None, kind: DiagnosticKind::Syntax }
    }

    pub fn ill_formed(pos: SourcePos, message: String) -> Self {
        Diagnostic { kind: DiagnosticKind::IllFormed, ..Diagnostic::new(pos, message) }
    }

    pub fn with_expected(mut self, expected: Vec<String>) -> Self {
        self.expected = Some(expected);
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for Diagnostic {}
