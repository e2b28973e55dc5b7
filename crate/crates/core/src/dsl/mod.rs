//! The `.stpa` text format.
//!
//! ```text
//! loss L-1 "Loss of life or injury to people"
//! hazard H-1 "System does not maintain safe distance" leads_to [L-1, L-2]
//! controller Operator "Operator"
//! action BrakeCmd "Brake cmd" from Operator to Interface via [Brakep]
//! variable Motion of Operator "Vehicle motion" {"Stopped", "Moving"}
//! uca UCA-1 action = BrakeCmd guide = not_provided context { Motion = "Moving" } hazards [H-1] "..."
//! cf CF-1 category = mental_model_content at Operator for [UCA-1] "..."
//! ```
//!
//! One declaration per statement, `#` starts a line comment, strings are
//! double-quoted with backslash escapes. Several files are concatenated in
//! the order given and resolved as one model.

mod lexer;
mod parser;
mod serialize;

pub use serialize::{serialize, serialize_file, serialize_unchecked, HEADER};

use crate::diagnostic::{has_errors, Diagnostic};
use crate::model::StpaModel;
use crate::resolve::resolve;

/// A named source text, usually a file path and its contents.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub path: String,
    pub text: String,
}

impl SourceFile {
    pub fn new(path: impl Into<String>, text: impl Into<String>) -> Self {
        SourceFile {
            path: path.into(),
            text: text.into(),
        }
    }
}

/// Parses and resolves `files` as one model.
///
/// Syntax errors are reported with spans and parsing resumes at the next
/// top-level keyword that starts a line. Resolution diagnostics are appended
/// only when there were no syntax errors.
pub fn parse(files: &[SourceFile]) -> (StpaModel, Vec<Diagnostic>) {
    let mut model = StpaModel::new();
    let mut diags = Vec::new();
    for file in files {
        let tokens = lexer::lex(&file.path, &file.text, &mut diags);
        parser::Parser::new(&tokens, &mut model, &mut diags).run();
    }
    model.derive_uca_controllers();
    if !has_errors(&diags) {
        diags.extend(resolve(&model));
    }
    (model, diags)
}

pub fn parse_str(path: &str, text: &str) -> (StpaModel, Vec<Diagnostic>) {
    parse(&[SourceFile::new(path, text)])
}
