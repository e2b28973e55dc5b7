//! Model, parser and analyses for STPA hazard analyses.
//!
//! A model is written in the line-oriented `.stpa` format (see [`dsl`]),
//! parsed and resolved into an [`StpaModel`], analysed with [`analysis`] and
//! [`causal`], and rendered with [`report`].

pub mod analysis;
pub mod causal;
pub mod corpus;
pub mod diagnostic;
pub mod dsl;
pub mod model;
pub mod report;
pub mod resolve;

pub use diagnostic::{Diagnostic, Severity, SourceSpan};
pub use dsl::{parse, parse_str, serialize, SourceFile};
pub use model::*;
pub use resolve::resolve;
