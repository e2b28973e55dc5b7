//! Path walks through the control structure, causal-factor checklists and
//! validation of declared causal factors.

mod checklist;
mod validate;
mod walk;

pub use checklist::{checklist, ChecklistItem};
pub use validate::{similarity, validate_cfs, DUPLICATE_SIMILARITY};
pub use walk::{walk_paths, Direction, PathWalk, Walks};

use thiserror::Error;

use crate::model::Identifier;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CausalError {
    #[error("unknown unsafe control action {0}")]
    UnknownUca(Identifier),
    #[error("unknown control action {0}")]
    UnknownAction(Identifier),
}
