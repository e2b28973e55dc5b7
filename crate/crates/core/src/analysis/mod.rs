//! Context enumeration, context tables, conflict detection, traceability
//! checks and summary statistics.

mod conflicts;
mod contexts;
mod stats;
mod table;
mod trace;

pub use conflicts::{detect_conflicts, Conflict};
pub use contexts::{context_count, enumerate_contexts, expand, intersect};
pub use stats::{stats, ActionStats, Stats};
pub use table::{build_context_table, coverage_gaps, ContextTable, Marking, TableOptions, DEFAULT_MAX_ROWS};
pub use trace::trace_closure;

use thiserror::Error;

use crate::model::{ContextError, Identifier};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error("unknown controller {0}")]
    UnknownController(Identifier),
    #[error("unknown control action {0}")]
    UnknownAction(Identifier),
    #[error("control action {action} is not issued by controller {controller}")]
    ActionNotFromController { action: Identifier, controller: Identifier },
    #[error("controller {0} has no process model")]
    NoProcessModel(Identifier),
    #[error(
        "context table would have {rows} rows, above the limit of {limit}; \
         abstract the process-model variables into fewer values or raise the limit"
    )]
    TooManyRows { rows: u128, limit: usize },
}
