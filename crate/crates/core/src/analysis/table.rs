use serde::Serialize;

use crate::analysis::contexts::{context_count, enumerate_contexts};
use crate::analysis::AnalysisError;
use crate::model::{Context, EdgeKind, EntityKind, GuideCategory, Identifier, ProcessModelVariable, StpaModel};

/// Rows above which a table is refused unless the limit is raised.
pub const DEFAULT_MAX_ROWS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableOptions {
    pub max_rows: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            max_rows: DEFAULT_MAX_ROWS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Marking {
    Unsafe(Vec<Identifier>),
    Unmarked,
}

impl Marking {
    pub fn is_unsafe(&self) -> bool {
        matches!(self, Marking::Unsafe(_))
    }

    pub fn ucas(&self) -> &[Identifier] {
        match self {
            Marking::Unsafe(ids) => ids,
            Marking::Unmarked => &[],
        }
    }
}

/// One row per concrete context of a controller's process model, with the
/// unsafe control actions of one action marked per guide-word category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContextTable {
    pub controller: Identifier,
    pub action: Identifier,
    pub variables: Vec<ProcessModelVariable>,
    pub rows: Vec<Context>,
    /// `markings[row][category.index()]`.
    pub markings: Vec<[Marking; 4]>,
}

impl ContextTable {
    pub fn marking(&self, row: usize, category: GuideCategory) -> &Marking {
        &self.markings[row][category.index()]
    }

    pub fn row_index(&self, concrete: &Context) -> Option<usize> {
        self.rows.iter().position(|r| r == concrete)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

pub fn build_context_table(
    model: &StpaModel,
    controller: &str,
    action: &str,
    options: TableOptions,
) -> Result<ContextTable, AnalysisError> {
    let ctrl = model
        .entity(controller)
        .filter(|e| e.kind == EntityKind::Controller)
        .ok_or_else(|| AnalysisError::UnknownController(controller.into()))?;
    let edge = model
        .edge(action)
        .filter(|e| e.kind == EdgeKind::ControlAction)
        .ok_or_else(|| AnalysisError::UnknownAction(action.into()))?;
    if edge.source != ctrl.id {
        return Err(AnalysisError::ActionNotFromController {
            action: edge.id.clone(),
            controller: ctrl.id.clone(),
        });
    }
    let variables: Vec<ProcessModelVariable> = model.variables_of(controller).cloned().collect();
    if variables.is_empty() {
        return Err(AnalysisError::NoProcessModel(ctrl.id.clone()));
    }
    let count = context_count(&variables).unwrap_or(u128::MAX);
    if count > options.max_rows as u128 {
        return Err(AnalysisError::TooManyRows {
            rows: count,
            limit: options.max_rows,
        });
    }

    let rows = enumerate_contexts(&variables)?;
    let ucas: Vec<_> = model.ucas_for_action(action).collect();
    let mut markings = Vec::with_capacity(rows.len());
    for row in &rows {
        let mut marks: [Marking; 4] = std::array::from_fn(|_| Marking::Unmarked);
        for cat in GuideCategory::ALL {
            let mut hits = Vec::new();
            for u in ucas.iter().filter(|u| u.guide.category == cat) {
                if u.context.matches(row)? {
                    hits.push(u.id.clone());
                }
            }
            if !hits.is_empty() {
                marks[cat.index()] = Marking::Unsafe(hits);
            }
        }
        markings.push(marks);
    }
    Ok(ContextTable {
        controller: ctrl.id.clone(),
        action: edge.id.clone(),
        variables,
        rows,
        markings,
    })
}

/// Rows left unmarked under `category`, in table order.
pub fn coverage_gaps(table: &ContextTable, category: GuideCategory) -> Vec<Context> {
    table
        .rows
        .iter()
        .zip(&table.markings)
        .filter(|(_, m)| !m[category.index()].is_unsafe())
        .map(|(r, _)| r.clone())
        .collect()
}
