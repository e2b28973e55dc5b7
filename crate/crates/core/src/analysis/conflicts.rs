use serde::Serialize;

use crate::analysis::contexts::{expand, intersect};
use crate::analysis::AnalysisError;
use crate::model::{Context, EdgeKind, GuideCategory, Identifier, ProcessModelVariable, StpaModel};

/// Contexts in which an action is flagged unsafe both when withheld
/// (`uca_a`) and when provided (`uca_b`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub action: Identifier,
    pub uca_a: Identifier,
    pub uca_b: Identifier,
    pub shared: Vec<Context>,
}

/// Every NotProvided/ProvidedUnsafe pair on `action` whose contexts overlap,
/// ordered by the natural order of `(uca_a, uca_b)`.
pub fn detect_conflicts(model: &StpaModel, action: &str) -> Result<Vec<Conflict>, AnalysisError> {
    let edge = model
        .edge(action)
        .filter(|e| e.kind == EdgeKind::ControlAction)
        .ok_or_else(|| AnalysisError::UnknownAction(action.into()))?;
    let variables: Vec<ProcessModelVariable> = model.variables_of(edge.source.as_str()).cloned().collect();
    let of = |cat| {
        model
            .ucas_for_action(action)
            .filter(move |u| u.guide.category == cat)
            .collect::<Vec<_>>()
    };
    let withheld = of(GuideCategory::NotProvided);
    let provided = of(GuideCategory::ProvidedUnsafe);

    let mut out = Vec::new();
    for a in &withheld {
        for b in &provided {
            let Some(both) = intersect(&a.context, &b.context) else {
                continue;
            };
            let shared = expand(&both, &variables)?;
            if !shared.is_empty() {
                out.push(Conflict {
                    action: edge.id.clone(),
                    uca_a: a.id.clone(),
                    uca_b: b.id.clone(),
                    shared,
                });
            }
        }
    }
    out.sort_by(|x, y| {
        x.uca_a
            .natural_cmp(&y.uca_a)
            .then_with(|| x.uca_b.natural_cmp(&y.uca_b))
    });
    Ok(out)
}
