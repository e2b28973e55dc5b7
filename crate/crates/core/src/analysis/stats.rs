use indexmap::IndexMap;
use serde::Serialize;

use crate::model::{CfCategory, DeclKind, EdgeKind, EntityKind, GuideCategory, Identifier, StpaModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionStats {
    pub action: Identifier,
    pub guide_counts: IndexMap<String, usize>,
}

/// Declaration counts and breakdowns of a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub losses: usize,
    pub hazards: usize,
    pub constraints: usize,
    pub entities: usize,
    pub edges: usize,
    pub variables: usize,
    pub ucas: usize,
    pub causal_factors: usize,
    pub controller_constraints: usize,
    pub entities_by_kind: IndexMap<String, usize>,
    pub edges_by_kind: IndexMap<String, usize>,
    pub guide_counts: IndexMap<String, usize>,
    /// Only actions with at least one UCA, in declaration order.
    pub actions: Vec<ActionStats>,
    pub ucas_per_hazard: IndexMap<String, usize>,
    pub cfs_per_category: IndexMap<String, usize>,
}

impl Stats {
    pub fn guide_count(&self, category: GuideCategory) -> usize {
        self.guide_counts[category.keyword()]
    }

    pub fn action(&self, id: &str) -> Option<&ActionStats> {
        self.actions.iter().find(|a| a.action == id)
    }
}

fn guide_counts<'a>(ucas: impl Iterator<Item = &'a crate::model::UnsafeControlAction>) -> IndexMap<String, usize> {
    let mut counts: IndexMap<String, usize> = GuideCategory::ALL.iter().map(|c| (c.keyword().to_owned(), 0)).collect();
    for u in ucas {
        counts[u.guide.category.keyword()] += 1;
    }
    counts
}

pub fn stats(model: &StpaModel) -> Stats {
    let entities_by_kind = EntityKind::ALL
        .iter()
        .map(|k| {
            (
                k.keyword().to_owned(),
                model.entities.iter().filter(|e| e.kind == *k).count(),
            )
        })
        .collect();
    let edges_by_kind = [EdgeKind::ControlAction, EdgeKind::Feedback]
        .iter()
        .map(|k| {
            (
                k.keyword().to_owned(),
                model.edges.iter().filter(|e| e.kind == *k).count(),
            )
        })
        .collect();
    let actions = model
        .control_actions()
        .filter(|e| model.ucas_for_action(e.id.as_str()).next().is_some())
        .map(|e| ActionStats {
            action: e.id.clone(),
            guide_counts: guide_counts(model.ucas_for_action(e.id.as_str())),
        })
        .collect();
    let ucas_per_hazard = model
        .hazards
        .iter()
        .map(|h| {
            let n = model.ucas.iter().filter(|u| u.hazards.contains(&h.id)).count();
            (h.id.to_string(), n)
        })
        .collect();
    let cfs_per_category = CfCategory::ALL
        .iter()
        .map(|c| {
            let n = model.causal_factors.iter().filter(|cf| cf.category == *c).count();
            (c.keyword().to_owned(), n)
        })
        .collect();
    Stats {
        losses: model.count(DeclKind::Loss),
        hazards: model.count(DeclKind::Hazard),
        constraints: model.count(DeclKind::Constraint),
        entities: model.count(DeclKind::Entity),
        edges: model.count(DeclKind::Edge),
        variables: model.count(DeclKind::Variable),
        ucas: model.count(DeclKind::Uca),
        causal_factors: model.count(DeclKind::CausalFactor),
        controller_constraints: model.count(DeclKind::ControllerConstraint),
        entities_by_kind,
        edges_by_kind,
        guide_counts: guide_counts(model.ucas.iter()),
        actions,
        ucas_per_hazard,
        cfs_per_category,
    }
}
