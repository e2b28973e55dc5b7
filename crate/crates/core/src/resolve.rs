//! Reference resolution and structural invariants of an [`StpaModel`].

use std::collections::HashMap;

use crate::diagnostic::{Diagnostic, SourceSpan};
use crate::model::{DeclKind, EdgeKind, EntityKind, Identifier, StpaModel};

/// Returns one diagnostic per dangling reference, duplicate id or broken
/// invariant. The list is empty iff the model is internally consistent.
pub fn resolve(model: &StpaModel) -> Vec<Diagnostic> {
    let mut r = Resolver {
        model,
        diags: Vec::new(),
    };
    r.ids();
    r.losses();
    r.hazards();
    r.constraints();
    r.entities();
    r.edges();
    r.variables();
    r.ucas();
    r.causal_factors();
    r.controller_constraints();
    r.diags
}

struct Resolver<'a> {
    model: &'a StpaModel,
    diags: Vec<Diagnostic>,
}

impl Resolver<'_> {
    fn span(&self, kind: DeclKind, index: usize) -> SourceSpan {
        self.model.span(kind, index)
    }

    fn error(&mut self, rule: &str, message: String, kind: DeclKind, index: usize) {
        let span = self.span(kind, index);
        self.diags.push(Diagnostic::error(rule, message, span));
    }

    fn ids(&mut self) {
        for kind in DeclKind::ALL {
            let ids = self.model.ids(kind);
            let mut first: HashMap<&str, usize> = HashMap::new();
            for (i, id) in ids.iter().enumerate() {
                if !id.is_well_formed() {
                    self.error(
                        "model/malformed-id",
                        format!("malformed id {id:?}: use letters, digits, '-' or '_'"),
                        kind,
                        i,
                    );
                }
                if let Some(&j) = first.get(id.as_str()) {
                    let d = Diagnostic::error("model/duplicate-id", format!("duplicate id {id}"), self.span(kind, i))
                        .with_related(format!("{id} first declared here"), self.span(kind, j));
                    self.diags.push(d);
                } else {
                    first.insert(id.as_str(), i);
                }
            }
        }
    }

    fn require(&mut self, exists: bool, target: DeclKind, id: &Identifier, kind: DeclKind, index: usize) {
        if !exists {
            self.error(
                "model/unresolved-reference",
                format!("unresolved {} {id}", target.noun()),
                kind,
                index,
            );
        }
    }

    fn non_empty(&mut self, text: &str, what: &str, kind: DeclKind, index: usize, owner: &Identifier) {
        if text.trim().is_empty() {
            self.error(
                "model/empty-text",
                format!("{} {owner} has an empty {what}", kind.noun()),
                kind,
                index,
            );
        }
    }

    fn losses(&mut self) {
        for (i, loss) in self.model.losses.iter().enumerate() {
            self.non_empty(&loss.description, "description", DeclKind::Loss, i, &loss.id);
        }
    }

    fn hazards(&mut self) {
        let m = self.model;
        for (i, h) in m.hazards.iter().enumerate() {
            if h.leads_to.is_empty() {
                self.error(
                    "model/empty-list",
                    format!("hazard {} must reference at least one loss", h.id),
                    DeclKind::Hazard,
                    i,
                );
            }
            for l in &h.leads_to {
                self.require(m.loss(l.as_str()).is_some(), DeclKind::Loss, l, DeclKind::Hazard, i);
            }
        }
    }

    fn constraints(&mut self) {
        let m = self.model;
        for (i, c) in m.constraints.iter().enumerate() {
            if c.mitigates.is_empty() {
                self.error(
                    "model/empty-list",
                    format!("system constraint {} must mitigate at least one hazard", c.id),
                    DeclKind::Constraint,
                    i,
                );
            }
            for h in &c.mitigates {
                self.require(
                    m.hazard(h.as_str()).is_some(),
                    DeclKind::Hazard,
                    h,
                    DeclKind::Constraint,
                    i,
                );
            }
        }
    }

    fn entities(&mut self) {
        for (i, e) in self.model.entities.iter().enumerate() {
            let expected = e.kind != EntityKind::Environment;
            if e.in_system_boundary != expected {
                self.error(
                    "model/system-boundary",
                    format!(
                        "entity {} must be {} the system boundary",
                        e.id,
                        if expected { "inside" } else { "outside" }
                    ),
                    DeclKind::Entity,
                    i,
                );
            }
        }
    }

    fn edges(&mut self) {
        let m = self.model;
        for (i, e) in m.edges.iter().enumerate() {
            if e.source == e.target {
                self.error(
                    "model/self-loop",
                    format!("edge {} has the same source and target {}", e.id, e.source),
                    DeclKind::Edge,
                    i,
                );
            }
            for end in [&e.source, &e.target] {
                self.require(
                    m.entity(end.as_str()).is_some(),
                    DeclKind::Entity,
                    end,
                    DeclKind::Edge,
                    i,
                );
            }
            for v in &e.via {
                match m.entity(v.as_str()) {
                    None => self.require(false, DeclKind::Entity, v, DeclKind::Edge, i),
                    Some(ent) if !matches!(ent.kind, EntityKind::Sensor | EntityKind::Actuator) => self.error(
                        "model/via-kind",
                        format!(
                            "edge {} passes through {}, which is neither a sensor nor an actuator",
                            e.id, v
                        ),
                        DeclKind::Edge,
                        i,
                    ),
                    Some(_) => {}
                }
            }
        }
    }

    fn variables(&mut self) {
        let m = self.model;
        for (i, v) in m.variables.iter().enumerate() {
            match m.entity(v.owner.as_str()) {
                None => self.require(false, DeclKind::Entity, &v.owner, DeclKind::Variable, i),
                Some(owner) if owner.kind != EntityKind::Controller => self.error(
                    "model/variable-owner",
                    format!("variable {} is owned by {}, which is not a controller", v.id, v.owner),
                    DeclKind::Variable,
                    i,
                ),
                Some(_) => {}
            }
            let mut seen: Vec<&str> = Vec::new();
            for value in &v.values {
                if seen.contains(&value.as_str()) {
                    self.error(
                        "model/variable-domain",
                        format!("variable {} lists value {value:?} twice", v.id),
                        DeclKind::Variable,
                        i,
                    );
                } else {
                    seen.push(value);
                }
            }
            if seen.len() < 2 {
                self.error(
                    "model/variable-domain",
                    format!("variable {} needs at least two distinct values", v.id),
                    DeclKind::Variable,
                    i,
                );
            }
        }
    }

    fn ucas(&mut self) {
        let m = self.model;
        for (i, u) in m.ucas.iter().enumerate() {
            match m.edge(u.action.as_str()) {
                None => self.require(false, DeclKind::Edge, &u.action, DeclKind::Uca, i),
                Some(edge) if edge.kind != EdgeKind::ControlAction => self.error(
                    "model/action-kind",
                    format!(
                        "{} refers to {}, which is a feedback edge, not a control action",
                        u.id, u.action
                    ),
                    DeclKind::Uca,
                    i,
                ),
                Some(edge) if edge.source != u.source_controller => self.error(
                    "model/controller-mismatch",
                    format!(
                        "{} is attributed to {} but action {} is issued by {}",
                        u.id, u.source_controller, u.action, edge.source
                    ),
                    DeclKind::Uca,
                    i,
                ),
                Some(_) => {}
            }
            if let Err(e) = u.guide.check() {
                self.error("model/illegal-qualifier", format!("{}: {e}", u.id), DeclKind::Uca, i);
            }
            for (var, value) in u.context.iter() {
                match m.variable(var.as_str()) {
                    None => self.require(false, DeclKind::Variable, var, DeclKind::Uca, i),
                    Some(v) => {
                        if v.owner != u.source_controller {
                            self.error(
                                "model/context-variable",
                                format!(
                                    "{} uses variable {var} of {}, not of its controller {}",
                                    u.id, v.owner, u.source_controller
                                ),
                                DeclKind::Uca,
                                i,
                            );
                        }
                        if !v.has_value(value) {
                            self.error(
                                "model/context-value",
                                format!("{}: value {value:?} is not in the domain of variable {var}", u.id),
                                DeclKind::Uca,
                                i,
                            );
                        }
                    }
                }
            }
            if u.hazards.is_empty() {
                self.error(
                    "model/empty-list",
                    format!("{} must reference at least one hazard", u.id),
                    DeclKind::Uca,
                    i,
                );
            }
            for h in &u.hazards {
                self.require(m.hazard(h.as_str()).is_some(), DeclKind::Hazard, h, DeclKind::Uca, i);
            }
        }
    }

    fn causal_factors(&mut self) {
        let m = self.model;
        for (i, cf) in m.causal_factors.iter().enumerate() {
            if cf.ucas.is_empty() {
                self.error(
                    "model/empty-list",
                    format!("{} must reference at least one unsafe control action", cf.id),
                    DeclKind::CausalFactor,
                    i,
                );
            }
            for u in &cf.ucas {
                self.require(m.uca(u.as_str()).is_some(), DeclKind::Uca, u, DeclKind::CausalFactor, i);
            }
            let loc = cf.located_at.as_str();
            if m.entity(loc).is_none() && m.edge(loc).is_none() {
                self.error(
                    "model/unresolved-reference",
                    format!("unresolved entity or edge {loc}"),
                    DeclKind::CausalFactor,
                    i,
                );
            }
        }
    }

    fn controller_constraints(&mut self) {
        let m = self.model;
        for (i, c) in m.controller_constraints.iter().enumerate() {
            self.require(
                m.uca(c.derived_from.as_str()).is_some(),
                DeclKind::Uca,
                &c.derived_from,
                DeclKind::ControllerConstraint,
                i,
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Hazard, Loss};

    fn loss(id: &str) -> Loss {
        Loss {
            id: id.into(),
            description: "Loss of life".into(),
        }
    }

    #[test]
    fn empty_model_resolves() {
        assert!(resolve(&StpaModel::new()).is_empty());
    }

    #[test]
    fn dangling_loss_reference() {
        let mut m = StpaModel::new();
        m.losses.push(loss("L-1"));
        m.hazards.push(Hazard {
            id: "H-9".into(),
            description: "x".into(),
            leads_to: vec!["L-7".into()],
        });
        let diags = resolve(&m);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].message, "unresolved loss L-7");
        assert!(diags[0].is_error());
    }

    #[test]
    fn duplicate_loss_id() {
        let mut m = StpaModel::new();
        m.losses.push(loss("L-1"));
        m.losses.push(loss("L-1"));
        let diags = resolve(&m);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].message, "duplicate id L-1");
        assert_eq!(diags[0].rule, "model/duplicate-id");
    }

    #[test]
    fn same_id_in_different_kinds_is_fine() {
        let mut m = StpaModel::new();
        m.losses.push(loss("X"));
        m.hazards.push(Hazard {
            id: "X".into(),
            description: "h".into(),
            leads_to: vec!["X".into()],
        });
        assert!(resolve(&m).is_empty());
    }

    #[test]
    fn ids_are_case_sensitive() {
        let mut m = StpaModel::new();
        m.losses.push(loss("L-1"));
        m.hazards.push(Hazard {
            id: "H-1".into(),
            description: "h".into(),
            leads_to: vec!["l-1".into()],
        });
        assert_eq!(resolve(&m)[0].message, "unresolved loss l-1");
    }
}
