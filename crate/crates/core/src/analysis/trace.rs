use std::collections::HashSet;

use crate::diagnostic::Diagnostic;
use crate::model::{DeclKind, EdgeKind, EntityKind, StpaModel};

/// Traceability gaps between losses, hazards, constraints, UCAs and causal
/// factors. Assumes the model resolves.
pub fn trace_closure(model: &StpaModel) -> Vec<Diagnostic> {
    let mut diags = Vec::new();

    let reached_losses: HashSet<&str> = model
        .hazards
        .iter()
        .flat_map(|h| h.leads_to.iter().map(|l| l.as_str()))
        .collect();
    for (i, loss) in model.losses.iter().enumerate() {
        if !reached_losses.contains(loss.id.as_str()) {
            diags.push(Diagnostic::warning(
                "trace/unreachable-loss",
                format!("loss {} unreachable: no hazard leads to it", loss.id),
                model.span(DeclKind::Loss, i),
            ));
        }
    }

    let cited_hazards: HashSet<&str> = model
        .ucas
        .iter()
        .flat_map(|u| u.hazards.iter().map(|h| h.as_str()))
        .collect();
    for (i, h) in model.hazards.iter().enumerate() {
        if !cited_hazards.contains(h.id.as_str()) {
            diags.push(Diagnostic::warning(
                "trace/orphan-hazard",
                format!("orphan hazard {}: no unsafe control action leads to it", h.id),
                model.span(DeclKind::Hazard, i),
            ));
        }
    }

    for (i, c) in model.constraints.iter().enumerate() {
        if !c.mitigates.iter().any(|h| cited_hazards.contains(h.as_str())) {
            diags.push(Diagnostic::warning(
                "trace/unanchored-constraint",
                format!(
                    "system constraint {} mitigates no hazard that an unsafe control action leads to",
                    c.id
                ),
                model.span(DeclKind::Constraint, i),
            ));
        }
    }

    for (i, e) in model.edges.iter().enumerate() {
        let from_controller = model
            .entity(e.source.as_str())
            .is_some_and(|s| s.kind == EntityKind::Controller);
        if e.kind == EdgeKind::ControlAction && from_controller && model.ucas_for_action(e.id.as_str()).next().is_none()
        {
            diags.push(Diagnostic::info(
                "trace/action-without-uca",
                format!(
                    "control action {} of {} has no unsafe control actions yet",
                    e.id, e.source
                ),
                model.span(DeclKind::Edge, i),
            ));
        }
    }

    let explained: HashSet<&str> = model
        .causal_factors
        .iter()
        .flat_map(|cf| cf.ucas.iter().map(|u| u.as_str()))
        .collect();
    for (i, u) in model.ucas.iter().enumerate() {
        if !explained.contains(u.id.as_str()) {
            diags.push(Diagnostic::info(
                "trace/uca-without-cf",
                format!("{} has no causal factors", u.id),
                model.span(DeclKind::Uca, i),
            ));
        }
    }

    for (i, cf) in model.causal_factors.iter().enumerate() {
        for uca_id in &cf.ucas {
            let Some(uca) = model.uca(uca_id.as_str()) else {
                continue;
            };
            let controller = &uca.source_controller;
            let mismatch = if let Some(ent) = model.entity(cf.located_at.as_str()) {
                cf.category.is_controller_internal() && ent.kind == EntityKind::Controller && ent.id != *controller
            } else if let Some(edge) = model.edge(cf.located_at.as_str()) {
                edge.kind == EdgeKind::ControlAction && edge.source != *controller
            } else {
                false
            };
            if mismatch {
                diags.push(Diagnostic::error(
                    "trace/cf-controller-mismatch",
                    format!(
                        "{} ({}) is located at {}, but {} is issued by controller {}",
                        cf.id, cf.category, cf.located_at, uca_id, controller
                    ),
                    model.span(DeclKind::CausalFactor, i),
                ));
            }
        }
    }

    diags
}
