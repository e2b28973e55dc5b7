use serde::Serialize;

use crate::causal::CausalError;
use crate::diagnostic::Diagnostic;
use crate::model::{DeclKind, Edge, EntityKind, Identifier, StpaModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    /// From an information origin up to the controller that issued the UCA.
    FeedbackPath,
    /// From the controller down to the controlled process.
    ControlPath,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathWalk {
    pub uca: Identifier,
    pub direction: Direction,
    /// Entities in travel order, via elements included.
    pub elements: Vec<Identifier>,
    /// Edges traversed, in travel order.
    pub edges: Vec<Identifier>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Walks {
    pub walks: Vec<PathWalk>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Walks {
    pub fn feedback(&self) -> impl Iterator<Item = &PathWalk> {
        self.walks.iter().filter(|w| w.direction == Direction::FeedbackPath)
    }

    pub fn control(&self) -> impl Iterator<Item = &PathWalk> {
        self.walks.iter().filter(|w| w.direction == Direction::ControlPath)
    }

    pub fn contains_entity(&self, id: &str) -> bool {
        self.walks.iter().any(|w| w.elements.iter().any(|e| e == id))
    }

    pub fn contains_edge(&self, id: &str) -> bool {
        self.walks.iter().any(|w| w.edges.iter().any(|e| e == id))
    }
}

fn is_controller(model: &StpaModel, id: &str) -> bool {
    model.entity(id).is_some_and(|e| e.kind == EntityKind::Controller)
}

/// Feedback and control paths relevant to a UCA.
///
/// Feedback walks run backwards from the UCA's controller along feedback
/// edges, continuing through intermediate controllers (such as an interface
/// that relays sensor data) until an entity that is not a controller, or a
/// controller nothing feeds, is reached. Each maximal path is one walk.
/// Control walks start with the UCA's own action edge and continue forwards
/// through intermediate controllers until a non-controller is reached. An
/// entity appears at most once per walk.
pub fn walk_paths(model: &StpaModel, uca: &str) -> Result<Walks, CausalError> {
    let u = model.uca(uca).ok_or_else(|| CausalError::UnknownUca(uca.into()))?;
    let action = model
        .edge(u.action.as_str())
        .ok_or_else(|| CausalError::UnknownAction(u.action.clone()))?;
    let controller = &u.source_controller;
    let mut out = Walks::default();

    let incoming = model.feedback_edges().filter(|e| &e.target == controller).count();
    if incoming == 0 {
        let ctrl_index = model
            .entities
            .iter()
            .position(|e| &e.id == controller)
            .unwrap_or(usize::MAX);
        out.diagnostics.push(Diagnostic::warning(
            "causal/open-loop",
            format!("controller {controller} is open-loop: no feedback reaches it"),
            model.span(DeclKind::Entity, ctrl_index),
        ));
    } else {
        let mut suffix = vec![controller.clone()];
        let mut edges = Vec::new();
        walk_back(model, u.id.clone(), controller, &mut suffix, &mut edges, &mut out.walks);
    }

    let mut prefix = vec![controller.clone()];
    let mut edges = Vec::new();
    walk_forward(model, u.id.clone(), action, &mut prefix, &mut edges, &mut out.walks);
    Ok(out)
}

/// `suffix` holds the path from `node` to the controller, reversed
/// (controller first).
fn walk_back(
    model: &StpaModel,
    uca: Identifier,
    node: &Identifier,
    suffix: &mut Vec<Identifier>,
    edges: &mut Vec<Identifier>,
    out: &mut Vec<PathWalk>,
) {
    let at_start = suffix.len() == 1;
    let continues = at_start || is_controller(model, node.as_str());
    let mut extended = false;
    if continues {
        for e in model.feedback_edges().filter(|e| &e.target == node) {
            let chain: Vec<&Identifier> = std::iter::once(&e.source).chain(e.via.iter()).collect();
            if chain.iter().any(|c| suffix.contains(c)) {
                continue;
            }
            extended = true;
            let mark = suffix.len();
            suffix.extend(chain.iter().rev().map(|c| (*c).clone()));
            edges.push(e.id.clone());
            walk_back(model, uca.clone(), &e.source, suffix, edges, out);
            edges.pop();
            suffix.truncate(mark);
        }
    }
    if !extended && !at_start {
        out.push(PathWalk {
            uca,
            direction: Direction::FeedbackPath,
            elements: suffix.iter().rev().cloned().collect(),
            edges: edges.iter().rev().cloned().collect(),
        });
    }
}

fn walk_forward(
    model: &StpaModel,
    uca: Identifier,
    edge: &Edge,
    prefix: &mut Vec<Identifier>,
    edges: &mut Vec<Identifier>,
    out: &mut Vec<PathWalk>,
) {
    let chain: Vec<&Identifier> = edge.via.iter().chain(std::iter::once(&edge.target)).collect();
    let mark = prefix.len();
    for c in chain {
        if prefix.contains(c) {
            break;
        }
        prefix.push(c.clone());
    }
    edges.push(edge.id.clone());
    let reached = prefix.last().cloned();
    let mut extended = false;
    if let Some(last) = reached.filter(|l| *l == edge.target && is_controller(model, l.as_str())) {
        for next in model.control_actions().filter(|e| e.source == last) {
            if next
                .via
                .iter()
                .chain(std::iter::once(&next.target))
                .any(|c| prefix.contains(c))
            {
                continue;
            }
            extended = true;
            walk_forward(model, uca.clone(), next, prefix, edges, out);
        }
    }
    if !extended {
        out.push(PathWalk {
            uca,
            direction: Direction::ControlPath,
            elements: prefix.clone(),
            edges: edges.clone(),
        });
    }
    edges.pop();
    prefix.truncate(mark);
}
