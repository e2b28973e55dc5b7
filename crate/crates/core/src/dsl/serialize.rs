use std::fmt::Write;

use crate::diagnostic::Diagnostic;
use crate::model::{DeclKind, Identifier, StpaModel};
use crate::resolve::resolve;

/// First line of every serialized model.
pub const HEADER: &str = "# STPA model (canonical format)";

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn ids(list: &[Identifier]) -> String {
    let parts: Vec<&str> = list.iter().map(Identifier::as_str).collect();
    format!("[{}]", parts.join(", "))
}

fn strings(list: &[String], open: &str, close: &str) -> String {
    let parts: Vec<String> = list.iter().map(|s| quote(s)).collect();
    format!("{open}{}{close}", parts.join(", "))
}

/// Canonical text of a model that resolves cleanly. Refuses, returning the
/// resolution diagnostics, otherwise.
pub fn serialize(model: &StpaModel) -> Result<String, Vec<Diagnostic>> {
    let diags = resolve(model);
    if diags.is_empty() {
        Ok(serialize_unchecked(model))
    } else {
        Err(diags)
    }
}

/// Canonical text without the resolution check. Declarations are grouped by
/// kind and keep their declaration order within a kind.
pub fn serialize_unchecked(model: &StpaModel) -> String {
    serialize_filtered(model, |_, _| true)
}

/// Canonical text of the declarations whose span lies in `file`.
pub fn serialize_file(model: &StpaModel, file: &str) -> String {
    serialize_filtered(model, |kind, i| model.span(kind, i).file == file)
}

fn serialize_filtered(model: &StpaModel, keep: impl Fn(DeclKind, usize) -> bool) -> String {
    let mut groups: Vec<Vec<String>> = Vec::new();
    let mut group = |kind: DeclKind, lines: Vec<String>| {
        let lines: Vec<String> = lines
            .into_iter()
            .enumerate()
            .filter(|(i, _)| keep(kind, *i))
            .map(|(_, l)| l)
            .collect();
        if !lines.is_empty() {
            groups.push(lines);
        }
    };

    group(
        DeclKind::Loss,
        model
            .losses
            .iter()
            .map(|l| format!("loss {} {}", l.id, quote(&l.description)))
            .collect(),
    );
    group(
        DeclKind::Hazard,
        model
            .hazards
            .iter()
            .map(|h| {
                format!(
                    "hazard {} {} leads_to {}",
                    h.id,
                    quote(&h.description),
                    ids(&h.leads_to)
                )
            })
            .collect(),
    );
    group(
        DeclKind::Constraint,
        model
            .constraints
            .iter()
            .map(|c| {
                format!(
                    "constraint {} {} mitigates {}",
                    c.id,
                    quote(&c.description),
                    ids(&c.mitigates)
                )
            })
            .collect(),
    );
    group(
        DeclKind::Entity,
        model
            .entities
            .iter()
            .map(|e| format!("{} {} {}", e.kind.keyword(), e.id, quote(&e.label)))
            .collect(),
    );
    group(
        DeclKind::Edge,
        model
            .edges
            .iter()
            .map(|e| {
                let mut s = format!(
                    "{} {} {} from {} to {}",
                    e.kind.keyword(),
                    e.id,
                    quote(&e.label),
                    e.source,
                    e.target
                );
                if !e.via.is_empty() {
                    write!(s, " via {}", ids(&e.via)).unwrap();
                }
                if !e.signals.is_empty() {
                    write!(s, " signals {}", strings(&e.signals, "[", "]")).unwrap();
                }
                s
            })
            .collect(),
    );
    group(
        DeclKind::Variable,
        model
            .variables
            .iter()
            .map(|v| {
                format!(
                    "variable {} of {} {} {}",
                    v.id,
                    v.owner,
                    quote(&v.label),
                    strings(&v.values, "{", "}")
                )
            })
            .collect(),
    );
    group(
        DeclKind::Uca,
        model
            .ucas
            .iter()
            .map(|u| {
                let mut s = format!(
                    "uca {} action = {} guide = {}",
                    u.id,
                    u.action,
                    u.guide.category.keyword()
                );
                if let Some(q) = u.guide.qualifier {
                    write!(s, " qualifier = {}", q.keyword()).unwrap();
                }
                if !u.context.is_empty() {
                    s.push_str(" context {");
                    for (var, value) in u.context.iter() {
                        write!(s, " {var} = {}", quote(value)).unwrap();
                    }
                    s.push_str(" }");
                }
                write!(s, " hazards {} {}", ids(&u.hazards), quote(&u.description)).unwrap();
                s
            })
            .collect(),
    );
    group(
        DeclKind::CausalFactor,
        model
            .causal_factors
            .iter()
            .map(|cf| {
                format!(
                    "cf {} category = {} at {} for {} {}",
                    cf.id,
                    cf.category.keyword(),
                    cf.located_at,
                    ids(&cf.ucas),
                    quote(&cf.description)
                )
            })
            .collect(),
    );
    group(
        DeclKind::ControllerConstraint,
        model
            .controller_constraints
            .iter()
            .map(|c| {
                format!(
                    "controller_constraint {} from {} {}",
                    c.id,
                    c.derived_from,
                    quote(&c.description)
                )
            })
            .collect(),
    );

    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for g in groups {
        out.push('\n');
        for line in g {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}
