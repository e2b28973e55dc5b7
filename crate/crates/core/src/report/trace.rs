use std::fmt::Write;

use crate::model::{Identifier, StpaModel};

fn matrix(
    out: &mut String,
    title: &str,
    rows: &[&Identifier],
    cols: &[&Identifier],
    linked: impl Fn(&str, &str) -> bool,
) {
    let _ = writeln!(out, "## {title}\n");
    out.push_str("| |");
    for c in cols {
        let _ = write!(out, " {c} |");
    }
    out.push('\n');
    out.push_str(&"|---".repeat(cols.len() + 1));
    out.push_str("|\n");
    for r in rows {
        let _ = write!(out, "| {r} |");
        for c in cols {
            out.push_str(if linked(r.as_str(), c.as_str()) { " x |" } else { " |" });
        }
        out.push('\n');
    }
}

/// Traceability matrices in Markdown: hazards against losses, hazards
/// against UCAs, causal factors against UCAs and hazards against system
/// constraints. A cell holds `x` when the two declarations are linked.
pub fn render_trace_matrix(model: &StpaModel) -> String {
    let losses: Vec<&Identifier> = model.losses.iter().map(|l| &l.id).collect();
    let hazards: Vec<&Identifier> = model.hazards.iter().map(|h| &h.id).collect();
    let ucas: Vec<&Identifier> = model.ucas.iter().map(|u| &u.id).collect();
    let cfs: Vec<&Identifier> = model.causal_factors.iter().map(|c| &c.id).collect();
    let constraints: Vec<&Identifier> = model.constraints.iter().map(|c| &c.id).collect();

    let mut out = String::new();
    matrix(&mut out, "Hazards to losses", &hazards, &losses, |h, l| {
        model.hazard(h).is_some_and(|h| h.leads_to.iter().any(|x| x == l))
    });
    out.push('\n');
    matrix(
        &mut out,
        "Hazards to unsafe control actions",
        &hazards,
        &ucas,
        |h, u| model.uca(u).is_some_and(|u| u.hazards.iter().any(|x| x == h)),
    );
    out.push('\n');
    matrix(
        &mut out,
        "Causal factors to unsafe control actions",
        &cfs,
        &ucas,
        |c, u| model.causal_factor(c).is_some_and(|c| c.ucas.iter().any(|x| x == u)),
    );
    out.push('\n');
    matrix(
        &mut out,
        "Hazards to system constraints",
        &hazards,
        &constraints,
        |h, c| model.constraint(c).is_some_and(|c| c.mitigates.iter().any(|x| x == h)),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_str;

    #[test]
    fn empty_model_has_four_empty_matrices() {
        let text = render_trace_matrix(&StpaModel::new());
        assert_eq!(text.matches("## ").count(), 4);
        assert_eq!(text.matches("| |\n|---|\n").count(), 4);
    }

    #[test]
    fn links_are_marked() {
        let src = "loss L-1 \"a\"\nloss L-2 \"b\"\nhazard H-1 \"h\" leads_to [L-2]\n\
                   constraint SC-1 \"c\" mitigates [H-1]";
        let (m, d) = parse_str("t.stpa", src);
        assert!(d.is_empty(), "{d:?}");
        let text = render_trace_matrix(&m);
        assert!(text.contains("| | L-1 | L-2 |\n|---|---|---|\n| H-1 | | x |\n"));
        assert!(text.contains("| | SC-1 |\n|---|---|\n| H-1 | x |\n"));
    }
}
