use std::fmt::Write;

use crate::analysis::Stats;

pub fn render_summary(stats: &Stats) -> String {
    let mut out = String::from("## Model summary\n\n| Declaration | Count |\n|---|---|\n");
    let counts = [
        ("losses", stats.losses),
        ("hazards", stats.hazards),
        ("system constraints", stats.constraints),
        ("entities", stats.entities),
        ("edges", stats.edges),
        ("process-model variables", stats.variables),
        ("unsafe control actions", stats.ucas),
        ("causal factors", stats.causal_factors),
        ("controller constraints", stats.controller_constraints),
    ];
    for (name, n) in counts {
        let _ = writeln!(out, "| {name} | {n} |");
    }

    out.push_str("\n## Unsafe control actions by guide word\n\n| Action |");
    for key in stats.guide_counts.keys() {
        let _ = write!(out, " {key} |");
    }
    out.push_str(" total |\n|---|");
    out.push_str(&"---|".repeat(stats.guide_counts.len() + 1));
    out.push('\n');
    let mut row = |name: &str, counts: &indexmap::IndexMap<String, usize>| {
        let _ = write!(out, "| {name} |");
        for n in counts.values() {
            let _ = write!(out, " {n} |");
        }
        let _ = writeln!(out, " {} |", counts.values().sum::<usize>());
    };
    for a in &stats.actions {
        row(a.action.as_str(), &a.guide_counts);
    }
    row("all", &stats.guide_counts);

    out.push_str("\n## Unsafe control actions per hazard\n\n| Hazard | UCAs |\n|---|---|\n");
    for (h, n) in &stats.ucas_per_hazard {
        let _ = writeln!(out, "| {h} | {n} |");
    }

    out.push_str("\n## Causal factors per category\n\n| Category | Count |\n|---|---|\n");
    for (c, n) in &stats.cfs_per_category {
        let _ = writeln!(out, "| {c} | {n} |");
    }
    out
}
