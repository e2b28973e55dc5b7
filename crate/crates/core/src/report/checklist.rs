use std::fmt::Write;

use crate::causal::ChecklistItem;
use crate::model::{StpaModel, UnsafeControlAction};
use crate::report::md_escape;

/// Checklist of one UCA as a Markdown table. The last column names the
/// declared causal factors with the same category and location.
pub fn render_checklist(model: &StpaModel, uca: &UnsafeControlAction, items: &[ChecklistItem]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "## Causal-factor checklist: {}\n", uca.id);
    let _ = writeln!(out, "{}\n", md_escape(&uca.description));
    out.push_str("| Category | Element | Prompt | Declared |\n|---|---|---|---|\n");
    for item in items {
        let declared: Vec<&str> = model
            .causal_factors
            .iter()
            .filter(|cf| cf.category == item.category && cf.located_at == item.located_at && cf.ucas.contains(&uca.id))
            .map(|cf| cf.id.as_str())
            .collect();
        let _ = write!(
            out,
            "| {} | {} | {} |",
            item.category,
            md_escape(model.entity_label(item.located_at.as_str())),
            md_escape(&item.prompt),
        );
        if declared.is_empty() {
            out.push_str(" |\n");
        } else {
            let _ = writeln!(out, " {} |", declared.join(", "));
        }
    }
    out
}
