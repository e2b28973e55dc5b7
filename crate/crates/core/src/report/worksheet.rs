use std::fmt::Write;

use crate::model::{GuideCategory, StpaModel, UnsafeControlAction};
use crate::report::{md_escape, ReportError};

fn cell(u: &UnsafeControlAction) -> String {
    let hazards: Vec<&str> = u.hazards.iter().map(|h| h.as_str()).collect();
    md_escape(&format!("{}: {} [{}]", u.id, u.description, hazards.join(", ")))
}

/// UCA worksheet of one control action: a Markdown table with one column per
/// guide-word category and one UCA per cell, in declaration order.
pub fn render_worksheet(model: &StpaModel, action: &str) -> Result<String, ReportError> {
    let edge = model
        .control_actions()
        .find(|e| e.id == action)
        .ok_or_else(|| ReportError::UnknownAction(action.into()))?;
    let columns: Vec<Vec<String>> = GuideCategory::ALL
        .iter()
        .map(|cat| {
            model
                .ucas_for_action(action)
                .filter(|u| u.guide.category == *cat)
                .map(cell)
                .collect()
        })
        .collect();

    let mut out = String::new();
    let _ = writeln!(
        out,
        "## UCA worksheet: {} ({}) issued by {}\n",
        md_escape(&edge.label),
        edge.id,
        md_escape(model.entity_label(edge.source.as_str()))
    );
    let titles: Vec<&str> = GuideCategory::ALL.iter().map(|c| c.title()).collect();
    let _ = writeln!(out, "| {} |", titles.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(titles.len()));
    let depth = columns.iter().map(Vec::len).max().unwrap_or(0);
    if depth == 0 {
        let _ = writeln!(out, "|{}", " |".repeat(titles.len()));
        let _ = writeln!(out, "\nNo unsafe control actions are declared for {}.", edge.id);
        return Ok(out);
    }
    for row in 0..depth {
        out.push('|');
        for column in &columns {
            match column.get(row) {
                Some(text) => {
                    let _ = write!(out, " {text} |");
                }
                None => out.push_str(" |"),
            }
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_str;

    const BASE: &str = "loss L \"l\"\nhazard H-1 \"h\" leads_to [L]\nhazard H-2 \"h2\" leads_to [L]\n\
                        controller C \"Ctl\"\nprocess P \"P\"\naction A \"Act\" from C to P\n";

    #[test]
    fn one_populated_cell() {
        let (m, d) = parse_str(
            "w.stpa",
            &format!("{BASE}uca U-1 action = A guide = not_provided hazards [H-2, H-1] \"a | b\""),
        );
        assert!(d.is_empty(), "{d:?}");
        let text = render_worksheet(&m, "A").unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "## UCA worksheet: Act (A) issued by Ctl");
        assert_eq!(lines.last().unwrap(), &"| U-1: a \\| b [H-2, H-1] | | | |");
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn no_ucas_gives_stub() {
        let (m, _) = parse_str("w.stpa", BASE);
        let text = render_worksheet(&m, "A").unwrap();
        assert!(text.ends_with("No unsafe control actions are declared for A.\n"));
    }

    #[test]
    fn unknown_action() {
        let (m, _) = parse_str("w.stpa", BASE);
        assert!(matches!(
            render_worksheet(&m, "Nope"),
            Err(ReportError::UnknownAction(_))
        ));
    }
}
