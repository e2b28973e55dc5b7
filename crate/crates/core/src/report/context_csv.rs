use crate::analysis::ContextTable;
use crate::model::GuideCategory;

/// Context table as RFC-4180 CSV: one column per process-model variable
/// (headed by its label), then one column per guide-word category holding
/// the space-separated ids of the UCAs marking that row.
pub fn render_context_csv(table: &ContextTable) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let header = table
        .variables
        .iter()
        .map(|v| v.label.as_str())
        .chain(GuideCategory::ALL.iter().map(|c| c.title()));
    w.write_record(header).expect("writing to a Vec cannot fail");
    for (row, context) in table.rows.iter().enumerate() {
        let values = table
            .variables
            .iter()
            .map(|v| context.get(v.id.as_str()).unwrap_or("").to_owned());
        let marks = GuideCategory::ALL.iter().map(|c| {
            let ids: Vec<&str> = table.marking(row, *c).ucas().iter().map(|u| u.as_str()).collect();
            ids.join(" ")
        });
        w.write_record(values.chain(marks))
            .expect("writing to a Vec cannot fail");
    }
    let bytes = w.into_inner().expect("flushing a Vec cannot fail");
    String::from_utf8(bytes).expect("CSV fields are UTF-8")
}
