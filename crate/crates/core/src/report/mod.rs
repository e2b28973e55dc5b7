//! Worksheets, context tables, traceability matrices, checklists, graphs and
//! summaries. Every renderer is a pure function of the model.

mod checklist;
mod context_csv;
mod graph;
mod summary;
mod trace;
mod worksheet;

pub use checklist::render_checklist;
pub use context_csv::render_context_csv;
pub use graph::{check_dot, render_graph, DotError};
pub use summary::render_summary;
pub use trace::render_trace_matrix;
pub use worksheet::render_worksheet;

use std::fmt;

use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::analysis::{build_context_table, stats, AnalysisError, TableOptions};
use crate::causal::{checklist as build_checklist, CausalError};
use crate::model::{GuideCategory, Identifier, StpaModel, UnsafeControlAction};

/// Version of the JSON layout, emitted as the top-level `stpa_schema` field.
pub const JSON_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReportKind {
    Worksheet,
    ContextTableCsv,
    TraceMatrix,
    Checklist,
    Graph,
    Summary,
}

impl fmt::Display for ReportKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportKind::Worksheet => "worksheet",
            ReportKind::ContextTableCsv => "context table",
            ReportKind::TraceMatrix => "trace matrix",
            ReportKind::Checklist => "checklist",
            ReportKind::Graph => "graph",
            ReportKind::Summary => "summary",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReportFormat {
    Markdown,
    Csv,
    Dot,
    Json,
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Markdown => "markdown",
            ReportFormat::Csv => "csv",
            ReportFormat::Dot => "dot",
            ReportFormat::Json => "json",
        })
    }
}

impl ReportKind {
    pub fn supports(self, format: ReportFormat) -> bool {
        match self {
            ReportKind::Graph => format == ReportFormat::Dot,
            ReportKind::ContextTableCsv => format == ReportFormat::Csv,
            _ => matches!(format, ReportFormat::Markdown | ReportFormat::Json),
        }
    }

    pub fn default_format(self) -> ReportFormat {
        match self {
            ReportKind::Graph => ReportFormat::Dot,
            ReportKind::ContextTableCsv => ReportFormat::Csv,
            _ => ReportFormat::Markdown,
        }
    }
}

/// Optional filter narrowing a report to one controller, action or UCA.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Scope {
    pub controller: Option<Identifier>,
    pub action: Option<Identifier>,
    pub uca: Option<Identifier>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRequest {
    kind: ReportKind,
    format: ReportFormat,
    pub scope: Scope,
}

impl ReportRequest {
    pub fn new(kind: ReportKind, format: ReportFormat, scope: Scope) -> Result<Self, ReportError> {
        if !kind.supports(format) {
            return Err(ReportError::Unsupported { kind, format });
        }
        Ok(ReportRequest { kind, format, scope })
    }

    pub fn kind(&self) -> ReportKind {
        self.kind
    }

    pub fn format(&self) -> ReportFormat {
        self.format
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("{kind} reports cannot be rendered as {format}")]
    Unsupported { kind: ReportKind, format: ReportFormat },
    #[error("{0} reports need --{1}")]
    MissingScope(ReportKind, &'static str),
    #[error("unknown control action {0}")]
    UnknownAction(Identifier),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Causal(#[from] CausalError),
}

/// Escapes characters that would break a Markdown table cell.
pub(crate) fn md_escape(text: &str) -> String {
    text.replace('|', "\\|").replace('\n', " ")
}

fn versioned(fields: Value) -> String {
    let mut map = Map::new();
    map.insert("stpa_schema".into(), json!(JSON_SCHEMA_VERSION));
    if let Value::Object(rest) = fields {
        map.extend(rest);
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(map)).expect("JSON values always serialize");
    text.push('\n');
    text
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("report data always serializes")
}

/// Model as JSON with the schema version alongside the model fields.
pub fn render_model_json(model: &StpaModel) -> String {
    versioned(to_value(model))
}

fn worksheet_actions<'a>(model: &'a StpaModel, scope: &'a Scope) -> Vec<&'a Identifier> {
    if let Some(a) = &scope.action {
        return vec![a];
    }
    model
        .control_actions()
        .filter(|e| scope.controller.as_ref().is_none_or(|c| &e.source == c))
        .filter(|e| model.ucas_for_action(e.id.as_str()).next().is_some())
        .map(|e| &e.id)
        .collect()
}

fn scoped_ucas<'a>(model: &'a StpaModel, scope: &Scope) -> Vec<&'a UnsafeControlAction> {
    model
        .ucas
        .iter()
        .filter(|u| scope.uca.as_ref().is_none_or(|x| &u.id == x))
        .filter(|u| scope.action.as_ref().is_none_or(|x| &u.action == x))
        .filter(|u| scope.controller.as_ref().is_none_or(|x| &u.source_controller == x))
        .collect()
}

/// Renders `request` against `model`.
pub fn render(model: &StpaModel, request: &ReportRequest, options: TableOptions) -> Result<String, ReportError> {
    let json = request.format == ReportFormat::Json;
    let scope = &request.scope;
    match request.kind {
        ReportKind::Worksheet => {
            let actions = worksheet_actions(model, scope);
            if json {
                let mut sheets = Vec::new();
                for a in actions {
                    if model.control_actions().all(|e| &e.id != a) {
                        return Err(ReportError::UnknownAction(a.clone()));
                    }
                    let columns: Vec<Value> = GuideCategory::ALL
                        .iter()
                        .map(|cat| {
                            let ucas: Vec<&UnsafeControlAction> = model
                                .ucas_for_action(a.as_str())
                                .filter(|u| u.guide.category == *cat)
                                .collect();
                            json!({ "category": cat, "title": cat.title(), "ucas": ucas })
                        })
                        .collect();
                    sheets.push(json!({ "action": a, "columns": columns }));
                }
                return Ok(versioned(json!({ "worksheets": sheets })));
            }
            let mut parts = Vec::new();
            for a in actions {
                parts.push(render_worksheet(model, a.as_str())?);
            }
            if parts.is_empty() {
                return Ok("No unsafe control actions are declared.\n".into());
            }
            Ok(parts.join("\n"))
        }
        ReportKind::ContextTableCsv => {
            let action = scope
                .action
                .as_ref()
                .ok_or(ReportError::MissingScope(request.kind, "action"))?;
            let controller = match &scope.controller {
                Some(c) => c.clone(),
                None => model
                    .control_actions()
                    .find(|e| &e.id == action)
                    .map(|e| e.source.clone())
                    .ok_or_else(|| ReportError::UnknownAction(action.clone()))?,
            };
            let table = build_context_table(model, controller.as_str(), action.as_str(), options)?;
            Ok(render_context_csv(&table))
        }
        ReportKind::TraceMatrix if json => Ok(render_model_json(model)),
        ReportKind::TraceMatrix => Ok(render_trace_matrix(model)),
        ReportKind::Checklist => {
            if let Some(u) = &scope.uca {
                if model.uca(u.as_str()).is_none() {
                    return Err(CausalError::UnknownUca(u.clone()).into());
                }
            }
            let ucas = scoped_ucas(model, scope);
            if json {
                let mut lists = Vec::new();
                for u in ucas {
                    let items = build_checklist(model, u.id.as_str())?;
                    lists.push(json!({ "uca": u.id, "items": items }));
                }
                return Ok(versioned(json!({ "checklists": lists })));
            }
            let mut parts = Vec::new();
            for u in ucas {
                let items = build_checklist(model, u.id.as_str())?;
                parts.push(render_checklist(model, u, &items));
            }
            Ok(parts.join("\n"))
        }
        ReportKind::Graph => Ok(render_graph(model)),
        ReportKind::Summary if json => Ok(versioned(to_value(stats(model)))),
        ReportKind::Summary => Ok(render_summary(&stats(model))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_str;

    #[test]
    fn format_restrictions() {
        use ReportFormat::*;
        use ReportKind::*;
        for (kind, ok) in [
            (Graph, vec![Dot]),
            (ContextTableCsv, vec![Csv]),
            (Worksheet, vec![Markdown, Json]),
            (TraceMatrix, vec![Markdown, Json]),
            (Checklist, vec![Markdown, Json]),
            (Summary, vec![Markdown, Json]),
        ] {
            for format in [Markdown, Csv, Dot, Json] {
                let r = ReportRequest::new(kind, format, Scope::default());
                assert_eq!(r.is_ok(), ok.contains(&format), "{kind} as {format}");
            }
            assert!(kind.supports(kind.default_format()));
        }
        assert_eq!(
            ReportRequest::new(Graph, Json, Scope::default())
                .unwrap_err()
                .to_string(),
            "graph reports cannot be rendered as json"
        );
    }

    #[test]
    fn json_carries_schema_version() {
        let (m, _) = parse_str("j.stpa", "loss L-1 \"x\"");
        let text = render_model_json(&m);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["stpa_schema"], 1);
        assert_eq!(v["losses"][0]["id"], "L-1");
        let req = ReportRequest::new(ReportKind::Summary, ReportFormat::Json, Scope::default()).unwrap();
        let v: Value = serde_json::from_str(&render(&m, &req, TableOptions::default()).unwrap()).unwrap();
        assert_eq!(v["stpa_schema"], 1);
        assert_eq!(v["losses"], 1);
    }

    #[test]
    fn context_table_needs_an_action() {
        let req = ReportRequest::new(ReportKind::ContextTableCsv, ReportFormat::Csv, Scope::default()).unwrap();
        let err = render(&StpaModel::new(), &req, TableOptions::default()).unwrap_err();
        assert_eq!(err.to_string(), "context table reports need --action");
    }
}
