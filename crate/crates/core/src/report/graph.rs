use std::collections::HashSet;
use std::fmt::Write;

use thiserror::Error;

use crate::model::{EdgeKind, EntityKind, StpaModel};

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn node_style(kind: EntityKind) -> &'static str {
    match kind {
        EntityKind::Controller => "shape=box, style=bold",
        EntityKind::ControlledProcess => "shape=box",
        EntityKind::Sensor | EntityKind::Actuator => "shape=box, style=rounded",
        EntityKind::Environment => "shape=box, style=dashed",
    }
}

/// Control structure as a Graphviz digraph. Each edge is split at its via
/// elements, so a command travelling through an actuator becomes two
/// segments. Feedback segments are drawn in blue.
pub fn render_graph(model: &StpaModel) -> String {
    let mut out = String::from("digraph control_structure {\n");
    out.push_str("  rankdir=TB;\n");
    for e in &model.entities {
        let _ = writeln!(
            out,
            "  {} [label={}, {}];",
            quote(e.id.as_str()),
            quote(&e.label),
            node_style(e.kind)
        );
    }
    for edge in &model.edges {
        let hops: Vec<_> = edge.hops().collect();
        let style = match edge.kind {
            EdgeKind::ControlAction => String::new(),
            EdgeKind::Feedback => ", color=blue, fontcolor=blue".to_owned(),
        };
        for (i, pair) in hops.windows(2).enumerate() {
            let label = if i == 0 { quote(&edge.label) } else { quote("") };
            let _ = writeln!(
                out,
                "  {} -> {} [label={label}{style}];",
                quote(pair[0].as_str()),
                quote(pair[1].as_str())
            );
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("DOT line {line}: {message}")]
pub struct DotError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum DotTok {
    Id(String),
    Punct(char),
    Arrow(&'static str),
}

fn dot_tokens(text: &str) -> Result<Vec<(DotTok, usize)>, DotError> {
    let err = |line, message: &str| DotError {
        line,
        message: message.to_owned(),
    };
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line) = (0, 1);
    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_whitespace() => i += 1,
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                i += 2;
                loop {
                    match chars.get(i) {
                        None => return Err(err(line, "unterminated comment")),
                        Some('*') if chars.get(i + 1) == Some(&'/') => {
                            i += 2;
                            break;
                        }
                        Some('\n') => line += 1,
                        _ => {}
                    }
                    i += 1;
                }
            }
            '{' | '}' | '[' | ']' | ';' | ',' | '=' => {
                out.push((DotTok::Punct(c), line));
                i += 1;
            }
            '-' if matches!(chars.get(i + 1), Some('>' | '-')) => {
                let op = if chars[i + 1] == '>' { "->" } else { "--" };
                out.push((DotTok::Arrow(op), line));
                i += 2;
            }
            '"' => {
                let start = line;
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(err(start, "unterminated string")),
                        Some('"') => break,
                        Some('\\') if i + 1 < chars.len() => {
                            s.push(chars[i]);
                            s.push(chars[i + 1]);
                            i += 1;
                        }
                        Some('\n') => {
                            line += 1;
                            s.push('\n');
                        }
                        Some(&ch) => s.push(ch),
                    }
                    i += 1;
                }
                i += 1;
                out.push((DotTok::Id(s), start));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' || c == '-' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                    i += 1;
                }
                if i == start {
                    return Err(err(line, "stray '-'"));
                }
                out.push((DotTok::Id(chars[start..i].iter().collect()), line));
            }
            other => return Err(err(line, &format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

/// Minimal DOT well-formedness check: a single `graph` or `digraph` with
/// balanced braces and brackets, well-formed statements, the edge operator
/// matching the graph kind, and every edge endpoint declared as a node
/// before use.
pub fn check_dot(text: &str) -> Result<(), DotError> {
    let toks = dot_tokens(text)?;
    let mut pos = 0;
    let last_line = toks.last().map_or(1, |t| t.1);
    let err = |line: usize, message: String| Err(DotError { line, message });
    let peek = |pos: usize| toks.get(pos).map(|t| &t.0);
    let line_at = |pos: usize| toks.get(pos).map_or(last_line, |t| t.1);
    let keyword = |t: Option<&DotTok>, k: &str| matches!(t, Some(DotTok::Id(s)) if s.eq_ignore_ascii_case(k));

    if keyword(peek(pos), "strict") {
        pos += 1;
    }
    let edge_op = if keyword(peek(pos), "digraph") {
        "->"
    } else if keyword(peek(pos), "graph") {
        "--"
    } else {
        return err(line_at(pos), "expected 'graph' or 'digraph'".into());
    };
    pos += 1;
    if let Some(DotTok::Id(_)) = peek(pos) {
        pos += 1;
    }
    if peek(pos) != Some(&DotTok::Punct('{')) {
        return err(line_at(pos), "expected '{'".into());
    }
    pos += 1;

    let mut nodes: HashSet<String> = HashSet::new();
    loop {
        match peek(pos) {
            None => return err(last_line, "unbalanced braces: missing '}'".into()),
            Some(DotTok::Punct('}')) => {
                pos += 1;
                break;
            }
            Some(DotTok::Punct(';')) => pos += 1,
            Some(DotTok::Id(first)) => {
                let first = first.clone();
                let start_line = line_at(pos);
                pos += 1;
                let is_attr_stmt = ["graph", "node", "edge"].iter().any(|k| first.eq_ignore_ascii_case(k));
                if peek(pos) == Some(&DotTok::Punct('=')) {
                    pos += 1;
                    match peek(pos) {
                        Some(DotTok::Id(_)) => pos += 1,
                        _ => return err(line_at(pos), "expected value after '='".into()),
                    }
                    continue;
                }
                if is_attr_stmt {
                    if peek(pos) != Some(&DotTok::Punct('[')) {
                        return err(line_at(pos), format!("expected '[' after '{first}'"));
                    }
                } else if let Some(DotTok::Arrow(_)) = peek(pos) {
                    if !nodes.contains(&first) {
                        return err(start_line, format!("edge endpoint {first:?} is not a declared node"));
                    }
                    while let Some(DotTok::Arrow(op)) = peek(pos) {
                        let op = *op;
                        if op != edge_op {
                            return err(
                                line_at(pos),
                                format!("edge operator '{op}' in a graph using '{edge_op}'"),
                            );
                        }
                        pos += 1;
                        match peek(pos) {
                            Some(DotTok::Id(target)) if nodes.contains(target) => pos += 1,
                            Some(DotTok::Id(target)) => {
                                return err(line_at(pos), format!("edge endpoint {target:?} is not a declared node"))
                            }
                            _ => return err(line_at(pos), format!("expected node id after '{op}'")),
                        }
                    }
                } else {
                    nodes.insert(first);
                }
                if peek(pos) == Some(&DotTok::Punct('[')) {
                    pos = attr_list(&toks, pos, last_line)?;
                }
            }
            Some(t) => return err(line_at(pos), format!("unexpected token {t:?}")),
        }
    }
    if pos != toks.len() {
        return err(line_at(pos), "content after closing '}'".into());
    }
    Ok(())
}

/// Parses `[ a=b, c=d; ... ]` starting at `pos` (the '['), returning the
/// position after the closing bracket.
fn attr_list(toks: &[(DotTok, usize)], mut pos: usize, last_line: usize) -> Result<usize, DotError> {
    let line_at = |pos: usize| toks.get(pos).map_or(last_line, |t| t.1);
    pos += 1;
    loop {
        match toks.get(pos).map(|t| &t.0) {
            None => {
                return Err(DotError {
                    line: last_line,
                    message: "unbalanced brackets: missing ']'".into(),
                })
            }
            Some(DotTok::Punct(']')) => return Ok(pos + 1),
            Some(DotTok::Punct(',' | ';')) => pos += 1,
            Some(DotTok::Id(_)) => {
                pos += 1;
                if toks.get(pos).map(|t| &t.0) == Some(&DotTok::Punct('=')) {
                    pos += 1;
                    match toks.get(pos).map(|t| &t.0) {
                        Some(DotTok::Id(_)) => pos += 1,
                        _ => {
                            return Err(DotError {
                                line: line_at(pos),
                                message: "expected attribute value".into(),
                            })
                        }
                    }
                }
            }
            Some(t) => {
                return Err(DotError {
                    line: line_at(pos),
                    message: format!("unexpected token {t:?} in attribute list"),
                })
            }
        }
    }
}
