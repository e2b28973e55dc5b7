use std::fmt;

use serde::Serialize;

/// Position of a declaration or token in a source file. Lines and columns are
/// 1-based; columns count Unicode scalar values, not bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub line_start: u32,
    pub col_start: u32,
    pub line_end: u32,
    pub col_end: u32,
}

impl SourceSpan {
    pub fn new(file: impl Into<String>, line_start: u32, col_start: u32, line_end: u32, col_end: u32) -> Self {
        SourceSpan {
            file: file.into(),
            line_start,
            col_start,
            line_end,
            col_end,
        }
    }

    /// Placeholder span for declarations built in memory rather than parsed.
    pub fn unknown() -> Self {
        SourceSpan::new("<memory>", 1, 1, 1, 1)
    }

    pub fn is_ordered(&self) -> bool {
        (self.line_start, self.col_start) <= (self.line_end, self.col_end)
    }

    /// Smallest span covering both `self` and `other`. Both must be in the same file.
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        let (ls, cs) = (self.line_start, self.col_start).min((other.line_start, other.col_start));
        let (le, ce) = (self.line_end, self.col_end).max((other.line_end, other.col_end));
        SourceSpan::new(self.file.clone(), ls, cs, le, ce)
    }
}

impl Default for SourceSpan {
    fn default() -> Self {
        SourceSpan::unknown()
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line_start, self.col_start)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// Uniform output of every check. `rule` is namespaced as `<module>/<name>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub rule: String,
    pub message: String,
    pub span: SourceSpan,
    pub related: Vec<(String, SourceSpan)>,
}

impl Diagnostic {
    pub fn new(severity: Severity, rule: impl Into<String>, message: impl Into<String>, span: SourceSpan) -> Self {
        let rule = rule.into();
        debug_assert!(rule.contains('/'), "rule {rule:?} is not namespaced");
        Diagnostic {
            severity,
            rule,
            message: message.into(),
            span,
            related: Vec::new(),
        }
    }

    pub fn error(rule: impl Into<String>, message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic::new(Severity::Error, rule, message, span)
    }

    pub fn warning(rule: impl Into<String>, message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic::new(Severity::Warning, rule, message, span)
    }

    pub fn info(rule: impl Into<String>, message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic::new(Severity::Info, rule, message, span)
    }

    pub fn with_related(mut self, message: impl Into<String>, span: SourceSpan) -> Self {
        self.related.push((message.into(), span));
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// Compiler-style rendering: `file:line:col: severity[rule]: message`.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}[{}]: {}", self.span, self.severity, self.rule, self.message)?;
        for (msg, span) in &self.related {
            write!(f, "\n  {span}: note: {msg}")?;
        }
        Ok(())
    }
}

pub fn worst_severity(diags: &[Diagnostic]) -> Option<Severity> {
    diags.iter().map(|d| d.severity).max()
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
