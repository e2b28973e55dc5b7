//! The `stpa` command: a safety linter and report generator for `.stpa`
//! models.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use stpa_core::analysis::{trace_closure, TableOptions, DEFAULT_MAX_ROWS};
use stpa_core::causal::validate_cfs;
use stpa_core::diagnostic::{worst_severity, Diagnostic, Severity};
use stpa_core::dsl::{parse, serialize_file, SourceFile, HEADER};
use stpa_core::report::{render, ReportFormat, ReportKind, ReportRequest, Scope};
use stpa_core::{Identifier, StpaModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_WARNINGS: i32 = 1;
pub const EXIT_ERRORS: i32 = 2;
pub const EXIT_NO_MODEL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable overriding the context-table row limit.
pub const MAX_ROWS_ENV: &str = "STPA_MAX_ROWS";

#[derive(Debug, Parser)]
#[command(name = "stpa", version, about = "Safety linter and report generator for STPA models")]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Debug, Args)]
struct Inputs {
    /// Model files, resolved together as one model.
    #[arg(required = true, value_name = "FILE")]
    inputs: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct Output {
    /// Write the report here instead of standard output.
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TextFormat {
    Markdown,
    Json,
}

impl From<TextFormat> for ReportFormat {
    fn from(f: TextFormat) -> Self {
        match f {
            TextFormat::Markdown => ReportFormat::Markdown,
            TextFormat::Json => ReportFormat::Json,
        }
    }
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Resolve the model and run traceability and causal-factor checks.
    Check {
        /// Do not print warnings and do not let them affect the exit code.
        #[arg(long)]
        quiet_warnings: bool,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Context table of one control action as CSV.
    Contexts {
        /// Controller whose process model spans the table [default: the action's source].
        #[arg(long)]
        controller: Option<String>,
        /// Control action to mark UCAs for.
        #[arg(long)]
        action: String,
        /// Largest table to build [default: $STPA_MAX_ROWS or 100000].
        #[arg(long)]
        max_rows: Option<usize>,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// UCA worksheets, one per control action with UCAs.
    Worksheet {
        /// Only actions issued by this controller.
        #[arg(long)]
        controller: Option<String>,
        /// Only this control action.
        #[arg(long)]
        action: Option<String>,
        #[arg(long, value_enum, default_value = "markdown")]
        format: TextFormat,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Traceability matrices.
    Trace {
        #[arg(long, value_enum, default_value = "markdown")]
        format: TextFormat,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Causal-factor checklists derived from the control structure.
    Checklist {
        /// Only actions issued by this controller.
        #[arg(long)]
        controller: Option<String>,
        /// Only this control action.
        #[arg(long)]
        action: Option<String>,
        /// Only this unsafe control action.
        #[arg(long)]
        uca: Option<String>,
        #[arg(long, value_enum, default_value = "markdown")]
        format: TextFormat,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Control structure as a Graphviz DOT graph.
    Graph {
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Declaration counts and breakdowns.
    Stats {
        #[arg(long, value_enum, default_value = "markdown")]
        format: TextFormat,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Rewrite files in canonical form.
    Fmt {
        #[command(flatten)]
        inputs: Inputs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Contexts,
    Worksheet,
    Trace,
    Checklist,
    Graph,
    Stats,
    Fmt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub output: Option<PathBuf>,
    pub scope: Scope,
    pub max_rows: usize,
    pub format: ReportFormat,
    pub quiet_warnings: bool,
}

impl CliConfig {
    pub fn new(command: Command, inputs: Vec<PathBuf>) -> Self {
        let format = match command {
            Command::Contexts => ReportFormat::Csv,
            Command::Graph => ReportFormat::Dot,
            _ => ReportFormat::Markdown,
        };
        CliConfig {
            command,
            inputs,
            output: None,
            scope: Scope::default(),
            max_rows: DEFAULT_MAX_ROWS,
            format,
            quiet_warnings: false,
        }
    }
}

fn id(s: Option<String>) -> Option<Identifier> {
    s.map(Identifier::new)
}

/// Row limit from the flag, else the environment variable, else the default.
pub fn resolve_max_rows(flag: Option<usize>, env: Option<&str>) -> Result<usize, String> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match env {
        None => Ok(DEFAULT_MAX_ROWS),
        Some(text) => text
            .trim()
            .parse()
            .map_err(|_| format!("{MAX_ROWS_ENV} must be a non-negative integer, got {text:?}")),
    }
}

/// Parses command-line arguments (program name first) into a config.
pub fn parse_args<I, T>(args: I) -> Result<CliConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let env = std::env::var(MAX_ROWS_ENV).ok();
    let mut max_rows_flag = None;
    let mut cfg = match cli.command {
        CommandArgs::Check { quiet_warnings, inputs } => {
            let mut c = CliConfig::new(Command::Check, inputs.inputs);
            c.quiet_warnings = quiet_warnings;
            c
        }
        CommandArgs::Contexts {
            controller,
            action,
            max_rows,
            output,
            inputs,
        } => {
            let mut c = CliConfig::new(Command::Contexts, inputs.inputs);
            c.scope.controller = id(controller);
            c.scope.action = Some(Identifier::new(action));
            c.output = output.output;
            max_rows_flag = max_rows;
            c
        }
        CommandArgs::Worksheet {
            controller,
            action,
            format,
            output,
            inputs,
        } => {
            let mut c = CliConfig::new(Command::Worksheet, inputs.inputs);
            c.scope.controller = id(controller);
            c.scope.action = id(action);
            c.format = format.into();
            c.output = output.output;
            c
        }
        CommandArgs::Trace { format, output, inputs } => {
            let mut c = CliConfig::new(Command::Trace, inputs.inputs);
            c.format = format.into();
            c.output = output.output;
            c
        }
        CommandArgs::Checklist {
            controller,
            action,
            uca,
            format,
            output,
            inputs,
        } => {
            let mut c = CliConfig::new(Command::Checklist, inputs.inputs);
            c.scope = Scope {
                controller: id(controller),
                action: id(action),
                uca: id(uca),
            };
            c.format = format.into();
            c.output = output.output;
            c
        }
        CommandArgs::Graph { output, inputs } => {
            let mut c = CliConfig::new(Command::Graph, inputs.inputs);
            c.output = output.output;
            c
        }
        CommandArgs::Stats { format, output, inputs } => {
            let mut c = CliConfig::new(Command::Stats, inputs.inputs);
            c.format = format.into();
            c.output = output.output;
            c
        }
        CommandArgs::Fmt { inputs } => CliConfig::new(Command::Fmt, inputs.inputs),
    };
    if cfg.command == Command::Contexts {
        cfg.max_rows = resolve_max_rows(max_rows_flag, env.as_deref())
            .map_err(|m| clap::Error::raw(clap::error::ErrorKind::InvalidValue, format!("{m}\n")))?;
    }
    Ok(cfg)
}

fn print_diagnostics(err: &mut dyn Write, diags: &[Diagnostic], quiet_warnings: bool) {
    for d in diags {
        if quiet_warnings && d.severity == Severity::Warning {
            continue;
        }
        let _ = writeln!(err, "{d}");
    }
}

fn read_inputs(inputs: &[PathBuf], err: &mut dyn Write) -> Option<Vec<SourceFile>> {
    let mut files = Vec::with_capacity(inputs.len());
    for path in inputs {
        match std::fs::read_to_string(path) {
            Ok(text) => files.push(SourceFile::new(path.display().to_string(), text)),
            Err(e) => {
                let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
                return None;
            }
        }
    }
    Some(files)
}

fn is_syntax_error(d: &Diagnostic) -> bool {
    d.is_error() && d.rule.starts_with("parse/")
}

/// Loads a model for a report command, printing errors. `Err` holds the
/// exit code.
fn load(config: &CliConfig, err: &mut dyn Write) -> Result<(StpaModel, Vec<SourceFile>), i32> {
    let files = read_inputs(&config.inputs, err).ok_or(EXIT_NO_MODEL)?;
    let (model, diags) = parse(&files);
    let errors: Vec<Diagnostic> = diags.into_iter().filter(Diagnostic::is_error).collect();
    if errors.is_empty() {
        return Ok((model, files));
    }
    print_diagnostics(err, &errors, false);
    Err(if errors.iter().any(is_syntax_error) {
        EXIT_NO_MODEL
    } else {
        EXIT_ERRORS
    })
}

fn check(config: &CliConfig, err: &mut dyn Write) -> i32 {
    let Some(files) = read_inputs(&config.inputs, err) else {
        return EXIT_NO_MODEL;
    };
    let (model, mut diags) = parse(&files);
    if !diags.iter().any(Diagnostic::is_error) {
        diags.extend(trace_closure(&model));
        if !diags.iter().any(Diagnostic::is_error) {
            diags.extend(validate_cfs(&model));
        }
    }
    print_diagnostics(err, &diags, config.quiet_warnings);
    match worst_severity(&diags) {
        Some(Severity::Error) => EXIT_ERRORS,
        Some(Severity::Warning) if !config.quiet_warnings => EXIT_WARNINGS,
        _ => EXIT_OK,
    }
}

/// Comment lines at the top of `text`, without the canonical header and
/// without surrounding blank lines.
fn leading_comments(text: &str) -> Vec<&str> {
    let mut lines: Vec<&str> = text
        .trim_start_matches('\u{feff}')
        .lines()
        .take_while(|l| {
            let t = l.trim();
            t.is_empty() || t.starts_with('#')
        })
        .map(str::trim_end)
        .filter(|l| l.trim() != HEADER)
        .collect();
    while lines.first().is_some_and(|l| l.is_empty()) {
        lines.remove(0);
    }
    while lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    lines
}

/// Canonical text of one file of a parsed model, keeping the file's leading
/// comment block.
pub fn format_file(model: &StpaModel, file: &SourceFile) -> String {
    let body = serialize_file(model, &file.path);
    let comments = leading_comments(&file.text);
    if comments.is_empty() {
        return body;
    }
    let rest = body.strip_prefix(HEADER).unwrap_or(&body).trim_start_matches('\n');
    let mut out = format!("{HEADER}\n{}\n", comments.join("\n"));
    if !rest.is_empty() {
        out.push('\n');
        out.push_str(rest);
    }
    out
}

fn fmt(config: &CliConfig, err: &mut dyn Write) -> i32 {
    let (model, files) = match load(config, err) {
        Ok(loaded) => loaded,
        Err(code) => return code,
    };
    for file in &files {
        let text = format_file(&model, file);
        if text == file.text {
            continue;
        }
        if let Err(e) = std::fs::write(&file.path, text) {
            let _ = writeln!(err, "error: cannot write {}: {e}", file.path);
            return EXIT_NO_MODEL;
        }
    }
    EXIT_OK
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let written = match output {
        Some(path) => std::fs::write(path, text).map_err(|e| (path.display().to_string(), e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| ("standard output".to_owned(), e)),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err((target, e)) => {
            let _ = writeln!(err, "error: cannot write {target}: {e}");
            EXIT_NO_MODEL
        }
    }
}

fn report(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let kind = match config.command {
        Command::Contexts => ReportKind::ContextTableCsv,
        Command::Worksheet => ReportKind::Worksheet,
        Command::Trace => ReportKind::TraceMatrix,
        Command::Checklist => ReportKind::Checklist,
        Command::Graph => ReportKind::Graph,
        Command::Stats => ReportKind::Summary,
        Command::Check | Command::Fmt => unreachable!("not a report command"),
    };
    let request = match ReportRequest::new(kind, config.format, config.scope.clone()) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let model = match load(config, err) {
        Ok((model, _)) => model,
        Err(code) => return code,
    };
    let options = TableOptions {
        max_rows: config.max_rows,
    };
    match render(&model, &request, options) {
        Ok(text) => emit(&text, config.output.as_deref(), out, err),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERRORS
        }
    }
}

/// Runs one command, writing reports to `out` and diagnostics to `err`.
pub fn run(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if config.inputs.is_empty() {
        let _ = writeln!(err, "error: no input files");
        return EXIT_USAGE;
    }
    match config.command {
        Command::Check => check(config, err),
        Command::Fmt => fmt(config, err),
        _ => report(config, out, err),
    }
}

/// Parses `args` and runs the command; help and version requests exit 0,
/// other argument errors 64.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(args) {
        Ok(config) => run(&config, out, err),
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            }
        }
    }
}

pub fn main_from_env() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = main_with_args(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = io::stdout().flush();
    code
}
