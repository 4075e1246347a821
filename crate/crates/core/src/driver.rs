//! The operations behind the `hpt` command line: checking files, evaluating
//! expressions and running the bundled corpus, with diagnostics rendered
//! either for people or as JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::corpus::{self, CorpusEntry};
use crate::kernel::DEFAULT_STEP_BUDGET;
use crate::session::{Outcome, Session, SessionError};
use crate::surface::{parse_file_named, SourceSpan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

#[derive(Clone, Debug)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: SourceSpan,
    pub message: String,
    pub notes: Vec<String>,
}

impl Diagnostic {
    pub fn error(span: SourceSpan, message: impl Into<String>) -> Diagnostic {
        Diagnostic { severity: Severity::Error, span, message: message.into(), notes: Vec::new() }
    }

    pub fn info(span: SourceSpan, message: impl Into<String>) -> Diagnostic {
        Diagnostic { severity: Severity::Info, span, message: message.into(), notes: Vec::new() }
    }

    fn from_session(e: &SessionError) -> Diagnostic {
        Diagnostic::error(e.span().clone(), e.to_string())
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub files: Vec<String>,
    pub declarations_checked: usize,
    pub assertions_passed: usize,
    pub assertions_failed: usize,
    pub diagnostics: Vec<Diagnostic>,
    pub elapsed_ms: u128,
    /// File texts, for rendering source excerpts.
    pub sources: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    severity: Severity,
    file: &'a str,
    line: usize,
    col: usize,
    message: &'a str,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    files: &'a [String],
    declarations_checked: usize,
    assertions_passed: usize,
    assertions_failed: usize,
    diagnostics: Vec<JsonDiagnostic<'a>>,
}

impl CheckReport {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.severity == Severity::Error)
    }

    pub fn exit_code(&self) -> i32 {
        if self.has_errors() || self.assertions_failed > 0 {
            1
        } else {
            0
        }
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.severity == Severity::Error)
    }

    /// The machine-readable report. Timing is left out so that output is
    /// reproducible.
    pub fn to_json(&self) -> String {
        let diagnostics = self
            .diagnostics
            .iter()
            .map(|d| JsonDiagnostic {
                severity: d.severity,
                file: &d.span.file,
                line: d.span.start_line,
                col: d.span.start_col,
                message: &d.message,
            })
            .collect();
        let report = JsonReport {
            files: &self.files,
            declarations_checked: self.declarations_checked,
            assertions_passed: self.assertions_passed,
            assertions_failed: self.assertions_failed,
            diagnostics,
        };
        serde_json::to_string_pretty(&report).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        format!(
            "{} file(s), {} declaration(s) checked, {} assertion(s) passed, {} failed, {} error(s)",
            self.files.len(),
            self.declarations_checked,
            self.assertions_passed,
            self.assertions_failed,
            self.errors().count()
        )
    }

    /// Every diagnostic rendered with its source excerpt, then the summary.
    pub fn render(&self, color: bool) -> String {
        let mut out = String::new();
        for d in &self.diagnostics {
            out.push_str(&render_diagnostic(d, self.sources.get(&*d.span.file).map(String::as_str), color));
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }

    fn absorb(&mut self, other: CheckReport) {
        self.diagnostics.extend(other.diagnostics);
        self.sources.extend(other.sources);
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub open_corpus: bool,
    pub step_budget: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { open_corpus: false, step_budget: DEFAULT_STEP_BUDGET }
    }
}

/// `file:line:col: severity: message`, then the offending line with a caret
/// underline when the source is available.
pub fn render_diagnostic(d: &Diagnostic, source: Option<&str>, color: bool) -> String {
    let (label, paint) = match d.severity {
        Severity::Error => ("error", "\x1b[1;31m"),
        Severity::Warning => ("warning", "\x1b[1;33m"),
        Severity::Info => ("info", "\x1b[1;36m"),
    };
    let mut out = String::new();
    if color {
        let _ = writeln!(out, "{}: {paint}{label}\x1b[0m: {}", d.span, d.message);
    } else {
        let _ = writeln!(out, "{}: {label}: {}", d.span, d.message);
    }
    if let Some(line) = source.and_then(|s| s.lines().nth(d.span.start_line.saturating_sub(1))) {
        let start = d.span.start_col.max(1);
        let width = if d.span.end_line == d.span.start_line && d.span.end_col > start {
            d.span.end_col - start
        } else {
            line.chars().count().saturating_sub(start - 1).max(1)
        };
        let gutter = d.span.start_line.to_string();
        let pad = " ".repeat(gutter.len());
        let _ = writeln!(out, "{gutter} | {line}");
        let _ = writeln!(out, "{pad} | {}{}", " ".repeat(start - 1), "^".repeat(width));
    }
    for n in &d.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    out
}

/// Checks `sources` in order against `session`. Each file stops at its first
/// error; later files are still processed.
pub fn check_sources(session: &mut Session, sources: &[(String, String)]) -> CheckReport {
    let mut report = CheckReport::default();
    for (file, text) in sources {
        report.files.push(file.clone());
        report.sources.insert(file.clone(), text.clone());
        check_one(session, file, text, &mut report);
    }
    report
}

fn check_one(session: &mut Session, file: &str, text: &str, report: &mut CheckReport) {
    let decls = match parse_file_named(file, text) {
        Ok(d) => d,
        Err(e) => {
            report.diagnostics.push(Diagnostic::error(e.span().clone(), e.to_string()));
            return;
        }
    };
    for d in &decls {
        match session.process(d) {
            Ok(Outcome::Declared(_)) => report.declarations_checked += 1,
            Ok(Outcome::Asserted) => report.assertions_passed += 1,
            Ok(Outcome::Checked { term, ty }) => {
                report.diagnostics.push(Diagnostic::info(d.span.clone(), format!("{term} : {ty}")))
            }
            Ok(Outcome::Evaluated { value, ty }) => {
                report.diagnostics.push(Diagnostic::info(d.span.clone(), format!("{value} : {ty}")))
            }
            Err(e) => {
                if matches!(e, SessionError::AssertionFailed { .. }) {
                    report.assertions_failed += 1;
                }
                report.diagnostics.push(Diagnostic::from_session(&e));
                return;
            }
        }
    }
}

/// A session with the corpus loaded when `opts.open_corpus` is set, plus the
/// diagnostics that loading produced.
fn open_session(opts: &Options) -> (Session, CheckReport) {
    let mut session = Session::with_budget(opts.step_budget);
    if !opts.open_corpus {
        return (session, CheckReport::default());
    }
    match corpus::load_sources() {
        Ok(sources) => {
            let mut loaded = check_sources(&mut session, &sources);
            loaded.files.clear();
            (session, loaded)
        }
        Err(e) => {
            let mut report = CheckReport::default();
            report.diagnostics.push(Diagnostic::error(SourceSpan::whole_file("<corpus>"), e.to_string()));
            (session, report)
        }
    }
}

pub fn cmd_check(paths: &[impl AsRef<Path>], opts: &Options) -> CheckReport {
    let start = Instant::now();
    let (mut session, preload) = open_session(opts);
    let mut report = CheckReport::default();
    report.absorb(preload);
    for path in paths {
        let name = path.as_ref().display().to_string();
        match std::fs::read_to_string(path.as_ref()) {
            Ok(text) => {
                let r = check_sources(&mut session, &[(name, text)]);
                report.files.extend(r.files.iter().cloned());
                report.declarations_checked += r.declarations_checked;
                report.assertions_passed += r.assertions_passed;
                report.assertions_failed += r.assertions_failed;
                report.absorb(r);
            }
            Err(e) => {
                report.files.push(name.clone());
                report.diagnostics.push(Diagnostic::error(SourceSpan::whole_file(&name), format!("cannot read file: {e}")));
            }
        }
    }
    report.elapsed_ms = start.elapsed().as_millis();
    report
}

/// Result of `hpt eval`: the printed normal form and type on success.
#[derive(Clone, Debug)]
pub struct EvalOutcome {
    pub value: Option<(String, String)>,
    pub report: CheckReport,
}

impl EvalOutcome {
    /// `value:` and `type:` lines, or the rendered diagnostics.
    pub fn render(&self, color: bool) -> String {
        match &self.value {
            Some((v, t)) => format!("value: {v}\ntype: {t}\n"),
            None => {
                let r = &self.report;
                r.diagnostics
                    .iter()
                    .map(|d| render_diagnostic(d, r.sources.get(&*d.span.file).map(String::as_str), color))
                    .collect()
            }
        }
    }
}

pub const EXPR_FILE: &str = "<expr>";

/// Evaluates `expr` against the corpus when `opts.open_corpus` is set, and
/// otherwise against just the base axioms `A` and `star`.
pub fn cmd_eval(expr: &str, opts: &Options) -> EvalOutcome {
    let start = Instant::now();
    let (mut session, mut report) = open_session(opts);
    if !opts.open_corpus {
        session.load_source("<base>", corpus::BASE_AXIOMS).expect("base axioms check");
    }
    report.sources.insert(EXPR_FILE.to_string(), expr.to_string());
    let value = if report.has_errors() {
        None
    } else {
        match session.eval_expr(expr) {
            Ok(v) => Some(v),
            Err(e) => {
                report.diagnostics.push(Diagnostic::from_session(&e));
                None
            }
        }
    };
    report.elapsed_ms = start.elapsed().as_millis();
    EvalOutcome { value, report }
}

/// Result of `hpt corpus`: the check report plus one verdict per manifest
/// entry.
#[derive(Clone, Debug)]
pub struct CorpusReport {
    pub report: CheckReport,
    pub entries: Vec<(CorpusEntry, bool)>,
}

impl CorpusReport {
    pub fn exit_code(&self) -> i32 {
        if self.report.exit_code() != 0 || self.entries.iter().any(|(_, ok)| !ok) {
            1
        } else {
            0
        }
    }

    pub fn render(&self, color: bool) -> String {
        let mut out = String::new();
        let width = self.entries.iter().map(|(e, _)| e.anchor.chars().count()).max().unwrap_or(0);
        for (e, ok) in &self.entries {
            let verdict = match (ok, color) {
                (true, false) => "pass".to_string(),
                (false, false) => "FAIL".to_string(),
                (true, true) => "\x1b[32mpass\x1b[0m".to_string(),
                (false, true) => "\x1b[1;31mFAIL\x1b[0m".to_string(),
            };
            let pad = " ".repeat(width - e.anchor.chars().count());
            let _ = writeln!(out, "{verdict}  {}{pad}  {} ({})", e.anchor, e.name, e.kind);
        }
        out.push_str(&self.report.render(color));
        out
    }
}

/// Checks every corpus file (running the assertions they contain) and
/// reports each manifest entry as passing iff its declaration was accepted.
pub fn cmd_corpus(opts: &Options) -> CorpusReport {
    let start = Instant::now();
    let mut session = Session::with_budget(opts.step_budget);
    let mut report = match corpus::load_sources() {
        Ok(sources) => check_sources(&mut session, &sources),
        Err(e) => {
            let mut r = CheckReport::default();
            r.diagnostics.push(Diagnostic::error(SourceSpan::whole_file("<corpus>"), e.to_string()));
            r
        }
    };
    let manifest = match corpus::load_manifest() {
        Ok(m) => m.entries,
        Err(e) => {
            report.diagnostics.push(Diagnostic::error(SourceSpan::whole_file(corpus::MANIFEST_FILE), e.to_string()));
            Vec::new()
        }
    };
    let entries = manifest
        .into_iter()
        .map(|e| {
            let ok = session.globals.contains(&e.name);
            (e, ok)
        })
        .collect();
    report.elapsed_ms = start.elapsed().as_millis();
    CorpusReport { report, entries }
}
