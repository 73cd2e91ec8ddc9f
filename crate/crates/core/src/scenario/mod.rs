//! A small language for writing down automorphisms, graph realizations and
//! finite-group facts, and checking them.
//!
//! ```text
//! # anchor: swap squared
//! scenario "swap"
//! rank 2
//! aut p = P(1, 2)
//! assert p * p == id
//! ```

pub mod ast;
pub mod expand;
pub mod lexer;
pub mod parser;
pub mod report;
pub mod run;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

pub use ast::ScenarioFile;
pub use expand::{expand, Instance};
pub use lexer::Pos;
pub use report::{Record, ReplayReport, Status};
pub use run::{definitions, run_instance, RunOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagKind {
    Syntax,
    UndefinedName,
    RankMismatch,
    /// Well-formed but meaningless, e.g. a graph automorphism that breaks
    /// incidence.
    Invalid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagKind,
    pub pos: Pos,
    pub message: String,
    /// Tokens that would have been accepted (syntax errors only).
    pub expected: Vec<String>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DiagKind::Syntax => "syntax error",
            DiagKind::UndefinedName => "undefined name",
            DiagKind::RankMismatch => "rank error",
            DiagKind::Invalid => "invalid definition",
        };
        write!(f, "{}: {kind}: {}", self.pos, self.message)?;
        if !self.expected.is_empty() {
            write!(f, "; expected one of {}", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}

/// Parses and statically checks a scenario file: every name is defined
/// before use and every rank agrees.
pub fn parse(src: &str) -> Result<ScenarioFile, Diagnostic> {
    let file = parser::parse_file(src)?;
    expand_file(&file, "main")?;
    Ok(file)
}

/// Canonical source text; reparses to an equal file.
pub fn print(file: &ScenarioFile) -> String {
    file.to_string()
}

/// All instances of every scenario in `file`, in order.
pub fn expand_file(file: &ScenarioFile, default_name: &str) -> Result<Vec<Instance>, Diagnostic> {
    let mut anchor = String::new();
    let mut out = Vec::new();
    for sc in &file.scenarios {
        out.extend(expand(sc, default_name, &anchor)?);
        if let Some(a) = sc.items.iter().rev().find_map(|it| match &it.node {
            ast::ItemKind::Anchor(t) => Some(t.clone()),
            _ => None,
        }) {
            anchor = a;
        }
    }
    Ok(out)
}

/// Runs every scenario of a parsed file.
pub fn run(file: &ScenarioFile, default_name: &str, opts: &RunOptions) -> ReplayReport {
    match expand_file(file, default_name) {
        Ok(instances) => ReplayReport {
            records: instances.iter().flat_map(|i| run_instance(i, opts)).collect(),
        },
        Err(d) => error_report(default_name, &d.to_string()),
    }
}

/// Parses and runs `src`; a parse failure becomes a single failing record.
pub fn run_source(src: &str, default_name: &str, opts: &RunOptions) -> ReplayReport {
    match parser::parse_file(src) {
        Ok(file) => run(&file, default_name, opts),
        Err(d) => error_report(default_name, &d.to_string()),
    }
}

fn error_report(name: &str, detail: &str) -> ReplayReport {
    ReplayReport {
        records: vec![Record {
            scenario: name.to_string(),
            assertion: "parse".into(),
            status: Status::Fail,
            detail: detail.to_string(),
            anchor: String::new(),
        }],
    }
}

/// The `.scn` files directly inside `dir`, sorted by name.
pub fn scenario_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "scn"))
        .collect();
    files.sort();
    Ok(files)
}

fn stem(p: &Path) -> String {
    p.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Runs every scenario file in `dir`. Files run in parallel; records keep
/// file order. Unreadable files are reported and the rest still run.
pub fn replay_all(dir: &Path, opts: &RunOptions) -> ReplayReport {
    let files = match scenario_files(dir) {
        Ok(f) => f,
        Err(e) => return error_report(&dir.display().to_string(), &format!("cannot read directory: {e}")),
    };
    let parts: Vec<ReplayReport> = files
        .par_iter()
        .map(|p| match fs::read_to_string(p) {
            Ok(src) => run_source(&src, &stem(p), opts),
            Err(e) => error_report(&stem(p), &format!("cannot read {}: {e}", p.display())),
        })
        .collect();
    let mut all = ReplayReport::default();
    for r in parts {
        all.extend(r);
    }
    all
}

/// Checks that every scenario file carries at least one `# anchor:` line
/// and that every anchor is listed in `anchors.txt` next to the files.
/// Returns one message per problem.
pub fn lint(dir: &Path) -> Vec<String> {
    let mut problems = Vec::new();
    let known: Vec<String> = match fs::read_to_string(dir.join("anchors.txt")) {
        Ok(s) => s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(String::from)
            .collect(),
        Err(e) => {
            problems.push(format!("anchors.txt: {e}"));
            Vec::new()
        }
    };
    let files = match scenario_files(dir) {
        Ok(f) => f,
        Err(e) => return vec![format!("{}: {e}", dir.display())],
    };
    for p in files {
        let name = p.file_name().unwrap_or_default().to_string_lossy().into_owned();
        let src = match fs::read_to_string(&p) {
            Ok(s) => s,
            Err(e) => {
                problems.push(format!("{name}: {e}"));
                continue;
            }
        };
        let toks = match lexer::lex(&src) {
            Ok(t) => t,
            Err((pos, msg)) => {
                problems.push(format!("{name}:{pos}: {msg}"));
                continue;
            }
        };
        let anchors: Vec<(Pos, String)> = toks
            .into_iter()
            .filter_map(|t| match t.tok {
                lexer::Tok::Anchor(a) => Some((t.pos, a)),
                _ => None,
            })
            .collect();
        if anchors.is_empty() {
            problems.push(format!("{name}: no `# anchor:` line"));
        }
        for (pos, a) in anchors {
            if !known.contains(&a) {
                problems.push(format!("{name}:{pos}: anchor {a:?} is not in anchors.txt"));
            }
        }
    }
    problems
}
