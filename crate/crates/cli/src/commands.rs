//! Implementations behind the `cspace` subcommands. Each returns the text
//! to print or a [`CmdError`] carrying the exit code.

use std::fmt::Write as _;
use std::path::Path;

use cspace_core::computon::{absent_spaces, classify_parallel, classify_sequential};
use cspace_core::dsl::{self, pretty, Diagnostic, Scope, SourceProgram};
use cspace_core::enumerate::{enumerate, member};
use cspace_core::formula::{prove_finite, reduce, Finiteness};
use cspace_core::laws::{check_laws, LawConfig};
use cspace_core::space::{cardinality, order, Space, SpaceKind};

use crate::dot::space_to_dot;

/// Exit codes: 1 parse/type/law failure, 2 name resolution, 3 budget abort,
/// 4 I/O.
#[derive(Debug)]
pub enum CmdError {
    Diagnostics(Vec<Diagnostic>),
    UnboundName(String),
    BudgetAbort { partial: String, message: String },
    LawFailure(String),
    Io(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Diagnostics(_) | CmdError::LawFailure(_) => 1,
            CmdError::UnboundName(_) => 2,
            CmdError::BudgetAbort { .. } => 3,
            CmdError::Io(_) => 4,
        }
    }

    /// Text for stdout (law tables, partial enumerations).
    pub fn stdout(&self) -> Option<String> {
        match self {
            CmdError::LawFailure(table) => Some(table.clone()),
            CmdError::BudgetAbort { partial, .. } if !partial.is_empty() => {
                Some(partial.clone())
            }
            _ => None,
        }
    }

    /// Text for stderr.
    pub fn stderr(&self) -> String {
        match self {
            CmdError::Diagnostics(ds) => {
                let lines: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
                lines.join("\n")
            }
            CmdError::UnboundName(name) => format!("error[unbound-name]: `{name}` is not bound"),
            CmdError::BudgetAbort { message, .. } => format!("error[budget]: {message}"),
            CmdError::LawFailure(_) => "error[laws]: at least one law failed".to_string(),
            CmdError::Io(message) => format!("error[io]: {message}"),
        }
    }
}

pub fn load(path: &Path) -> Result<(SourceProgram, Scope), CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::Io(format!("{}: {e}", path.display())))?;
    dsl::load_program(&text).map_err(CmdError::Diagnostics)
}

fn lookup<'a>(scope: &'a Scope, name: &str) -> Result<&'a Space, CmdError> {
    scope.get(name).ok_or_else(|| CmdError::UnboundName(name.to_string()))
}

fn space_report(name: &str, space: &Space, scope: &Scope) -> String {
    let mut out = String::new();
    let order_text = match order(space) {
        Ok(k) => k.to_string(),
        Err(_) => "undefined".to_string(),
    };
    let finiteness = prove_finite(space);
    let finite_text = match &finiteness {
        Finiteness::Finite(members) => members.len().to_string(),
        Finiteness::Unknown => "unknown".to_string(),
    };
    let _ = writeln!(
        out,
        "name={name} kind={} operands={} order={order_text} cardinality={} finite={finite_text}",
        space.kind_name(),
        space.operands().len(),
        cardinality(space),
    );
    if let Finiteness::Finite(members) = finiteness {
        const SHOWN: usize = 16;
        for m in members.iter().take(SHOWN) {
            let _ = writeln!(out, "member={}", pretty::computon_text(m, Some(scope)));
        }
        if members.len() > SHOWN {
            let _ = writeln!(out, "members-omitted={}", members.len() - SHOWN);
        }
    }
    out
}

pub fn cmd_eval(file: &Path, name: &str) -> Result<String, CmdError> {
    let (_, scope) = load(file)?;
    let space = lookup(&scope, name)?;
    Ok(space_report(name, space, &scope))
}

pub fn cmd_enumerate(file: &Path, name: &str, limit: usize) -> Result<String, CmdError> {
    let (_, scope) = load(file)?;
    let space = lookup(&scope, name)?;
    if limit == 0 {
        return Ok(String::new());
    }
    let stream = enumerate(space, limit).expect("limit is positive");
    let mut out = String::new();
    for item in stream {
        match item {
            Ok(c) => {
                let _ = writeln!(out, "{}", pretty::computon_text(&c, Some(&scope)));
            }
            Err(abort) => {
                return Err(CmdError::BudgetAbort {
                    partial: out,
                    message: abort.to_string(),
                })
            }
        }
    }
    Ok(out)
}

pub fn cmd_member(file: &Path, name: &str, literal: &str) -> Result<String, CmdError> {
    let (_, scope) = load(file)?;
    let space = lookup(&scope, name)?;
    let computon = dsl::parse_computon(literal, &scope).map_err(CmdError::Diagnostics)?;
    Ok(format!("{}\n", member(&computon, space)))
}

pub fn cmd_classify(file: &Path, name: &str, literal: &str) -> Result<String, CmdError> {
    let (_, scope) = load(file)?;
    let space = lookup(&scope, name)?;
    let computon = dsl::parse_computon(literal, &scope).map_err(CmdError::Diagnostics)?;
    let class_text = match space.kind() {
        SpaceKind::Sequential(_) => classify_sequential(&computon, space)
            .map(|c| c.to_string()),
        SpaceKind::Parallel(_) => classify_parallel(&computon, space).map(|c| c.to_string()),
        _ => {
            return Err(CmdError::Diagnostics(vec![Diagnostic {
                line: 0,
                col: 0,
                code: cspace_core::dsl::DiagnosticCode::KindMismatch,
                message: format!("`{name}` is not a sequential or parallel space"),
            }]))
        }
    };
    let class_text = class_text.map_err(|e| {
        CmdError::Diagnostics(vec![Diagnostic {
            line: 0,
            col: 0,
            code: cspace_core::dsl::DiagnosticCode::KindMismatch,
            message: e.to_string(),
        }])
    })?;
    let absents = absent_spaces(&computon, space).expect("same preconditions as classify");
    let absent_text = if absents.is_empty() {
        "none".to_string()
    } else {
        let names: Vec<String> = absents
            .iter()
            .map(|s| pretty::space_text(s, Some(&scope)))
            .collect();
        names.join(",")
    };
    Ok(format!("class={class_text}\nabsent={absent_text}\n"))
}

pub fn cmd_reduce(file: &Path, name: &str, formula_text: &str) -> Result<String, CmdError> {
    let (_, scope) = load(file)?;
    let space = lookup(&scope, name)?;
    let f = dsl::parse_formula(formula_text, space, &scope).map_err(CmdError::Diagnostics)?;
    let reduced = reduce(space, &f).map_err(|e| {
        CmdError::Diagnostics(vec![Diagnostic {
            line: 0,
            col: 0,
            code: cspace_core::dsl::DiagnosticCode::Construction,
            message: e.to_string(),
        }])
    })?;
    Ok(space_report(
        &format!("reduce({name})"),
        &reduced,
        &scope,
    ))
}

pub fn cmd_laws(
    file: &Path,
    budget: usize,
    samples: usize,
    seed: u64,
) -> Result<String, CmdError> {
    let (_, scope) = load(file)?;
    let named: Vec<(String, Space)> = scope
        .iter()
        .map(|(n, s)| (n.to_string(), s.clone()))
        .collect();
    let cfg = LawConfig {
        budget,
        samples,
        seed,
        ..LawConfig::default()
    };
    let reports = check_laws(&named, &cfg);
    let mut out = String::new();
    let width = reports.iter().map(|r| r.law.len()).max().unwrap_or(0);
    let mut passed = 0;
    for r in &reports {
        let status = if r.passed { "pass" } else { "FAIL" };
        if r.passed {
            passed += 1;
        }
        if r.detail.is_empty() {
            let _ = writeln!(out, "{:width$}  {status}", r.law);
        } else {
            let _ = writeln!(out, "{:width$}  {status}  {}", r.law, r.detail);
        }
    }
    let _ = writeln!(out, "{} laws, {} passed", reports.len(), passed);
    if passed == reports.len() {
        Ok(out)
    } else {
        Err(CmdError::LawFailure(out))
    }
}

pub fn cmd_dot(file: &Path, name: &str, out_path: Option<&Path>) -> Result<String, CmdError> {
    let (_, scope) = load(file)?;
    let space = lookup(&scope, name)?;
    let dot = space_to_dot(space, Some(&scope));
    match out_path {
        Some(p) => {
            std::fs::write(p, &dot)
                .map_err(|e| CmdError::Io(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(dot),
    }
}
