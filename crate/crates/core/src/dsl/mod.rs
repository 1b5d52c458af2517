//! Text syntax for space expressions and reduction formulas.
//!
//! Programs are `.cspace` files: one `name = expression` binding per line,
//! `#` comments, names bind before use and are never rebound. Expressions
//! cover `empty`, `prim("label")`, `seq(..)`, `par(..)`, `agg(..)`,
//! `reduce(expr, "formula")`, `intersect(..)` and `difference(..)`.

pub mod ast;
mod lexer;
pub mod parser;
pub mod pretty;

use std::collections::HashMap;
use std::fmt;

use crate::compose;
use crate::formula::{self, ViolationKind};
use crate::space::Space;

pub use ast::{SourceProgram, Span};
pub use parser::{parse_computon, parse_formula, parse_program};

/// A parse- or construction-time problem, with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub code: DiagnosticCode,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticCode {
    Syntax,
    UnboundName,
    Rebinding,
    KindMismatch,
    ForeignSpace,
    Construction,
}

impl DiagnosticCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiagnosticCode::Syntax => "syntax",
            DiagnosticCode::UnboundName => "unbound-name",
            DiagnosticCode::Rebinding => "rebinding",
            DiagnosticCode::KindMismatch => "kind-mismatch",
            DiagnosticCode::ForeignSpace => "foreign-space",
            DiagnosticCode::Construction => "construction",
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "error[{}] {}:{}: {}",
            self.code.as_str(),
            self.line,
            self.col,
            self.message
        )
    }
}

/// Ordered name → space environment produced by evaluating a program.
#[derive(Debug, Clone, Default)]
pub struct Scope {
    entries: Vec<(String, Space)>,
    by_name: HashMap<String, usize>,
    name_by_key: HashMap<String, String>,
}

impl Scope {
    pub fn new() -> Scope {
        Scope::default()
    }

    /// Bind a name; returns false (without rebinding) if already taken.
    pub fn bind(&mut self, name: impl Into<String>, space: Space) -> bool {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return false;
        }
        self.by_name.insert(name.clone(), self.entries.len());
        self.name_by_key
            .entry(space.canonical_key().to_string())
            .or_insert_with(|| name.clone());
        self.entries.push((name, space));
        true
    }

    pub fn get(&self, name: &str) -> Option<&Space> {
        self.by_name.get(name).map(|&i| &self.entries[i].1)
    }

    /// First name bound to a space with this canonical key.
    pub fn name_of(&self, space: &Space) -> Option<&str> {
        self.name_by_key
            .get(space.canonical_key())
            .map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Space)> {
        self.entries.iter().map(|(n, s)| (n.as_str(), s))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Evaluate a parsed program into a scope of constructed spaces.
/// Construction failures (arity, empty operands, ill-formed formulas) are
/// reported as diagnostics at the offending expression.
pub fn eval_program(program: &SourceProgram) -> Result<Scope, Vec<Diagnostic>> {
    let mut scope = Scope::new();
    let mut diagnostics = Vec::new();
    let mut failed: Vec<String> = Vec::new();
    for binding in &program.bindings {
        match eval_expr(&binding.expr, &scope, &failed) {
            Ok(Some(space)) => {
                scope.bind(binding.name.clone(), space);
            }
            Ok(None) => failed.push(binding.name.clone()),
            Err(mut ds) => {
                diagnostics.append(&mut ds);
                failed.push(binding.name.clone());
            }
        }
    }
    if diagnostics.is_empty() {
        Ok(scope)
    } else {
        Err(diagnostics)
    }
}

/// `Ok(None)` means the expression depends on a binding that already failed;
/// the root cause was reported there.
fn eval_expr(
    expr: &ast::Expr,
    scope: &Scope,
    failed: &[String],
) -> Result<Option<Space>, Vec<Diagnostic>> {
    use ast::ExprKind;
    let construction = |message: String| {
        vec![Diagnostic {
            line: expr.span.line,
            col: expr.span.col,
            code: DiagnosticCode::Construction,
            message,
        }]
    };
    match &expr.kind {
        ExprKind::Empty => Ok(Some(Space::empty())),
        ExprKind::Prim(label) => Ok(Some(Space::primitive(label.clone()))),
        ExprKind::Name(name) => match scope.get(name) {
            Some(s) => Ok(Some(s.clone())),
            None if failed.iter().any(|f| f == name) => Ok(None),
            None => Err(vec![Diagnostic {
                line: expr.span.line,
                col: expr.span.col,
                code: DiagnosticCode::UnboundName,
                message: format!("unbound name `{name}`"),
            }]),
        },
        ExprKind::Seq(args) | ExprKind::Par(args) | ExprKind::Agg(args) => {
            let mut spaces = Vec::with_capacity(args.len());
            for a in args {
                match eval_expr(a, scope, failed)? {
                    Some(s) => spaces.push(s),
                    None => return Ok(None),
                }
            }
            let built = match &expr.kind {
                ExprKind::Seq(_) => compose::seq(&spaces),
                ExprKind::Par(_) => compose::par(&spaces),
                _ => compose::agg(&spaces),
            };
            built.map(Some).map_err(|e| construction(e.to_string()))
        }
        ExprKind::Reduce(base, fsrc) => {
            let base_space = match eval_expr(base, scope, failed)? {
                Some(s) => s,
                None => return Ok(None),
            };
            let f = parser::resolve_formula(&fsrc.ast, scope, fsrc.span)?;
            match formula::reduce(&base_space, &f) {
                Ok(s) => Ok(Some(s)),
                Err(formula::ReduceError::UnsupportedOnEmpty) => {
                    Err(construction("the empty space cannot be reduced".to_string()))
                }
                Err(formula::ReduceError::IllFormedFormula(violations)) => {
                    let atoms = f.atoms();
                    Err(violations
                        .into_iter()
                        .map(|v| {
                            let code = match v.kind {
                                ViolationKind::KindMismatch => DiagnosticCode::KindMismatch,
                                ViolationKind::ForeignSpace => DiagnosticCode::ForeignSpace,
                                ViolationKind::EmptyTarget => DiagnosticCode::Construction,
                            };
                            let term = atoms
                                .get(v.term_index)
                                .map(|t| pretty::atom_text(t, Some(scope)))
                                .unwrap_or_default();
                            Diagnostic {
                                line: fsrc.span.line,
                                col: fsrc.span.col,
                                code,
                                message: format!("term `{term}`: {}", v.message),
                            }
                        })
                        .collect())
                }
            }
        }
        ExprKind::Intersect(a, b) => {
            let left = eval_expr(a, scope, failed)?;
            let right = eval_expr(b, scope, failed)?;
            match (left, right) {
                (Some(l), Some(r)) => Ok(Some(compose::intersect(&l, &r))),
                _ => Ok(None),
            }
        }
        ExprKind::Difference(a, b) => {
            let left = eval_expr(a, scope, failed)?;
            let right = eval_expr(b, scope, failed)?;
            match (left, right) {
                (Some(l), Some(r)) => Ok(Some(compose::difference(&l, &r))),
                _ => Ok(None),
            }
        }
    }
}

/// Parse and evaluate program text in one step.
pub fn load_program(text: &str) -> Result<(SourceProgram, Scope), Vec<Diagnostic>> {
    let program = parse_program(text)?;
    let scope = eval_program(&program)?;
    Ok((program, scope))
}
