//! Canonical text rendering for programs, spaces, formulas and computons.
//!
//! When a [`Scope`] is supplied, spaces that were bound to a name print as
//! that name, which keeps reduced and higher-order spaces readable.

use super::ast::*;
use super::Scope;
use crate::computon::Computon;
use crate::formula::{AtomicTerm, Formula};
use crate::space::{Space, SpaceKind};

/// Canonical program text: one binding per line.
pub fn program_text(program: &SourceProgram) -> String {
    let mut out = String::new();
    for b in &program.bindings {
        out.push_str(&b.name);
        out.push_str(" = ");
        out.push_str(&expr_text(&b.expr));
        out.push('\n');
    }
    out
}

pub fn expr_text(expr: &Expr) -> String {
    match &expr.kind {
        ExprKind::Empty => "empty".to_string(),
        ExprKind::Prim(label) => format!("prim(\"{}\")", escape(label)),
        ExprKind::Name(name) => name.clone(),
        ExprKind::Seq(args) => format!("seq({})", args_text(args)),
        ExprKind::Par(args) => format!("par({})", args_text(args)),
        ExprKind::Agg(args) => format!("agg({})", args_text(args)),
        ExprKind::Reduce(base, f) => format!(
            "reduce({}, \"{}\")",
            expr_text(base),
            surface_formula_text(&f.ast)
        ),
        ExprKind::Intersect(a, b) => {
            format!("intersect({}, {})", expr_text(a), expr_text(b))
        }
        ExprKind::Difference(a, b) => {
            format!("difference({}, {})", expr_text(a), expr_text(b))
        }
    }
}

fn args_text(args: &[Expr]) -> String {
    let parts: Vec<String> = args.iter().map(expr_text).collect();
    parts.join(", ")
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

// Precedence levels for connective printing: `|` is 0, `&` is 1, `!` and
// atoms are 2. Parentheses appear only when a child binds looser.
fn surface_level(f: &SurfaceFormula) -> u8 {
    match f {
        SurfaceFormula::Or(_, _) => 0,
        SurfaceFormula::And(_, _) => 1,
        SurfaceFormula::Not(_) | SurfaceFormula::Atom(_) => 2,
    }
}

pub fn surface_formula_text(f: &SurfaceFormula) -> String {
    fn child(f: &SurfaceFormula, min_level: u8) -> String {
        let text = surface_formula_text(f);
        if surface_level(f) < min_level {
            format!("({text})")
        } else {
            text
        }
    }
    match f {
        SurfaceFormula::Atom(a) => surface_atom_text(a),
        SurfaceFormula::Not(g) => format!("!{}", child(g, 2)),
        SurfaceFormula::And(a, b) => format!("{} & {}", child(a, 1), child(b, 1)),
        SurfaceFormula::Or(a, b) => format!("{} | {}", child(a, 0), child(b, 0)),
    }
}

fn surface_atom_text(a: &SurfaceAtom) -> String {
    match a {
        SurfaceAtom::SeqIndexEq { index, target } => format!("p({index})={target}"),
        SurfaceAtom::SeqIndexIndexEq { left, right } => format!("p({left})=p({right})"),
        SurfaceAtom::SeqLenEq { len } => format!("|p|={len}"),
        SurfaceAtom::ParCountEq { target, count } => format!("p({target})={count}"),
        SurfaceAtom::ParCountCountEq { left, right } => format!("p({left})=p({right})"),
        SurfaceAtom::ParAbsent { target } => format!("{target} !in dom(p)"),
        SurfaceAtom::Member { target } => format!("p in {target}"),
        SurfaceAtom::SelfMember => "p in self".to_string(),
    }
}

fn formula_level(f: &Formula) -> u8 {
    match f {
        Formula::Or(_, _) => 0,
        Formula::And(_, _) => 1,
        Formula::Not(_) | Formula::Atom(_) => 2,
    }
}

/// Canonical text of a resolved formula.
pub fn formula_text(f: &Formula, scope: Option<&Scope>) -> String {
    fn child(f: &Formula, min_level: u8, scope: Option<&Scope>) -> String {
        let text = formula_text(f, scope);
        if formula_level(f) < min_level {
            format!("({text})")
        } else {
            text
        }
    }
    match f {
        Formula::Atom(a) => atom_text(a, scope),
        Formula::Not(g) => format!("!{}", child(g, 2, scope)),
        Formula::And(a, b) => format!("{} & {}", child(a, 1, scope), child(b, 1, scope)),
        Formula::Or(a, b) => format!("{} | {}", child(a, 0, scope), child(b, 0, scope)),
    }
}

pub fn atom_text(a: &AtomicTerm, scope: Option<&Scope>) -> String {
    match a {
        AtomicTerm::SeqIndexEq { index, target } => {
            format!("p({index})={}", space_text(target, scope))
        }
        AtomicTerm::SeqIndexIndexEq { left, right } => format!("p({left})=p({right})"),
        AtomicTerm::SeqLenEq { len } => format!("|p|={len}"),
        AtomicTerm::ParCountEq { target, count } => {
            format!("p({})={count}", space_text(target, scope))
        }
        AtomicTerm::ParCountCountEq { left, right } => format!(
            "p({})=p({})",
            space_text(left, scope),
            space_text(right, scope)
        ),
        AtomicTerm::ParAbsent { target } => format!("{} !in dom(p)", space_text(target, scope)),
        AtomicTerm::AggMember { child } => format!("p in {}", space_text(child, scope)),
        AtomicTerm::PrimSelf => "p in self".to_string(),
    }
}

/// Short display text for a space: its bound name when the scope knows one,
/// the label for primitives, operator form otherwise.
pub fn space_text(s: &Space, scope: Option<&Scope>) -> String {
    if let Some(scope) = scope {
        if let Some(name) = scope.name_of(s) {
            return name.to_string();
        }
    }
    match s.kind() {
        SpaceKind::Empty => "empty".to_string(),
        SpaceKind::Primitive(label) => label.clone(),
        SpaceKind::Sequential(ops) => format!("seq({})", operand_list(ops, scope)),
        SpaceKind::Parallel(ops) => format!("par({})", operand_list(ops, scope)),
        SpaceKind::Aggregated(ops) => format!("agg({})", operand_list(ops, scope)),
        SpaceKind::Reduced { base, formula } => format!(
            "reduce({}, \"{}\")",
            space_text(base, scope),
            formula_text(formula, scope)
        ),
        SpaceKind::Intersect(a, b) => format!(
            "intersect({}, {})",
            space_text(a, scope),
            space_text(b, scope)
        ),
        SpaceKind::Difference(a, b) => format!(
            "difference({}, {})",
            space_text(a, scope),
            space_text(b, scope)
        ),
    }
}

fn operand_list(ops: &[Space], scope: Option<&Scope>) -> String {
    let parts: Vec<String> = ops.iter().map(|o| space_text(o, scope)).collect();
    parts.join(", ")
}

/// Computon literal text: `<A,B>`, `{A:2, B:1}` or a primitive label.
pub fn computon_text(c: &Computon, scope: Option<&Scope>) -> String {
    match c {
        Computon::Primitive(label) => label.clone(),
        Computon::Sequential(elems) => {
            let parts: Vec<String> = elems.iter().map(|s| space_text(s, scope)).collect();
            format!("<{}>", parts.join(","))
        }
        Computon::Parallel(entries) => {
            let parts: Vec<String> = entries
                .iter()
                .map(|(s, n)| format!("{}:{n}", space_text(s, scope)))
                .collect();
            format!("{{{}}}", parts.join(", "))
        }
    }
}
