//! Recursive-descent parsers for programs, formulas and computon literals.

use std::collections::HashSet;

use super::ast::*;
use super::lexer::{lex_line, Spanned, Token};
use super::{Diagnostic, DiagnosticCode, Scope};
use crate::computon::Computon;
use crate::formula::{self, AtomicTerm, Formula};
use crate::space::Space;

const RESERVED: &[&str] = &[
    "empty",
    "prim",
    "seq",
    "par",
    "agg",
    "reduce",
    "intersect",
    "difference",
    "p",
    "in",
    "dom",
    "self",
];

/// Parse a whole program: one `name = expression` binding per line, `#`
/// comments, blank lines ignored. All diagnostics are collected; parsing
/// never panics.
pub fn parse_program(text: &str) -> Result<SourceProgram, Vec<Diagnostic>> {
    let mut bindings = Vec::new();
    let mut diagnostics = Vec::new();
    let mut declared: HashSet<String> = HashSet::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens = match lex_line(raw_line, line_no) {
            Ok(tokens) => tokens,
            Err(d) => {
                diagnostics.push(d);
                continue;
            }
        };
        if tokens.is_empty() {
            continue;
        }
        let mut p = TokenParser::new(&tokens, line_no);
        match p.binding(&declared) {
            Ok(binding) => {
                if declared.contains(&binding.name) {
                    diagnostics.push(Diagnostic {
                        line: binding.name_span.line,
                        col: binding.name_span.col,
                        code: DiagnosticCode::Rebinding,
                        message: format!("`{}` is already bound", binding.name),
                    });
                } else {
                    declared.insert(binding.name.clone());
                    bindings.push(binding);
                }
            }
            Err(mut ds) => {
                // Record the declared name even when the line fails so later
                // uses do not cascade into unbound-name noise.
                if let Some(Token::Ident(name)) = tokens.first().map(|t| &t.token) {
                    declared.insert(name.clone());
                }
                diagnostics.append(&mut ds);
            }
        }
    }
    if diagnostics.is_empty() {
        Ok(SourceProgram { bindings })
    } else {
        Err(diagnostics)
    }
}

struct TokenParser<'a> {
    tokens: &'a [Spanned],
    pos: usize,
    line: usize,
}

impl<'a> TokenParser<'a> {
    fn new(tokens: &'a [Spanned], line: usize) -> Self {
        TokenParser { tokens, pos: 0, line }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.token)
    }

    fn span(&self) -> Span {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|t| t.span)
            .unwrap_or(Span::new(self.line, 1))
    }

    fn bump(&mut self) -> Option<&'a Spanned> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn error(&self, message: impl Into<String>) -> Vec<Diagnostic> {
        let span = self.span();
        vec![Diagnostic {
            line: span.line,
            col: span.col,
            code: DiagnosticCode::Syntax,
            message: message.into(),
        }]
    }

    fn expect(&mut self, want: &Token) -> Result<Span, Vec<Diagnostic>> {
        match self.tokens.get(self.pos) {
            Some(t) if t.token == *want => {
                self.pos += 1;
                Ok(t.span)
            }
            Some(t) => Err(self.error(format!(
                "expected {}, found {}",
                want.describe(),
                t.token.describe()
            ))),
            None => Err(self.error(format!("expected {} at end of line", want.describe()))),
        }
    }

    fn ident(&mut self) -> Result<(String, Span), Vec<Diagnostic>> {
        match self.tokens.get(self.pos) {
            Some(Spanned { token: Token::Ident(name), span }) => {
                self.pos += 1;
                Ok((name.clone(), *span))
            }
            Some(t) => Err(self.error(format!("expected a name, found {}", t.token.describe()))),
            None => Err(self.error("expected a name at end of line")),
        }
    }

    fn binding(&mut self, declared: &HashSet<String>) -> Result<Binding, Vec<Diagnostic>> {
        let (name, name_span) = self.ident()?;
        if RESERVED.contains(&name.as_str()) {
            return Err(vec![Diagnostic {
                line: name_span.line,
                col: name_span.col,
                code: DiagnosticCode::Syntax,
                message: format!("`{name}` is a reserved word and cannot be bound"),
            }]);
        }
        self.expect(&Token::Equals)?;
        let expr = self.expr(declared)?;
        if self.pos != self.tokens.len() {
            return Err(self.error("unexpected trailing input after expression"));
        }
        Ok(Binding { name, name_span, expr })
    }

    fn expr(&mut self, declared: &HashSet<String>) -> Result<Expr, Vec<Diagnostic>> {
        let span = self.span();
        let (head, head_span) = self.ident()?;
        match head.as_str() {
            "empty" => Ok(Expr { kind: ExprKind::Empty, span }),
            "prim" => {
                self.expect(&Token::LParen)?;
                let label = match self.bump() {
                    Some(Spanned { token: Token::Str(s), .. }) => s.clone(),
                    _ => return Err(self.error("expected a quoted label in prim(..)")),
                };
                self.expect(&Token::RParen)?;
                Ok(Expr { kind: ExprKind::Prim(label), span })
            }
            "seq" | "par" | "agg" => {
                let args = self.arg_list(declared)?;
                let kind = match head.as_str() {
                    "seq" => ExprKind::Seq(args),
                    "par" => ExprKind::Par(args),
                    _ => ExprKind::Agg(args),
                };
                Ok(Expr { kind, span })
            }
            "reduce" => {
                self.expect(&Token::LParen)?;
                let base = self.expr(declared)?;
                self.expect(&Token::Comma)?;
                let (fsrc_text, fsrc_span) = match self.bump() {
                    Some(Spanned { token: Token::Str(s), span }) => (s.clone(), *span),
                    _ => return Err(self.error("expected a quoted formula in reduce(..)")),
                };
                self.expect(&Token::RParen)?;
                let ast = parse_formula_text(&fsrc_text, fsrc_span)?;
                Ok(Expr {
                    kind: ExprKind::Reduce(Box::new(base), FormulaSource { ast, span: fsrc_span }),
                    span,
                })
            }
            "intersect" | "difference" => {
                self.expect(&Token::LParen)?;
                let a = self.expr(declared)?;
                self.expect(&Token::Comma)?;
                let b = self.expr(declared)?;
                self.expect(&Token::RParen)?;
                let kind = if head == "intersect" {
                    ExprKind::Intersect(Box::new(a), Box::new(b))
                } else {
                    ExprKind::Difference(Box::new(a), Box::new(b))
                };
                Ok(Expr { kind, span })
            }
            _ => {
                if !declared.contains(&head) {
                    return Err(vec![Diagnostic {
                        line: head_span.line,
                        col: head_span.col,
                        code: DiagnosticCode::UnboundName,
                        message: format!("unbound name `{head}`"),
                    }]);
                }
                Ok(Expr { kind: ExprKind::Name(head), span })
            }
        }
    }

    fn arg_list(&mut self, declared: &HashSet<String>) -> Result<Vec<Expr>, Vec<Diagnostic>> {
        self.expect(&Token::LParen)?;
        let mut args = vec![self.expr(declared)?];
        loop {
            match self.peek() {
                Some(Token::Comma) => {
                    self.bump();
                    args.push(self.expr(declared)?);
                }
                Some(Token::RParen) => {
                    self.bump();
                    return Ok(args);
                }
                _ => return Err(self.error("expected `,` or `)` in argument list")),
            }
        }
    }
}

/// Parse standalone formula text into a surface formula. Spans are relative
/// to `base_span` (formula text embedded in a program line keeps program
/// coordinates; standalone text starts at 1:1).
pub fn parse_formula_text(
    text: &str,
    base_span: Span,
) -> Result<SurfaceFormula, Vec<Diagnostic>> {
    let tokens = lex_line(text, base_span.line).map_err(|mut d| {
        d.col += base_span.col;
        vec![d]
    })?;
    let mut p = FormulaParser {
        inner: TokenParser::new(&tokens, base_span.line),
        col_offset: base_span.col,
    };
    let f = p.or_level()?;
    if p.inner.pos != p.inner.tokens.len() {
        return Err(p.error("unexpected trailing input after formula"));
    }
    Ok(f)
}

struct FormulaParser<'a> {
    inner: TokenParser<'a>,
    col_offset: usize,
}

impl<'a> FormulaParser<'a> {
    fn error(&self, message: impl Into<String>) -> Vec<Diagnostic> {
        let span = self.inner.span();
        vec![Diagnostic {
            line: span.line,
            col: span.col + self.col_offset,
            code: DiagnosticCode::Syntax,
            message: message.into(),
        }]
    }

    fn or_level(&mut self) -> Result<SurfaceFormula, Vec<Diagnostic>> {
        let mut left = self.and_level()?;
        while self.inner.peek() == Some(&Token::Bar) {
            self.inner.bump();
            let right = self.and_level()?;
            left = SurfaceFormula::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and_level(&mut self) -> Result<SurfaceFormula, Vec<Diagnostic>> {
        let mut left = self.unary()?;
        while self.inner.peek() == Some(&Token::Amp) {
            self.inner.bump();
            let right = self.unary()?;
            left = SurfaceFormula::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<SurfaceFormula, Vec<Diagnostic>> {
        match self.inner.peek() {
            Some(Token::Bang) => {
                // `!` here is negation; `Name !in dom(p)` never reaches this
                // position because the name is consumed by `primary` first.
                self.inner.bump();
                Ok(SurfaceFormula::Not(Box::new(self.unary()?)))
            }
            _ => self.primary(),
        }
    }

    fn positive_int(&mut self, what: &str) -> Result<u32, Vec<Diagnostic>> {
        match self.inner.bump() {
            Some(Spanned { token: Token::Int(n), .. }) if *n >= 1 => Ok(*n),
            Some(Spanned { token: Token::Int(_), .. }) => {
                Err(self.error(format!("{what} must be positive")))
            }
            _ => Err(self.error(format!("expected a positive integer {what}"))),
        }
    }

    fn primary(&mut self) -> Result<SurfaceFormula, Vec<Diagnostic>> {
        match self.inner.peek() {
            Some(Token::LParen) => {
                self.inner.bump();
                let f = self.or_level()?;
                match self.inner.peek() {
                    Some(Token::RParen) => {
                        self.inner.bump();
                        Ok(f)
                    }
                    _ => Err(self.error("expected `)`")),
                }
            }
            // `|p| = l`
            Some(Token::Bar) => {
                self.inner.bump();
                match self.inner.bump() {
                    Some(Spanned { token: Token::Ident(id), .. }) if id == "p" => {}
                    _ => return Err(self.error("expected `p` in length term `|p|`")),
                }
                if self.inner.peek() != Some(&Token::Bar) {
                    return Err(self.error("expected closing `|` in length term"));
                }
                self.inner.bump();
                if self.inner.peek() != Some(&Token::Equals) {
                    return Err(self.error("expected `=` after `|p|`"));
                }
                self.inner.bump();
                let len = self.positive_int("length")?;
                Ok(SurfaceFormula::Atom(SurfaceAtom::SeqLenEq { len }))
            }
            Some(Token::Ident(id)) if id == "p" => {
                self.inner.bump();
                self.p_form()
            }
            Some(Token::Ident(_)) => {
                let (name, _) = self.inner.ident().map_err(|_| self.error("expected a name"))?;
                // `Name !in dom(p)` / `Name ∉ dom(p)`
                match self.inner.peek() {
                    Some(Token::NotIn) => {
                        self.inner.bump();
                    }
                    Some(Token::Bang) => {
                        self.inner.bump();
                        match self.inner.bump() {
                            Some(Spanned { token: Token::Ident(kw), .. }) if kw == "in" => {}
                            _ => return Err(self.error("expected `in` after `!`")),
                        }
                    }
                    _ => return Err(self.error("expected `!in dom(p)` after the space name")),
                }
                match self.inner.bump() {
                    Some(Spanned { token: Token::Ident(kw), .. }) if kw == "dom" => {}
                    _ => return Err(self.error("expected `dom` in absence term")),
                }
                if self.inner.peek() != Some(&Token::LParen) {
                    return Err(self.error("expected `(` after `dom`"));
                }
                self.inner.bump();
                match self.inner.bump() {
                    Some(Spanned { token: Token::Ident(kw), .. }) if kw == "p" => {}
                    _ => return Err(self.error("expected `p` in `dom(p)`")),
                }
                if self.inner.peek() != Some(&Token::RParen) {
                    return Err(self.error("expected `)` after `dom(p`"));
                }
                self.inner.bump();
                Ok(SurfaceFormula::Atom(SurfaceAtom::ParAbsent { target: name }))
            }
            Some(t) => {
                let t = t.describe();
                Err(self.error(format!("expected a formula term, found {t}")))
            }
            None => Err(self.error("expected a formula term at end of input")),
        }
    }

    /// Terms starting with `p`: `p(i)=…`, `p(Name)=…`, `p in Name`, `p in self`.
    fn p_form(&mut self) -> Result<SurfaceFormula, Vec<Diagnostic>> {
        match self.inner.peek() {
            Some(Token::LParen) => {
                self.inner.bump();
                let argument = self.inner.bump().cloned();
                if self.inner.peek() != Some(&Token::RParen) {
                    return Err(self.error("expected `)` after the argument of `p(..)`"));
                }
                self.inner.bump();
                if self.inner.peek() != Some(&Token::Equals) {
                    return Err(self.error("expected `=` after `p(..)`"));
                }
                self.inner.bump();
                match argument.map(|s| s.token) {
                    Some(Token::Int(index)) => {
                        if index < 1 {
                            return Err(self.error("sequence indices must be positive"));
                        }
                        match self.inner.peek().cloned() {
                            Some(Token::Ident(id)) if id == "p" => {
                                self.inner.bump();
                                if self.inner.peek() != Some(&Token::LParen) {
                                    return Err(self.error("expected `(` after `p`"));
                                }
                                self.inner.bump();
                                let right = self.positive_int("index")?;
                                if self.inner.peek() != Some(&Token::RParen) {
                                    return Err(self.error("expected `)` after the index"));
                                }
                                self.inner.bump();
                                Ok(SurfaceFormula::Atom(SurfaceAtom::SeqIndexIndexEq {
                                    left: index,
                                    right,
                                }))
                            }
                            Some(Token::Ident(target)) => {
                                self.inner.bump();
                                Ok(SurfaceFormula::Atom(SurfaceAtom::SeqIndexEq {
                                    index,
                                    target,
                                }))
                            }
                            _ => Err(self.error("expected a space name or `p(k)` after `=`")),
                        }
                    }
                    Some(Token::Ident(name)) if name != "p" => {
                        match self.inner.peek().cloned() {
                            Some(Token::Int(count)) => {
                                self.inner.bump();
                                if count < 1 {
                                    return Err(self.error("instance counts must be positive"));
                                }
                                Ok(SurfaceFormula::Atom(SurfaceAtom::ParCountEq {
                                    target: name,
                                    count,
                                }))
                            }
                            Some(Token::Ident(id)) if id == "p" => {
                                self.inner.bump();
                                if self.inner.peek() != Some(&Token::LParen) {
                                    return Err(self.error("expected `(` after `p`"));
                                }
                                self.inner.bump();
                                let (right, _) = self
                                    .inner
                                    .ident()
                                    .map_err(|_| self.error("expected a space name"))?;
                                if self.inner.peek() != Some(&Token::RParen) {
                                    return Err(self.error("expected `)` after the space name"));
                                }
                                self.inner.bump();
                                Ok(SurfaceFormula::Atom(SurfaceAtom::ParCountCountEq {
                                    left: name,
                                    right,
                                }))
                            }
                            _ => Err(self.error("expected a count or `p(Name)` after `=`")),
                        }
                    }
                    _ => Err(self.error("expected an index or a space name in `p(..)`")),
                }
            }
            Some(Token::Ident(id)) if id == "in" => {
                self.inner.bump();
                match self.inner.bump() {
                    Some(Spanned { token: Token::Ident(name), .. }) if name == "self" => {
                        Ok(SurfaceFormula::Atom(SurfaceAtom::SelfMember))
                    }
                    Some(Spanned { token: Token::Ident(name), .. }) => {
                        Ok(SurfaceFormula::Atom(SurfaceAtom::Member {
                            target: name.clone(),
                        }))
                    }
                    _ => Err(self.error("expected a space name or `self` after `in`")),
                }
            }
            _ => Err(self.error("expected `(` or `in` after `p`")),
        }
    }
}

/// Resolve a surface formula's space names against a scope.
pub fn resolve_formula(
    surface: &SurfaceFormula,
    scope: &Scope,
    span: Span,
) -> Result<Formula, Vec<Diagnostic>> {
    let mut diagnostics = Vec::new();
    let f = resolve_inner(surface, scope, span, &mut diagnostics);
    match f {
        Some(f) if diagnostics.is_empty() => Ok(f),
        _ => Err(diagnostics),
    }
}

fn resolve_inner(
    surface: &SurfaceFormula,
    scope: &Scope,
    span: Span,
    diagnostics: &mut Vec<Diagnostic>,
) -> Option<Formula> {
    let mut lookup = |name: &str| -> Option<Space> {
        match scope.get(name) {
            Some(s) => Some(s.clone()),
            None => {
                diagnostics.push(Diagnostic {
                    line: span.line,
                    col: span.col,
                    code: DiagnosticCode::UnboundName,
                    message: format!("unbound space name `{name}` in formula"),
                });
                None
            }
        }
    };
    match surface {
        SurfaceFormula::Atom(atom) => {
            let term = match atom {
                SurfaceAtom::SeqIndexEq { index, target } => AtomicTerm::SeqIndexEq {
                    index: *index,
                    target: lookup(target)?,
                },
                SurfaceAtom::SeqIndexIndexEq { left, right } => AtomicTerm::SeqIndexIndexEq {
                    left: *left,
                    right: *right,
                },
                SurfaceAtom::SeqLenEq { len } => AtomicTerm::SeqLenEq { len: *len },
                SurfaceAtom::ParCountEq { target, count } => AtomicTerm::ParCountEq {
                    target: lookup(target)?,
                    count: *count,
                },
                SurfaceAtom::ParCountCountEq { left, right } => AtomicTerm::ParCountCountEq {
                    left: lookup(left)?,
                    right: lookup(right)?,
                },
                SurfaceAtom::ParAbsent { target } => AtomicTerm::ParAbsent {
                    target: lookup(target)?,
                },
                SurfaceAtom::Member { target } => AtomicTerm::AggMember {
                    child: lookup(target)?,
                },
                SurfaceAtom::SelfMember => AtomicTerm::PrimSelf,
            };
            Some(Formula::Atom(term))
        }
        SurfaceFormula::Not(f) => {
            let inner = resolve_inner(f, scope, span, diagnostics)?;
            Some(Formula::not(inner))
        }
        SurfaceFormula::And(a, b) => {
            let left = resolve_inner(a, scope, span, diagnostics);
            let right = resolve_inner(b, scope, span, diagnostics);
            Some(Formula::and(left?, right?))
        }
        SurfaceFormula::Or(a, b) => {
            let left = resolve_inner(a, scope, span, diagnostics);
            let right = resolve_inner(b, scope, span, diagnostics);
            Some(Formula::or(left?, right?))
        }
    }
}

/// Parse, resolve and kind-check formula text against a target space.
pub fn parse_formula(
    text: &str,
    target: &Space,
    scope: &Scope,
) -> Result<Formula, Vec<Diagnostic>> {
    let span = Span::new(1, 0);
    let surface = parse_formula_text(text, span)?;
    let f = resolve_formula(&surface, scope, span)?;
    if let Err(violations) = formula::check_wellformed(&f, target) {
        let atoms = f.atoms();
        return Err(violations
            .into_iter()
            .map(|v| {
                let code = match v.kind {
                    formula::ViolationKind::KindMismatch => DiagnosticCode::KindMismatch,
                    formula::ViolationKind::ForeignSpace => DiagnosticCode::ForeignSpace,
                    formula::ViolationKind::EmptyTarget => DiagnosticCode::Construction,
                };
                let term = atoms
                    .get(v.term_index)
                    .map(|t| super::pretty::atom_text(t, Some(scope)))
                    .unwrap_or_default();
                Diagnostic {
                    line: span.line,
                    col: span.col,
                    code,
                    message: format!("term `{term}`: {}", v.message),
                }
            })
            .collect());
    }
    Ok(f)
}

/// Parse a computon literal: `<A,B>` (sequential), `{A:2, B:1}` (parallel)
/// or a bare name bound to a primitive space.
pub fn parse_computon(text: &str, scope: &Scope) -> Result<Computon, Vec<Diagnostic>> {
    let tokens = lex_line(text, 1).map_err(|d| vec![d])?;
    let mut p = TokenParser::new(&tokens, 1);
    let err = |p: &TokenParser, message: &str| -> Vec<Diagnostic> { p.error(message) };
    let lookup = |p: &TokenParser, name: &str| -> Result<Space, Vec<Diagnostic>> {
        scope.get(name).cloned().ok_or_else(|| {
            vec![Diagnostic {
                line: 1,
                col: p.span().col,
                code: DiagnosticCode::UnboundName,
                message: format!("unbound name `{name}`"),
            }]
        })
    };
    let result = match p.peek() {
        Some(Token::LAngle) => {
            p.bump();
            let mut elems = Vec::new();
            loop {
                let (name, _) = p.ident()?;
                elems.push(lookup(&p, &name)?);
                match p.peek() {
                    Some(Token::Comma) => {
                        p.bump();
                    }
                    Some(Token::RAngle) => {
                        p.bump();
                        break;
                    }
                    _ => return Err(err(&p, "expected `,` or `>` in sequence literal")),
                }
            }
            Computon::sequential(elems).map_err(|e| {
                vec![Diagnostic {
                    line: 1,
                    col: 1,
                    code: DiagnosticCode::Construction,
                    message: e.to_string(),
                }]
            })?
        }
        Some(Token::LBrace) => {
            p.bump();
            let mut entries = Vec::new();
            loop {
                let (name, _) = p.ident()?;
                let space = lookup(&p, &name)?;
                p.expect(&Token::Colon)?;
                let count = match p.bump() {
                    Some(Spanned { token: Token::Int(n), .. }) => *n,
                    _ => return Err(err(&p, "expected an instance count after `:`")),
                };
                entries.push((space, count));
                match p.peek() {
                    Some(Token::Comma) => {
                        p.bump();
                    }
                    Some(Token::RBrace) => {
                        p.bump();
                        break;
                    }
                    _ => return Err(err(&p, "expected `,` or `}` in map literal")),
                }
            }
            Computon::parallel(entries).map_err(|e| {
                vec![Diagnostic {
                    line: 1,
                    col: 1,
                    code: DiagnosticCode::Construction,
                    message: e.to_string(),
                }]
            })?
        }
        Some(Token::Ident(_)) => {
            let (name, span) = p.ident()?;
            let space = lookup(&p, &name)?;
            match space.primitive_label() {
                Some(label) => Computon::primitive(label),
                None => {
                    return Err(vec![Diagnostic {
                        line: 1,
                        col: span.col,
                        code: DiagnosticCode::KindMismatch,
                        message: format!("`{name}` is not a primitive space"),
                    }])
                }
            }
        }
        _ => return Err(err(&p, "expected a computon literal")),
    };
    if p.pos != p.tokens.len() {
        return Err(err(&p, "unexpected trailing input after computon literal"));
    }
    Ok(result)
}
