//! Syntax trees for `.cspace` programs and reduction formula text.

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl Span {
    pub fn new(line: usize, col: usize) -> Span {
        Span { line, col }
    }
}

/// A parsed program: an ordered list of `name = expression` bindings.
#[derive(Debug, Clone)]
pub struct SourceProgram {
    pub bindings: Vec<Binding>,
}

#[derive(Debug, Clone)]
pub struct Binding {
    pub name: String,
    pub name_span: Span,
    pub expr: Expr,
}

#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    Empty,
    Prim(String),
    Name(String),
    Seq(Vec<Expr>),
    Par(Vec<Expr>),
    Agg(Vec<Expr>),
    Reduce(Box<Expr>, FormulaSource),
    Intersect(Box<Expr>, Box<Expr>),
    Difference(Box<Expr>, Box<Expr>),
}

/// A reduction formula as written in source: parsed structure with space
/// names still unresolved.
#[derive(Debug, Clone)]
pub struct FormulaSource {
    pub ast: SurfaceFormula,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceFormula {
    Atom(SurfaceAtom),
    Not(Box<SurfaceFormula>),
    And(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Or(Box<SurfaceFormula>, Box<SurfaceFormula>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceAtom {
    /// `p(i) = Name`
    SeqIndexEq { index: u32, target: String },
    /// `p(i) = p(k)`
    SeqIndexIndexEq { left: u32, right: u32 },
    /// `|p| = l`
    SeqLenEq { len: u32 },
    /// `p(Name) = i`
    ParCountEq { target: String, count: u32 },
    /// `p(Name) = p(Name)`
    ParCountCountEq { left: String, right: String },
    /// `Name !in dom(p)`
    ParAbsent { target: String },
    /// `p in Name`
    Member { target: String },
    /// `p in self`
    SelfMember,
}

// Structural equality ignores spans; round-trip tests compare parsed trees
// produced from differently formatted text.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}
impl Eq for Expr {}

impl PartialEq for ExprKind {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (self, other) {
            (Empty, Empty) => true,
            (Prim(a), Prim(b)) => a == b,
            (Name(a), Name(b)) => a == b,
            (Seq(a), Seq(b)) | (Par(a), Par(b)) | (Agg(a), Agg(b)) => a == b,
            (Reduce(a, fa), Reduce(b, fb)) => a == b && fa.ast == fb.ast,
            (Intersect(a1, a2), Intersect(b1, b2))
            | (Difference(a1, a2), Difference(b1, b2)) => a1 == b1 && a2 == b2,
            _ => false,
        }
    }
}
impl Eq for ExprKind {}

impl PartialEq for Binding {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.expr == other.expr
    }
}
impl Eq for Binding {}

impl PartialEq for SourceProgram {
    fn eq(&self, other: &Self) -> bool {
        self.bindings == other.bindings
    }
}
impl Eq for SourceProgram {}
