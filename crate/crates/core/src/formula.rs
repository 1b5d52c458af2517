//! The reductor operator σ: propositional formulas over kind-specific atomic
//! terms, their evaluation against computons, lazy reduction of spaces and
//! syntactic finiteness detection.

use std::collections::BTreeSet;

use crate::computon::Computon;
use crate::enumerate::member;
use crate::space::{Space, SpaceKind};

/// A propositional formula over atomic terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(AtomicTerm),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

/// Atomic terms of the reduction language. Which terms are admissible
/// depends on the kind of the space being reduced; see [`check_wellformed`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AtomicTerm {
    /// `p(i) = S`: the i-th element of a sequence is the given space.
    SeqIndexEq { index: u32, target: Space },
    /// `p(i) = p(k)`: two sequence positions hold the same space.
    SeqIndexIndexEq { left: u32, right: u32 },
    /// `|p| = l`: the sequence has exactly the given length.
    SeqLenEq { len: u32 },
    /// `p(S) = i`: the space is parallelised with exactly i instances.
    ParCountEq { target: Space, count: u32 },
    /// `p(S) = p(T)`: two spaces have the same instance count.
    ParCountCountEq { left: Space, right: Space },
    /// `S !in dom(p)`: the space is absent from the map's domain.
    ParAbsent { target: Space },
    /// `p in S`: membership of one child of an aggregated space.
    AggMember { child: Space },
    /// `p in self`: the superfluous term reducing a primitive space to itself.
    PrimSelf,
}

impl Formula {
    pub fn atom(term: AtomicTerm) -> Formula {
        Formula::Atom(term)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Conjunction of a nonempty list of formulas.
    pub fn conjunction(mut parts: Vec<Formula>) -> Formula {
        let first = parts.remove(0);
        parts.into_iter().fold(first, Formula::and)
    }

    /// Atoms in in-order traversal; indices into this list identify terms in
    /// wellformedness violations.
    pub fn atoms(&self) -> Vec<&AtomicTerm> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a AtomicTerm>) {
        match self {
            Formula::Atom(t) => out.push(t),
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Canonical encoding used inside space keys.
    pub(crate) fn key(&self) -> String {
        match self {
            Formula::Atom(t) => t.key(),
            Formula::Not(f) => format!("!({})", f.key()),
            Formula::And(a, b) => format!("&({},{})", a.key(), b.key()),
            Formula::Or(a, b) => format!("|({},{})", a.key(), b.key()),
        }
    }
}

impl AtomicTerm {
    fn key(&self) -> String {
        match self {
            AtomicTerm::SeqIndexEq { index, target } => {
                format!("i{}={}", index, target.canonical_key())
            }
            AtomicTerm::SeqIndexIndexEq { left, right } => format!("i{left}=i{right}"),
            AtomicTerm::SeqLenEq { len } => format!("l={len}"),
            AtomicTerm::ParCountEq { target, count } => {
                format!("c{}={}", target.canonical_key(), count)
            }
            AtomicTerm::ParCountCountEq { left, right } => {
                format!("c{}=c{}", left.canonical_key(), right.canonical_key())
            }
            AtomicTerm::ParAbsent { target } => format!("a{}", target.canonical_key()),
            AtomicTerm::AggMember { child } => format!("m{}", child.canonical_key()),
            AtomicTerm::PrimSelf => "s".to_string(),
        }
    }
}

/// A wellformedness violation: which atom is wrong and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Index of the offending atom in [`Formula::atoms`] order.
    pub term_index: usize,
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// The term form does not apply to the target space's kind.
    KindMismatch,
    /// The term references a space that is not an operand of the target.
    ForeignSpace,
    /// The target space cannot be reduced at all (empty space).
    EmptyTarget,
}

fn atom_wellformed(term: &AtomicTerm, target: &Space) -> Result<(), (ViolationKind, String)> {
    let operand_err = |what: &str| {
        (
            ViolationKind::ForeignSpace,
            format!("{what} is not an operand of the target space"),
        )
    };
    match target.kind() {
        SpaceKind::Empty => Err((
            ViolationKind::EmptyTarget,
            "the empty space admits no reduction terms".to_string(),
        )),
        SpaceKind::Primitive(_) => match term {
            AtomicTerm::PrimSelf => Ok(()),
            _ => Err((
                ViolationKind::KindMismatch,
                "a primitive space only admits the term `p in self`".to_string(),
            )),
        },
        SpaceKind::Sequential(ops) => match term {
            AtomicTerm::SeqIndexEq { target: t, .. } => {
                if ops.contains(t) {
                    Ok(())
                } else {
                    Err(operand_err("indexed space"))
                }
            }
            AtomicTerm::SeqIndexIndexEq { .. } | AtomicTerm::SeqLenEq { .. } => Ok(()),
            _ => Err((
                ViolationKind::KindMismatch,
                "term form does not apply to a sequential space".to_string(),
            )),
        },
        SpaceKind::Parallel(ops) => match term {
            AtomicTerm::ParCountEq { target: t, .. } | AtomicTerm::ParAbsent { target: t } => {
                if ops.contains(t) {
                    Ok(())
                } else {
                    Err(operand_err("parallelised space"))
                }
            }
            AtomicTerm::ParCountCountEq { left, right } => {
                if !ops.contains(left) {
                    Err(operand_err("left space"))
                } else if !ops.contains(right) {
                    Err(operand_err("right space"))
                } else {
                    Ok(())
                }
            }
            _ => Err((
                ViolationKind::KindMismatch,
                "term form does not apply to a parallel space".to_string(),
            )),
        },
        SpaceKind::Aggregated(children) => match term {
            AtomicTerm::AggMember { child } => {
                if children.contains(child) {
                    Ok(())
                } else {
                    Err(operand_err("membership space"))
                }
            }
            // Terms meaningful for every child are admitted so that
            // reductions distribute over aggregation.
            other => {
                for c in children {
                    atom_wellformed(other, c)?;
                }
                Ok(())
            }
        },
        SpaceKind::Reduced { base, .. } => atom_wellformed(term, base),
        SpaceKind::Intersect(a, b) => {
            atom_wellformed(term, a)?;
            atom_wellformed(term, b)
        }
        SpaceKind::Difference(a, _) => atom_wellformed(term, a),
    }
}

/// Check that every atomic term of `f` matches the kind of `target` and only
/// references its operands. Returns all violations rather than stopping at
/// the first.
pub fn check_wellformed(f: &Formula, target: &Space) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    for (i, term) in f.atoms().into_iter().enumerate() {
        if let Err((kind, message)) = atom_wellformed(term, target) {
            violations.push(Violation {
                term_index: i,
                kind,
                message,
            });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("formula is not well-formed for the target space: {0:?}")]
    IllFormed(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("formula is not well-formed for the target space: {0:?}")]
    IllFormedFormula(Vec<Violation>),
    #[error("the empty space cannot be reduced")]
    UnsupportedOnEmpty,
}

/// Evaluate `f` against a computon. Out-of-range indices and absent domain
/// keys make the affected term false rather than erroring.
pub fn eval(f: &Formula, p: &Computon, target: &Space) -> Result<bool, FormulaError> {
    check_wellformed(f, target).map_err(FormulaError::IllFormed)?;
    Ok(eval_unchecked(f, p, target))
}

pub(crate) fn eval_unchecked(f: &Formula, p: &Computon, target: &Space) -> bool {
    match f {
        Formula::Atom(t) => eval_atom(t, p, target),
        Formula::Not(g) => !eval_unchecked(g, p, target),
        Formula::And(a, b) => eval_unchecked(a, p, target) && eval_unchecked(b, p, target),
        Formula::Or(a, b) => eval_unchecked(a, p, target) || eval_unchecked(b, p, target),
    }
}

fn eval_atom(term: &AtomicTerm, p: &Computon, target: &Space) -> bool {
    match term {
        AtomicTerm::SeqIndexEq { index, target: t } => match p {
            Computon::Sequential(elems) => {
                *index >= 1 && elems.get((*index - 1) as usize) == Some(t)
            }
            _ => false,
        },
        AtomicTerm::SeqIndexIndexEq { left, right } => match p {
            Computon::Sequential(elems) => {
                if *left < 1 || *right < 1 {
                    return false;
                }
                match (
                    elems.get((*left - 1) as usize),
                    elems.get((*right - 1) as usize),
                ) {
                    (Some(a), Some(b)) => a == b,
                    _ => false,
                }
            }
            _ => false,
        },
        AtomicTerm::SeqLenEq { len } => match p {
            Computon::Sequential(elems) => elems.len() as u64 == *len as u64,
            _ => false,
        },
        AtomicTerm::ParCountEq { target: t, count } => p.count_of(t) == Some(*count),
        AtomicTerm::ParCountCountEq { left, right } => match (p.count_of(left), p.count_of(right))
        {
            (Some(a), Some(b)) => a == b,
            _ => false,
        },
        AtomicTerm::ParAbsent { target: t } => match p {
            Computon::Parallel(_) => p.count_of(t).is_none(),
            _ => false,
        },
        AtomicTerm::AggMember { child } => member(p, child),
        AtomicTerm::PrimSelf => member(p, target),
    }
}

/// Apply the reductor σ to a space: the result holds lazily and contains the
/// members of `target` satisfying `f`. Reducing a primitive space requires
/// the formula `p in self` and yields the space itself.
pub fn reduce(target: &Space, f: &Formula) -> Result<Space, ReduceError> {
    if target.is_empty_space() {
        return Err(ReduceError::UnsupportedOnEmpty);
    }
    check_wellformed(f, target).map_err(ReduceError::IllFormedFormula)?;
    if target.is_primitive() {
        if *f == Formula::Atom(AtomicTerm::PrimSelf) {
            return Ok(target.clone());
        }
        return Err(ReduceError::IllFormedFormula(vec![Violation {
            term_index: 0,
            kind: ViolationKind::KindMismatch,
            message: "a primitive space is only reduced to itself via `p in self`".to_string(),
        }]));
    }
    Ok(Space::from_kind(SpaceKind::Reduced {
        base: target.clone(),
        formula: f.clone(),
    }))
}

/// Result of [`prove_finite`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finiteness {
    /// The space is provably finite, with its members materialized in
    /// canonical enumeration order.
    Finite(Vec<Computon>),
    /// Finiteness could not be established syntactically.
    Unknown,
}

/// Decide finiteness of a space syntactically and materialize its members
/// when successful. For reductions this succeeds when the formula's
/// disjunctive normal form pins the search in every conjunct: a length pin
/// for sequential bases, and a count pin or absence for every operand of
/// parallel bases.
pub fn prove_finite(s: &Space) -> Finiteness {
    match finite_members(s) {
        Some(members) => Finiteness::Finite(members),
        None => Finiteness::Unknown,
    }
}

// Caps keeping DNF distribution and candidate generation bounded.
const DNF_ATOM_CAP: usize = 64;
const DNF_CONJUNCT_CAP: usize = 4096;
const MATERIALIZE_CANDIDATE_CAP: u64 = 200_000;

/// Materialize the full member set of a space when it is provably finite.
/// Returns members sorted in canonical enumeration order.
pub fn finite_members(s: &Space) -> Option<Vec<Computon>> {
    let members = finite_members_inner(s)?;
    let mut members: Vec<Computon> = members.into_iter().map(|c| c.0).collect();
    members.sort_by_cached_key(|c| c.stream_rank());
    Some(members)
}

fn finite_members_inner(s: &Space) -> Option<BTreeSet<ComputonByEncoding>> {
    match s.kind() {
        SpaceKind::Empty => Some(BTreeSet::new()),
        SpaceKind::Primitive(label) => {
            let mut set = BTreeSet::new();
            set.insert(ComputonByEncoding::new(Computon::primitive(label.clone())));
            Some(set)
        }
        SpaceKind::Sequential(_) | SpaceKind::Parallel(_) => None,
        SpaceKind::Aggregated(children) => {
            let mut out = BTreeSet::new();
            for c in children {
                out.extend(finite_members_inner(c)?);
            }
            Some(out)
        }
        SpaceKind::Reduced { .. } => {
            let (root, formulas) = reduced_chain(s);
            let combined = Formula::conjunction(formulas.into_iter().cloned().collect());
            if let Some(base_members) = finite_members_inner(root) {
                return Some(
                    base_members
                        .into_iter()
                        .filter(|c| eval_unchecked(&combined, &c.0, root))
                        .collect(),
                );
            }
            match root.kind() {
                SpaceKind::Sequential(ops) => {
                    materialize_pinned_sequential(root, ops, &combined)
                }
                SpaceKind::Parallel(ops) => materialize_pinned_parallel(root, ops, &combined),
                _ => None,
            }
        }
        SpaceKind::Intersect(a, b) => {
            if let Some(ms) = finite_members_inner(a) {
                Some(ms.into_iter().filter(|c| member(&c.0, b)).collect())
            } else {
                finite_members_inner(b)
                    .map(|ms| ms.into_iter().filter(|c| member(&c.0, a)).collect())
            }
        }
        SpaceKind::Difference(a, b) => finite_members_inner(a)
            .map(|ms| ms.into_iter().filter(|c| !member(&c.0, b)).collect()),
    }
}

/// Strip a stack of reductions down to its non-reduced root, collecting the
/// formulas along the way (each binds its own free variable, so the stack is
/// one big conjunction).
fn reduced_chain(s: &Space) -> (&Space, Vec<&Formula>) {
    let mut formulas = Vec::new();
    let mut cur = s;
    while let SpaceKind::Reduced { base, formula } = cur.kind() {
        formulas.push(formula);
        cur = base;
    }
    (cur, formulas)
}

/// A literal in a DNF conjunct.
#[derive(Clone)]
struct Literal {
    positive: bool,
    atom: AtomicTerm,
}

/// Convert to DNF by negation pushing and distribution. `None` when the
/// formula exceeds the atom cap or distribution exceeds the conjunct cap.
fn to_dnf(f: &Formula) -> Option<Vec<Vec<Literal>>> {
    if f.atoms().len() > DNF_ATOM_CAP {
        return None;
    }
    fn go(f: &Formula, negated: bool) -> Option<Vec<Vec<Literal>>> {
        match f {
            Formula::Atom(t) => Some(vec![vec![Literal {
                positive: !negated,
                atom: t.clone(),
            }]]),
            Formula::Not(g) => go(g, !negated),
            Formula::And(a, b) if !negated => distribute(go(a, false)?, go(b, false)?),
            Formula::And(a, b) => {
                // ¬(a ∧ b) = ¬a ∨ ¬b
                let mut left = go(a, true)?;
                left.extend(go(b, true)?);
                Some(left)
            }
            Formula::Or(a, b) if !negated => {
                let mut left = go(a, false)?;
                left.extend(go(b, false)?);
                Some(left)
            }
            Formula::Or(a, b) => distribute(go(a, true)?, go(b, true)?),
        }
    }
    fn distribute(
        left: Vec<Vec<Literal>>,
        right: Vec<Vec<Literal>>,
    ) -> Option<Vec<Vec<Literal>>> {
        if left.len().saturating_mul(right.len()) > DNF_CONJUNCT_CAP {
            return None;
        }
        let mut out = Vec::with_capacity(left.len() * right.len());
        for l in &left {
            for r in &right {
                let mut conj = l.clone();
                conj.extend(r.iter().cloned());
                out.push(conj);
            }
        }
        Some(out)
    }
    go(f, false)
}

fn materialize_pinned_sequential(
    root: &Space,
    ops: &[Space],
    f: &Formula,
) -> Option<BTreeSet<ComputonByEncoding>> {
    let dnf = to_dnf(f)?;
    let mut lengths: BTreeSet<u32> = BTreeSet::new();
    for conjunct in &dnf {
        let pin = conjunct.iter().find_map(|lit| match &lit.atom {
            AtomicTerm::SeqLenEq { len } if lit.positive => Some(*len),
            _ => None,
        });
        let len = pin?;
        lengths.insert(len);
    }
    let n = ops.len() as u64;
    let mut total: u64 = 0;
    for len in &lengths {
        total = total.saturating_add(n.saturating_pow(*len));
        if total > MATERIALIZE_CANDIDATE_CAP {
            return None;
        }
    }
    let mut out = BTreeSet::new();
    for len in lengths {
        if len == 0 {
            continue;
        }
        let mut digits = vec![0usize; len as usize];
        loop {
            let candidate =
                Computon::Sequential(digits.iter().map(|&d| ops[d].clone()).collect());
            if eval_unchecked(f, &candidate, root) {
                out.insert(ComputonByEncoding::new(candidate));
            }
            // odometer over operand indices
            let mut i = digits.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < ops.len() {
                    break;
                }
                digits[i] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    Some(out)
}

fn materialize_pinned_parallel(
    root: &Space,
    ops: &[Space],
    f: &Formula,
) -> Option<BTreeSet<ComputonByEncoding>> {
    let dnf = to_dnf(f)?;
    let mut out = BTreeSet::new();
    for conjunct in &dnf {
        let mut pins: Vec<Option<u32>> = vec![None; ops.len()];
        let mut absents: Vec<bool> = vec![false; ops.len()];
        let mut conflict = false;
        for lit in conjunct {
            if !lit.positive {
                continue;
            }
            match &lit.atom {
                AtomicTerm::ParCountEq { target, count } => {
                    if let Some(i) = ops.iter().position(|o| o == target) {
                        match pins[i] {
                            Some(existing) if existing != *count => conflict = true,
                            _ => pins[i] = Some(*count),
                        }
                    }
                }
                AtomicTerm::ParAbsent { target } => {
                    if let Some(i) = ops.iter().position(|o| o == target) {
                        absents[i] = true;
                    }
                }
                _ => {}
            }
        }
        // Every operand must be either count-pinned or excluded.
        let covered = (0..ops.len()).all(|i| pins[i].is_some() || absents[i]);
        if !covered {
            return None;
        }
        if conflict || (0..ops.len()).any(|i| pins[i].is_some() && absents[i]) {
            continue;
        }
        let entries: Vec<(Space, u32)> = ops
            .iter()
            .zip(&pins)
            .filter_map(|(op, pin)| pin.map(|n| (op.clone(), n)))
            .collect();
        if entries.is_empty() {
            continue;
        }
        let candidate = Computon::Parallel(entries);
        if eval_unchecked(f, &candidate, root) {
            out.insert(ComputonByEncoding::new(candidate));
        }
    }
    Some(out)
}

/// Wrapper ordering computons by their canonical encoding so they can live
/// in a `BTreeSet` during materialization.
#[derive(Clone)]
struct ComputonByEncoding(Computon, String);

impl ComputonByEncoding {
    fn new(c: Computon) -> Self {
        let enc = c.encoding();
        ComputonByEncoding(c, enc)
    }
}

impl PartialEq for ComputonByEncoding {
    fn eq(&self, other: &Self) -> bool {
        self.1 == other.1
    }
}
impl Eq for ComputonByEncoding {}
impl PartialOrd for ComputonByEncoding {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ComputonByEncoding {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.1.cmp(&other.1)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::compose::{agg, par, seq};
    use crate::enumerate::member;

    fn prims(n: usize) -> Vec<Space> {
        (1..=n).map(|i| Space::primitive(format!("S{i}"))).collect()
    }

    fn index_eq(i: u32, t: &Space) -> Formula {
        Formula::atom(AtomicTerm::SeqIndexEq { index: i, target: t.clone() })
    }

    fn count_eq(t: &Space, n: u32) -> Formula {
        Formula::atom(AtomicTerm::ParCountEq { target: t.clone(), count: n })
    }

    fn len_eq(l: u32) -> Formula {
        Formula::atom(AtomicTerm::SeqLenEq { len: l })
    }

    #[test]
    fn sequential_terms_check_on_sequential_spaces() {
        let p = prims(5);
        let s = seq(&p).unwrap();
        let f = Formula::and(
            index_eq(1, &p[2]),
            Formula::atom(AtomicTerm::SeqIndexIndexEq { left: 2, right: 4 }),
        );
        assert!(check_wellformed(&f, &s).is_ok());
    }

    #[test]
    fn parallel_terms_are_rejected_on_sequential_spaces() {
        let p = prims(5);
        let s = seq(&p).unwrap();
        let f = count_eq(&p[2], 1);
        let violations = check_wellformed(&f, &s).unwrap_err();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].kind, ViolationKind::KindMismatch);
    }

    #[test]
    fn foreign_spaces_are_rejected() {
        let p = prims(2);
        let s = seq(&p).unwrap();
        let foreign = Space::primitive("S9");
        let violations = check_wellformed(&index_eq(1, &foreign), &s).unwrap_err();
        assert_eq!(violations[0].kind, ViolationKind::ForeignSpace);
        assert_eq!(violations[0].term_index, 0);
    }

    #[test]
    fn eval_indexed_conjunction() {
        let p = prims(5);
        let s = seq(&p).unwrap();
        let f = Formula::and(
            index_eq(1, &p[2]),
            Formula::atom(AtomicTerm::SeqIndexIndexEq { left: 2, right: 4 }),
        );
        let c = Computon::sequential(vec![
            p[2].clone(),
            p[1].clone(),
            p[0].clone(),
            p[1].clone(),
        ])
        .unwrap();
        assert_eq!(eval(&f, &c, &s), Ok(true));
    }

    #[test]
    fn eval_count_conjunction() {
        let p = prims(5);
        let s = par(&p).unwrap();
        let f = Formula::and(
            count_eq(&p[2], 1),
            Formula::atom(AtomicTerm::ParCountCountEq {
                left: p[1].clone(),
                right: p[3].clone(),
            }),
        );
        let c = Computon::parallel(vec![
            (p[1].clone(), 2),
            (p[2].clone(), 1),
            (p[3].clone(), 2),
        ])
        .unwrap();
        assert_eq!(eval(&f, &c, &s), Ok(true));
    }

    #[test]
    fn eval_length_mismatch_is_false() {
        let p = prims(5);
        let s = seq(&p).unwrap();
        let c = Computon::sequential(vec![
            p[2].clone(),
            p[2].clone(),
            p[0].clone(),
            p[2].clone(),
            p[0].clone(),
        ])
        .unwrap();
        assert_eq!(eval(&len_eq(4), &c, &s), Ok(false));
    }

    #[test]
    fn out_of_range_terms_are_false_not_errors() {
        let p = prims(2);
        let s = seq(&p).unwrap();
        let c = Computon::sequential(vec![p[0].clone()]).unwrap();
        assert_eq!(eval(&index_eq(3, &p[0]), &c, &s), Ok(false));
        let q = par(&p).unwrap();
        let m = Computon::parallel(vec![(p[0].clone(), 1)]).unwrap();
        assert_eq!(eval(&count_eq(&p[1], 1), &m, &q), Ok(false));
        let cc = Formula::atom(AtomicTerm::ParCountCountEq {
            left: p[0].clone(),
            right: p[1].clone(),
        });
        assert_eq!(eval(&cc, &m, &q), Ok(false));
    }

    #[test]
    fn reduction_to_a_singleton_sequence() {
        let p = prims(5);
        let s = seq(&p).unwrap();
        let f = Formula::conjunction(vec![
            index_eq(1, &p[2]),
            index_eq(2, &p[1]),
            index_eq(3, &p[0]),
            index_eq(4, &p[1]),
            len_eq(4),
        ]);
        let r = reduce(&s, &f).unwrap();
        let expected = Computon::sequential(vec![
            p[2].clone(),
            p[1].clone(),
            p[0].clone(),
            p[1].clone(),
        ])
        .unwrap();
        assert_eq!(prove_finite(&r), Finiteness::Finite(vec![expected]));
    }

    #[test]
    fn reducing_an_aggregate_to_one_child() {
        let p = prims(3);
        let a = agg(&p).unwrap();
        let f = Formula::atom(AtomicTerm::AggMember { child: p[1].clone() });
        let r = reduce(&a, &f).unwrap();
        assert!(member(&Computon::primitive("S2"), &r));
        assert!(!member(&Computon::primitive("S1"), &r));
        assert_eq!(
            prove_finite(&r),
            Finiteness::Finite(vec![Computon::primitive("S2")])
        );
    }

    #[test]
    fn primitives_reduce_to_themselves() {
        let p = Space::primitive("S1");
        let r = reduce(&p, &Formula::atom(AtomicTerm::PrimSelf)).unwrap();
        assert_eq!(r, p);
        let other = Formula::and(
            Formula::atom(AtomicTerm::PrimSelf),
            Formula::atom(AtomicTerm::PrimSelf),
        );
        assert!(matches!(reduce(&p, &other), Err(ReduceError::IllFormedFormula(_))));
    }

    #[test]
    fn reducing_empty_is_unsupported() {
        assert_eq!(
            reduce(&Space::empty(), &len_eq(1)),
            Err(ReduceError::UnsupportedOnEmpty)
        );
    }

    #[test]
    fn count_pins_on_every_operand_prove_finiteness() {
        let p = prims(2);
        let q = par(&p).unwrap();
        let f = Formula::and(count_eq(&p[0], 1), count_eq(&p[1], 1));
        let r = reduce(&q, &f).unwrap();
        let expected = Computon::parallel(vec![(p[0].clone(), 1), (p[1].clone(), 1)]).unwrap();
        assert_eq!(prove_finite(&r), Finiteness::Finite(vec![expected]));
    }

    #[test]
    fn unpinned_sequential_reductions_stay_unknown() {
        let p = prims(5);
        let s = seq(&p).unwrap();
        let f = Formula::and(
            index_eq(1, &p[2]),
            Formula::atom(AtomicTerm::SeqIndexIndexEq { left: 2, right: 4 }),
        );
        let r = reduce(&s, &f).unwrap();
        assert_eq!(prove_finite(&r), Finiteness::Unknown);
    }

    // Independent oracle: generate every length-2 sequence over the operand
    // set by hand and keep those satisfying the formula.
    #[test]
    fn length_pins_materialize_exactly_the_bounded_set() {
        let p = prims(2);
        let s = seq(&p).unwrap();
        let f = len_eq(2);
        let r = reduce(&s, &f).unwrap();

        let mut expected = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                expected.push(
                    Computon::sequential(vec![p[a].clone(), p[b].clone()]).unwrap(),
                );
            }
        }
        match prove_finite(&r) {
            Finiteness::Finite(members) => {
                assert_eq!(members.len(), 4);
                for m in &expected {
                    assert!(members.contains(m));
                }
            }
            Finiteness::Unknown => panic!("length-pinned reduction must be finite"),
        }
    }

    #[test]
    fn disjunctions_of_pins_materialize() {
        let p = prims(2);
        let s = seq(&p).unwrap();
        let f = Formula::or(len_eq(1), len_eq(2));
        let r = reduce(&s, &f).unwrap();
        match prove_finite(&r) {
            Finiteness::Finite(members) => assert_eq!(members.len(), 6),
            Finiteness::Unknown => panic!("both branches are pinned"),
        }
    }

    #[test]
    fn negated_pins_filter_within_the_pinned_length() {
        let p = prims(2);
        let s = seq(&p).unwrap();
        let f = Formula::and(Formula::not(index_eq(1, &p[0])), len_eq(1));
        let r = reduce(&s, &f).unwrap();
        assert_eq!(
            prove_finite(&r),
            Finiteness::Finite(vec![Computon::sequential(vec![p[1].clone()]).unwrap()])
        );
    }

    #[test]
    fn absence_pins_prove_parallel_finiteness() {
        let p = prims(5);
        let q = par(&p).unwrap();
        let f = Formula::conjunction(vec![
            count_eq(&p[0], 1),
            count_eq(&p[1], 2),
            count_eq(&p[2], 1),
            Formula::atom(AtomicTerm::ParAbsent { target: p[3].clone() }),
            Formula::atom(AtomicTerm::ParAbsent { target: p[4].clone() }),
        ]);
        let r = reduce(&q, &f).unwrap();
        let expected = Computon::parallel(vec![
            (p[0].clone(), 1),
            (p[1].clone(), 2),
            (p[2].clone(), 1),
        ])
        .unwrap();
        assert_eq!(prove_finite(&r), Finiteness::Finite(vec![expected]));
    }

    #[test]
    fn partially_pinned_parallel_reductions_stay_unknown() {
        let p = prims(3);
        let q = par(&p).unwrap();
        let f = Formula::and(count_eq(&p[0], 1), count_eq(&p[1], 1));
        let r = reduce(&q, &f).unwrap();
        assert_eq!(prove_finite(&r), Finiteness::Unknown);
    }

    #[test]
    fn oversized_formulas_fall_back_to_unknown() {
        let p = prims(2);
        let s = seq(&p).unwrap();
        let mut f = len_eq(1);
        for _ in 0..70 {
            f = Formula::and(f, len_eq(1));
        }
        let r = reduce(&s, &f).unwrap();
        assert_eq!(prove_finite(&r), Finiteness::Unknown);
    }

    #[test]
    fn contradictory_pins_materialize_to_nothing() {
        let p = prims(2);
        let q = par(&p).unwrap();
        let f = Formula::conjunction(vec![
            count_eq(&p[0], 1),
            count_eq(&p[0], 2),
            count_eq(&p[1], 1),
        ]);
        let r = reduce(&q, &f).unwrap();
        assert_eq!(prove_finite(&r), Finiteness::Finite(vec![]));
    }

    #[test]
    fn stacked_reductions_combine_their_formulas() {
        let p = prims(2);
        let s = seq(&p).unwrap();
        let outer = reduce(&reduce(&s, &index_eq(1, &p[0])).unwrap(), &len_eq(1)).unwrap();
        assert_eq!(
            prove_finite(&outer),
            Finiteness::Finite(vec![Computon::sequential(vec![p[0].clone()]).unwrap()])
        );
    }
}
