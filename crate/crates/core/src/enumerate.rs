//! Membership decision and canonical budgeted enumeration.
//!
//! Spaces are infinite in general; enumeration yields a deterministic,
//! duplicate-free prefix of their members. Sequential spaces are enumerated
//! over finite sequences only, which covers a countable dense subset of an
//! uncountable space — the infinite-length members exist symbolically in the
//! cardinality classification and nowhere else.

use std::collections::HashSet;

use crate::computon::Computon;
use crate::formula::{self, eval_unchecked, Finiteness, Formula};
use crate::space::{Space, SpaceKind};

/// Decide membership of a computon in a space.
pub fn member(p: &Computon, s: &Space) -> bool {
    match s.kind() {
        SpaceKind::Empty => false,
        SpaceKind::Primitive(label) => matches!(p, Computon::Primitive(l) if l == label),
        SpaceKind::Sequential(ops) => match p {
            Computon::Sequential(elems) => {
                !elems.is_empty() && elems.iter().all(|e| ops.contains(e))
            }
            _ => false,
        },
        SpaceKind::Parallel(ops) => match p {
            Computon::Parallel(entries) => {
                !entries.is_empty()
                    && entries.iter().all(|(d, n)| *n >= 1 && ops.contains(d))
            }
            _ => false,
        },
        SpaceKind::Aggregated(children) => children.iter().any(|c| member(p, c)),
        SpaceKind::Reduced { base, formula } => {
            member(p, base) && eval_unchecked(formula, p, base)
        }
        SpaceKind::Intersect(a, b) => member(p, a) && member(p, b),
        SpaceKind::Difference(a, b) => member(p, a) && !member(p, b),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerateError {
    #[error("enumeration budget must be positive")]
    BudgetZero,
    #[error("operation does not apply to this space kind")]
    KindMismatch,
}

/// Raised mid-stream when filtering a reduction consumed too many base
/// members without producing one (the formula may be unsatisfiable over an
/// infinite base).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("filter consumed {consumed} base members without yielding; aborting")]
pub struct StreamAbort {
    pub consumed: u64,
}

/// Default cap on base members consumed per yielded item when filtering a
/// reduced space.
pub const DEFAULT_FILTER_CAP: u64 = 1_000_000;

/// A budgeted, canonically ordered, duplicate-free stream of members.
pub struct EnumerationStream {
    source: Source,
    remaining: usize,
    aborted: bool,
}

/// Enumerate at most `budget` members of `s` in canonical order.
pub fn enumerate(s: &Space, budget: usize) -> Result<EnumerationStream, EnumerateError> {
    enumerate_with_cap(s, budget, DEFAULT_FILTER_CAP)
}

/// [`enumerate`] with an explicit filter cap (base members consumed per
/// yielded item before a reduced-space stream aborts).
pub fn enumerate_with_cap(
    s: &Space,
    budget: usize,
    filter_cap: u64,
) -> Result<EnumerationStream, EnumerateError> {
    if budget == 0 {
        return Err(EnumerateError::BudgetZero);
    }
    Ok(EnumerationStream {
        source: Source::for_space(s, filter_cap),
        remaining: budget,
        aborted: false,
    })
}

impl Iterator for EnumerationStream {
    type Item = Result<Computon, StreamAbort>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.aborted || self.remaining == 0 {
            return None;
        }
        match self.source.pull() {
            Some(Ok(c)) => {
                self.remaining -= 1;
                Some(Ok(c))
            }
            Some(Err(abort)) => {
                self.aborted = true;
                Some(Err(abort))
            }
            None => None,
        }
    }
}

enum Source {
    Empty,
    Once(Option<Computon>),
    Sequential(SeqState),
    Parallel(ParState),
    Aggregated(AggState),
    Materialized(std::vec::IntoIter<Computon>),
    Filtered(FilterState),
}

impl Source {
    fn for_space(s: &Space, cap: u64) -> Source {
        match s.kind() {
            SpaceKind::Empty => Source::Empty,
            SpaceKind::Primitive(label) => {
                Source::Once(Some(Computon::primitive(label.clone())))
            }
            SpaceKind::Sequential(ops) => Source::Sequential(SeqState {
                ops: ops.clone(),
                digits: Vec::new(),
            }),
            SpaceKind::Parallel(ops) => Source::Parallel(ParState {
                ops: ops.clone(),
                sum: 0,
                layer: Vec::new(),
                idx: 0,
            }),
            SpaceKind::Aggregated(children) => Source::Aggregated(AggState {
                children: children
                    .iter()
                    .map(|c| Some(Box::new(Source::for_space(c, cap))))
                    .collect(),
                seen: HashSet::new(),
                next_child: 0,
            }),
            SpaceKind::Reduced { base, formula } => match formula::prove_finite(s) {
                Finiteness::Finite(members) => Source::Materialized(members.into_iter()),
                Finiteness::Unknown => Source::Filtered(FilterState {
                    base: Box::new(Source::for_space(base, cap)),
                    predicate: Predicate::Eval(formula.clone(), base.clone()),
                    cap,
                    consumed_since_yield: 0,
                }),
            },
            SpaceKind::Intersect(a, b) => match formula::finite_members(s) {
                Some(members) => Source::Materialized(members.into_iter()),
                None => Source::Filtered(FilterState {
                    base: Box::new(Source::for_space(a, cap)),
                    predicate: Predicate::MemberOf(b.clone()),
                    cap,
                    consumed_since_yield: 0,
                }),
            },
            SpaceKind::Difference(a, b) => match formula::finite_members(s) {
                Some(members) => Source::Materialized(members.into_iter()),
                None => Source::Filtered(FilterState {
                    base: Box::new(Source::for_space(a, cap)),
                    predicate: Predicate::NotMemberOf(b.clone()),
                    cap,
                    consumed_since_yield: 0,
                }),
            },
        }
    }

    fn pull(&mut self) -> Option<Result<Computon, StreamAbort>> {
        match self {
            Source::Empty => None,
            Source::Once(slot) => slot.take().map(Ok),
            Source::Sequential(st) => st.pull().map(Ok),
            Source::Parallel(st) => st.pull().map(Ok),
            Source::Aggregated(st) => st.pull(),
            Source::Materialized(iter) => iter.next().map(Ok),
            Source::Filtered(st) => st.pull(),
        }
    }
}

/// Sequences by length 1, 2, 3, …, lexicographic over the canonical operand
/// order within each length.
struct SeqState {
    ops: Vec<Space>,
    digits: Vec<usize>,
}

impl SeqState {
    fn pull(&mut self) -> Option<Computon> {
        if self.digits.is_empty() {
            self.digits.push(0);
        } else if !self.advance() {
            self.digits = vec![0; self.digits.len() + 1];
        }
        Some(Computon::Sequential(
            self.digits.iter().map(|&d| self.ops[d].clone()).collect(),
        ))
    }

    fn advance(&mut self) -> bool {
        let n = self.ops.len();
        let mut i = self.digits.len();
        while i > 0 {
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < n {
                return true;
            }
            self.digits[i] = 0;
        }
        false
    }
}

/// Parallel maps by total instance count ascending; within one total, by
/// domain (lexicographic over canonical operand indices) then counts.
struct ParState {
    ops: Vec<Space>,
    sum: u32,
    layer: Vec<Computon>,
    idx: usize,
}

impl ParState {
    fn pull(&mut self) -> Option<Computon> {
        while self.idx >= self.layer.len() {
            self.sum += 1;
            self.layer = par_layer(&self.ops, self.sum);
            self.idx = 0;
        }
        let item = self.layer[self.idx].clone();
        self.idx += 1;
        Some(item)
    }
}

fn par_layer(ops: &[Space], total: u32) -> Vec<Computon> {
    let mut out = Vec::new();
    let mut domain: Vec<usize> = Vec::new();
    subsets_lex(ops.len(), 0, &mut domain, &mut |dom| {
        if dom.is_empty() || (dom.len() as u32) > total {
            return;
        }
        let mut counts = vec![1u32; dom.len()];
        compositions(total, &mut counts, 0, &mut |cs| {
            let entries: Vec<(Space, u32)> = dom
                .iter()
                .zip(cs.iter())
                .map(|(&i, &n)| (ops[i].clone(), n))
                .collect();
            out.push(Computon::Parallel(entries));
        });
    });
    out
}

/// Visit nonempty subsets of `0..n` in lexicographic order of their sorted
/// index lists.
fn subsets_lex(n: usize, start: usize, current: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    for i in start..n {
        current.push(i);
        visit(current);
        subsets_lex(n, i + 1, current, visit);
        current.pop();
    }
}

/// Visit all ways to fill `counts[at..]` with positive integers so the whole
/// vector sums to `total`, in lexicographic order.
fn compositions(total: u32, counts: &mut Vec<u32>, at: usize, visit: &mut impl FnMut(&[u32])) {
    let remaining_slots = (counts.len() - at) as u32;
    if remaining_slots == 0 {
        if total == 0 {
            visit(counts);
        }
        return;
    }
    if total < remaining_slots {
        return;
    }
    let max_here = total - (remaining_slots - 1);
    for v in 1..=max_here {
        counts[at] = v;
        compositions(total - v, counts, at + 1, visit);
    }
}

/// Fair round-robin interleave of child streams with duplicate suppression.
struct AggState {
    children: Vec<Option<Box<Source>>>,
    seen: HashSet<String>,
    next_child: usize,
}

impl AggState {
    fn pull(&mut self) -> Option<Result<Computon, StreamAbort>> {
        let n = self.children.len();
        let mut exhausted_in_a_row = 0;
        while exhausted_in_a_row < n {
            let i = self.next_child % n;
            match &mut self.children[i] {
                None => {
                    self.next_child += 1;
                    exhausted_in_a_row += 1;
                }
                Some(child) => loop {
                    match child.pull() {
                        None => {
                            self.children[i] = None;
                            self.next_child += 1;
                            exhausted_in_a_row += 1;
                            break;
                        }
                        Some(Err(abort)) => return Some(Err(abort)),
                        Some(Ok(c)) => {
                            if self.seen.insert(c.encoding()) {
                                self.next_child += 1;
                                return Some(Ok(c));
                            }
                            // duplicate of an earlier yield; keep pulling
                        }
                    }
                },
            }
        }
        None
    }
}

enum Predicate {
    Eval(Formula, Space),
    MemberOf(Space),
    NotMemberOf(Space),
}

impl Predicate {
    fn test(&self, c: &Computon) -> bool {
        match self {
            Predicate::Eval(f, base) => eval_unchecked(f, c, base),
            Predicate::MemberOf(s) => member(c, s),
            Predicate::NotMemberOf(s) => !member(c, s),
        }
    }
}

struct FilterState {
    base: Box<Source>,
    predicate: Predicate,
    cap: u64,
    consumed_since_yield: u64,
}

impl FilterState {
    fn pull(&mut self) -> Option<Result<Computon, StreamAbort>> {
        loop {
            match self.base.pull() {
                None => return None,
                Some(Err(abort)) => return Some(Err(abort)),
                Some(Ok(c)) => {
                    self.consumed_since_yield += 1;
                    if self.predicate.test(&c) {
                        self.consumed_since_yield = 0;
                        return Some(Ok(c));
                    }
                    if self.consumed_since_yield >= self.cap {
                        return Some(Err(StreamAbort {
                            consumed: self.consumed_since_yield,
                        }));
                    }
                }
            }
        }
    }
}

/// All members of `s` whose structure fits within `bound`: sequence length
/// for sequential spaces, per-operand instance count for parallel spaces,
/// applied recursively through aggregations and reductions. Exhaustive, so
/// it serves as the brute-force oracle for the streaming enumerator.
pub fn bounded_members(s: &Space, bound: u32) -> Result<Vec<Computon>, EnumerateError> {
    match s.kind() {
        SpaceKind::Empty => Err(EnumerateError::KindMismatch),
        SpaceKind::Primitive(label) => Ok(vec![Computon::primitive(label.clone())]),
        SpaceKind::Sequential(ops) => {
            let mut out = Vec::new();
            for len in 1..=bound {
                let mut digits = vec![0usize; len as usize];
                loop {
                    out.push(Computon::Sequential(
                        digits.iter().map(|&d| ops[d].clone()).collect(),
                    ));
                    let mut i = digits.len();
                    let mut advanced = false;
                    while i > 0 {
                        i -= 1;
                        digits[i] += 1;
                        if digits[i] < ops.len() {
                            advanced = true;
                            break;
                        }
                        digits[i] = 0;
                    }
                    if !advanced {
                        break;
                    }
                }
            }
            Ok(out)
        }
        SpaceKind::Parallel(ops) => {
            let mut out = Vec::new();
            for total in
                1..=(bound.saturating_mul(ops.len() as u32)) {
                for c in par_layer(ops, total) {
                    let within = match &c {
                        Computon::Parallel(entries) => entries.iter().all(|(_, n)| *n <= bound),
                        _ => false,
                    };
                    if within {
                        out.push(c);
                    }
                }
            }
            Ok(out)
        }
        SpaceKind::Aggregated(children) => {
            let mut out: Vec<Computon> = Vec::new();
            let mut seen = HashSet::new();
            for c in children {
                for m in bounded_members(c, bound)? {
                    if seen.insert(m.encoding()) {
                        out.push(m);
                    }
                }
            }
            Ok(out)
        }
        SpaceKind::Reduced { base, formula } => Ok(bounded_members(base, bound)?
            .into_iter()
            .filter(|c| eval_unchecked(formula, c, base))
            .collect()),
        SpaceKind::Intersect(a, b) => Ok(bounded_members(a, bound)?
            .into_iter()
            .filter(|c| member(c, b))
            .collect()),
        SpaceKind::Difference(a, b) => Ok(bounded_members(a, bound)?
            .into_iter()
            .filter(|c| !member(c, b))
            .collect()),
    }
}

/// Exact number of members within a structural bound, by exhaustive
/// generation. See [`bounded_members`] for the bound's meaning per kind.
pub fn count_up_to(s: &Space, bound: u32) -> Result<u64, EnumerateError> {
    Ok(bounded_members(s, bound)?.len() as u64)
}
