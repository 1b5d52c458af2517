//! Computon spaces as immutable expression trees.
//!
//! A space is never materialized as a set of members; it is an intensional
//! description (sequential and parallel spaces are infinite). Membership,
//! enumeration and reduction are decision procedures over this tree.

use std::fmt;
use std::sync::Arc;

use crate::formula::{self, Formula};

/// An intensional computon space.
///
/// Values are immutable and cheap to clone (shared tree). Equality, hashing
/// and ordering all go through the canonical key, so two spaces built from
/// the same operand multiset compare equal regardless of argument order.
#[derive(Clone)]
pub struct Space {
    inner: Arc<SpaceInner>,
}

struct SpaceInner {
    kind: SpaceKind,
    key: String,
}

/// Structural variants of a space. Obtained through [`Space::kind`]; spaces
/// are only constructed through the checked constructors in [`crate::compose`]
/// and [`crate::formula::reduce`].
pub enum SpaceKind {
    /// The space with no computons at all.
    Empty,
    /// Singleton space holding one opaque primitive computon.
    Primitive(String),
    /// All finite sequences over the operand set (canonically ordered, ≥2 distinct).
    Sequential(Vec<Space>),
    /// All nonempty partial maps from the operand set to positive instance counts.
    Parallel(Vec<Space>),
    /// Union of the operand spaces; introduces no new computons.
    Aggregated(Vec<Space>),
    /// Lazy selection of `base` by a propositional formula.
    Reduced { base: Space, formula: Formula },
    /// Symbolic intersection (law-testing combinator).
    Intersect(Space, Space),
    /// Symbolic difference (law-testing combinator).
    Difference(Space, Space),
}

impl Space {
    pub fn empty() -> Space {
        Space::from_kind(SpaceKind::Empty)
    }

    pub fn primitive(label: impl Into<String>) -> Space {
        Space::from_kind(SpaceKind::Primitive(label.into()))
    }

    pub(crate) fn from_kind(kind: SpaceKind) -> Space {
        let key = encode_key(&kind);
        Space {
            inner: Arc::new(SpaceInner { kind, key }),
        }
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.inner.kind
    }

    /// Deterministic identity token: equal keys iff the spaces are
    /// structurally equal after operand canonicalization. The encoding is
    /// stable across process runs.
    pub fn canonical_key(&self) -> &str {
        &self.inner.key
    }

    /// Composition operand set (empty for leaves, reductions and combinators).
    pub fn operands(&self) -> &[Space] {
        match self.kind() {
            SpaceKind::Sequential(ops) | SpaceKind::Parallel(ops) | SpaceKind::Aggregated(ops) => {
                ops
            }
            _ => &[],
        }
    }

    pub fn is_empty_space(&self) -> bool {
        matches!(self.kind(), SpaceKind::Empty)
    }

    pub fn is_primitive(&self) -> bool {
        matches!(self.kind(), SpaceKind::Primitive(_))
    }

    pub fn primitive_label(&self) -> Option<&str> {
        match self.kind() {
            SpaceKind::Primitive(label) => Some(label),
            _ => None,
        }
    }

    /// Name of the structural kind, as used in CLI output.
    pub fn kind_name(&self) -> &'static str {
        match self.kind() {
            SpaceKind::Empty => "empty",
            SpaceKind::Primitive(_) => "primitive",
            SpaceKind::Sequential(_) => "sequential",
            SpaceKind::Parallel(_) => "parallel",
            SpaceKind::Aggregated(_) => "aggregated",
            SpaceKind::Reduced { .. } => "reduced",
            SpaceKind::Intersect(_, _) => "intersect",
            SpaceKind::Difference(_, _) => "difference",
        }
    }
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.key == other.inner.key
    }
}

impl Eq for Space {}

impl std::hash::Hash for Space {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.key.hash(state);
    }
}

impl PartialOrd for Space {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Space {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.inner.key.cmp(&other.inner.key)
    }
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space({})", crate::dsl::pretty::space_text(self, None))
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::pretty::space_text(self, None))
    }
}

// Key grammar: `E`, `P<len>:<label>`, `S(..)`, `Q(..)`, `A(..)`,
// `R(<base>;<formula>)`, `I(..)`, `D(..)`. Labels are length-prefixed so the
// encoding is injective without escaping.
fn encode_key(kind: &SpaceKind) -> String {
    fn join(ops: &[Space]) -> String {
        let keys: Vec<&str> = ops.iter().map(|s| s.canonical_key()).collect();
        keys.join(",")
    }
    match kind {
        SpaceKind::Empty => "E".to_string(),
        SpaceKind::Primitive(label) => format!("P{}:{}", label.len(), label),
        SpaceKind::Sequential(ops) => format!("S({})", join(ops)),
        SpaceKind::Parallel(ops) => format!("Q({})", join(ops)),
        SpaceKind::Aggregated(ops) => format!("A({})", join(ops)),
        SpaceKind::Reduced { base, formula } => {
            format!("R({};{})", base.canonical_key(), formula.key())
        }
        SpaceKind::Intersect(a, b) => format!("I({},{})", a.canonical_key(), b.canonical_key()),
        SpaceKind::Difference(a, b) => format!("D({},{})", a.canonical_key(), b.canonical_key()),
    }
}

/// Deterministic identity token for a space. Free-function form of
/// [`Space::canonical_key`].
pub fn canonical_key(s: &Space) -> String {
    s.canonical_key().to_string()
}

/// Symbolic cardinality of a space.
///
/// `UpperBound` is used for reductions and combinators whose exact size is
/// formula-dependent; it only ever wraps one of the two infinite classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cardinality {
    Finite(u64),
    CountablyInfinite,
    Continuum,
    UpperBound(InfiniteCardinal),
}

/// The two infinite cardinality classes a bound can name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InfiniteCardinal {
    CountablyInfinite,
    Continuum,
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "finite({n})"),
            Cardinality::CountablyInfinite => write!(f, "countably-infinite"),
            Cardinality::Continuum => write!(f, "continuum"),
            Cardinality::UpperBound(InfiniteCardinal::CountablyInfinite) => {
                write!(f, "at-most(countably-infinite)")
            }
            Cardinality::UpperBound(InfiniteCardinal::Continuum) => write!(f, "at-most(continuum)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("order is undefined for the empty space")]
    Undefined,
}

/// What a space directly subsumes: the spaces appearing in the domain or
/// codomain of its member computons, taken one level deep.
pub(crate) enum Subsumed {
    /// Empty and primitive spaces subsume nothing.
    Nothing,
    /// The (possibly over-approximated) set of directly subsumed spaces.
    Spaces(Vec<Space>),
    /// A reduction materialized to zero members; extensionally empty.
    MaterializedEmpty,
}

pub(crate) fn direct_subsumed(s: &Space) -> Subsumed {
    match s.kind() {
        SpaceKind::Empty | SpaceKind::Primitive(_) => Subsumed::Nothing,
        SpaceKind::Sequential(ops) | SpaceKind::Parallel(ops) | SpaceKind::Aggregated(ops) => {
            Subsumed::Spaces(ops.clone())
        }
        SpaceKind::Reduced { .. } | SpaceKind::Intersect(_, _) | SpaceKind::Difference(_, _) => {
            match formula::finite_members(s) {
                Some(members) if members.is_empty() => Subsumed::MaterializedEmpty,
                Some(members) => {
                    let mut out: Vec<Space> = Vec::new();
                    for m in &members {
                        for t in m.occurring_spaces() {
                            if !out.contains(t) {
                                out.push(t.clone());
                            }
                        }
                    }
                    out.sort();
                    Subsumed::Spaces(out)
                }
                // Not materializable: fall back to the structural
                // over-approximation through the underlying operand sets.
                None => match s.kind() {
                    SpaceKind::Reduced { base, .. } => direct_subsumed(base),
                    SpaceKind::Intersect(a, b) => {
                        match (direct_subsumed(a), direct_subsumed(b)) {
                            (Subsumed::Spaces(mut va), Subsumed::Spaces(vb)) => {
                                for t in vb {
                                    if !va.contains(&t) {
                                        va.push(t);
                                    }
                                }
                                va.sort();
                                Subsumed::Spaces(va)
                            }
                            (Subsumed::Spaces(v), _) | (_, Subsumed::Spaces(v)) => {
                                Subsumed::Spaces(v)
                            }
                            _ => Subsumed::Nothing,
                        }
                    }
                    SpaceKind::Difference(a, _) => direct_subsumed(a),
                    _ => unreachable!(),
                },
            }
        }
    }
}

/// Whether `parent` subsumes `child`: some member computon of `parent` has
/// `child` in its domain or codomain. Subsumption is one level deep, never
/// transitive.
pub fn subsumes(parent: &Space, child: &Space) -> bool {
    match direct_subsumed(parent) {
        Subsumed::Spaces(v) => v.contains(child),
        _ => false,
    }
}

/// Hierarchical order Θ of a space: 0 for primitives, otherwise one more
/// than the maximum order over the directly subsumed spaces.
///
/// Reductions use their materialized members when finiteness can be proven
/// and the base's operand set otherwise. A materialized reduction whose
/// members are all primitive computons subsumes nothing and sits at order 0.
pub fn order(s: &Space) -> Result<u32, OrderError> {
    match s.kind() {
        SpaceKind::Empty => Err(OrderError::Undefined),
        SpaceKind::Primitive(_) => Ok(0),
        _ => match direct_subsumed(s) {
            Subsumed::Nothing | Subsumed::MaterializedEmpty => Err(OrderError::Undefined),
            Subsumed::Spaces(children) => {
                let mut max: Option<u32> = None;
                for c in &children {
                    if let Ok(k) = order(c) {
                        max = Some(max.map_or(k, |m| m.max(k)));
                    }
                }
                match max {
                    Some(m) => Ok(m + 1),
                    // Every member is a primitive computon; the space behaves
                    // like a primitive singleton.
                    None if !children.is_empty() => Err(OrderError::Undefined),
                    None => Ok(0),
                }
            }
        },
    }
}

fn upper(card: &Cardinality) -> Option<InfiniteCardinal> {
    match card {
        Cardinality::Finite(_) => None,
        Cardinality::CountablyInfinite => Some(InfiniteCardinal::CountablyInfinite),
        Cardinality::Continuum => Some(InfiniteCardinal::Continuum),
        Cardinality::UpperBound(b) => Some(*b),
    }
}

/// Symbolic cardinality classification.
///
/// Sequential spaces have the cardinality of the continuum and parallel
/// spaces are countably infinite. Aggregations take the maximum of their
/// children (materializing exactly when every child is finite); reductions
/// and combinators report an upper bound unless finiteness can be proven.
pub fn cardinality(s: &Space) -> Cardinality {
    match s.kind() {
        SpaceKind::Empty => Cardinality::Finite(0),
        SpaceKind::Primitive(_) => Cardinality::Finite(1),
        SpaceKind::Sequential(_) => Cardinality::Continuum,
        SpaceKind::Parallel(_) => Cardinality::CountablyInfinite,
        SpaceKind::Aggregated(ops) => {
            if let Some(members) = formula::finite_members(s) {
                return Cardinality::Finite(members.len() as u64);
            }
            let cards: Vec<Cardinality> = ops.iter().map(cardinality).collect();
            let max_upper = cards
                .iter()
                .filter_map(upper)
                .max()
                .expect("an aggregate that cannot be materialized has an infinite child");
            let exact = cards.iter().any(|c| match c {
                Cardinality::CountablyInfinite => {
                    max_upper == InfiniteCardinal::CountablyInfinite
                }
                Cardinality::Continuum => max_upper == InfiniteCardinal::Continuum,
                _ => false,
            });
            if exact {
                match max_upper {
                    InfiniteCardinal::CountablyInfinite => Cardinality::CountablyInfinite,
                    InfiniteCardinal::Continuum => Cardinality::Continuum,
                }
            } else {
                Cardinality::UpperBound(max_upper)
            }
        }
        SpaceKind::Reduced { base, .. } => match formula::finite_members(s) {
            Some(members) => Cardinality::Finite(members.len() as u64),
            None => match upper(&cardinality(base)) {
                Some(b) => Cardinality::UpperBound(b),
                None => unreachable!("finite bases always materialize"),
            },
        },
        SpaceKind::Intersect(a, b) => match formula::finite_members(s) {
            Some(members) => Cardinality::Finite(members.len() as u64),
            None => {
                let ba = upper(&cardinality(a)).expect("finite sides materialize");
                let bb = upper(&cardinality(b)).expect("finite sides materialize");
                Cardinality::UpperBound(ba.min(bb))
            }
        },
        SpaceKind::Difference(a, _) => match formula::finite_members(s) {
            Some(members) => Cardinality::Finite(members.len() as u64),
            None => {
                let ba = upper(&cardinality(a)).expect("finite left sides materialize");
                Cardinality::UpperBound(ba)
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compose::{agg, par, seq};
    use crate::formula::{reduce, AtomicTerm, Formula};

    fn prims(n: usize) -> Vec<Space> {
        (1..=n).map(|i| Space::primitive(format!("S{i}"))).collect()
    }

    #[test]
    fn canonical_key_ignores_operand_order() {
        let p = prims(2);
        let a = seq(&[p[0].clone(), p[1].clone()]).unwrap();
        let b = seq(&[p[1].clone(), p[0].clone()]).unwrap();
        assert_eq!(canonical_key(&a), canonical_key(&b));
    }

    #[test]
    fn canonical_key_separates_distinct_primitives() {
        let p = prims(2);
        assert_ne!(canonical_key(&p[0]), canonical_key(&p[1]));
    }

    #[test]
    fn canonical_key_flattens_nested_aggregates() {
        let p = prims(3);
        let a = agg(&[p[0].clone(), agg(&[p[1].clone(), p[2].clone()]).unwrap()]).unwrap();
        let b = agg(&[agg(&[p[0].clone(), p[1].clone()]).unwrap(), p[2].clone()]).unwrap();
        assert_eq!(canonical_key(&a), canonical_key(&b));
    }

    // The encoding is the cross-run stability contract; pin it.
    #[test]
    fn canonical_key_encoding_is_pinned() {
        let p = prims(2);
        assert_eq!(p[0].canonical_key(), "P2:S1");
        assert_eq!(Space::empty().canonical_key(), "E");
        let s = seq(&[p[1].clone(), p[0].clone()]).unwrap();
        assert_eq!(s.canonical_key(), "S(P2:S1,P2:S2)");
        let q = par(&[p[0].clone(), p[1].clone()]).unwrap();
        assert_eq!(q.canonical_key(), "Q(P2:S1,P2:S2)");
    }

    #[test]
    fn subsumption_is_operand_membership() {
        let p = prims(2);
        let s = seq(&[p[0].clone(), p[1].clone()]).unwrap();
        assert!(subsumes(&s, &p[0]));
        assert!(!subsumes(&s, &s));
    }

    #[test]
    fn primitives_subsume_nothing() {
        let p = prims(1);
        assert!(!subsumes(&p[0], &p[0]));
    }

    #[test]
    fn subsumption_is_one_level_only() {
        let p = prims(7);
        let s6 = seq(&[p[0].clone(), p[1].clone()]).unwrap();
        let s7 = agg(&[p[2].clone(), p[3].clone()]).unwrap();
        let s8 = par(&[p[4].clone(), s6.clone(), s7.clone()]).unwrap();
        assert!(subsumes(&s8, &s6));
        assert!(subsumes(&s6, &p[0]));
        assert!(!subsumes(&s8, &p[0]));
    }

    #[test]
    fn primitive_spaces_have_order_zero() {
        let p = prims(1);
        assert_eq!(order(&p[0]), Ok(0));
    }

    #[test]
    fn second_order_parallel_space() {
        let p = prims(5);
        let s6 = seq(&[p[0].clone(), p[1].clone()]).unwrap();
        let s7 = agg(&[p[2].clone(), p[3].clone()]).unwrap();
        let s8 = par(&[p[4].clone(), s6, s7]).unwrap();
        assert_eq!(order(&s8), Ok(2));
    }

    #[test]
    fn order_is_undefined_on_empty() {
        assert_eq!(order(&Space::empty()), Err(OrderError::Undefined));
    }

    #[test]
    fn first_order_iff_all_operands_primitive() {
        let p = prims(3);
        let s = seq(&[p[0].clone(), p[1].clone()]).unwrap();
        assert_eq!(order(&s), Ok(1));
        let deeper = par(&[s.clone(), p[2].clone()]).unwrap();
        assert_eq!(order(&deeper), Ok(2));
    }

    #[test]
    fn sequential_spaces_have_continuum_cardinality() {
        let p = prims(4);
        assert_eq!(cardinality(&seq(&p).unwrap()), Cardinality::Continuum);
    }

    #[test]
    fn parallel_spaces_are_countably_infinite() {
        let p = prims(2);
        assert_eq!(cardinality(&par(&p).unwrap()), Cardinality::CountablyInfinite);
    }

    #[test]
    fn all_empty_aggregate_is_empty() {
        let a = agg(&[Space::empty(), Space::empty()]).unwrap();
        assert_eq!(cardinality(&a), Cardinality::Finite(0));
    }

    #[test]
    fn finite_aggregates_count_distinct_members() {
        let p = prims(3);
        let a = agg(&[p[0].clone(), p[1].clone(), p[2].clone()]).unwrap();
        assert_eq!(cardinality(&a), Cardinality::Finite(3));
    }

    #[test]
    fn aggregate_cardinality_takes_the_maximum() {
        let p = prims(3);
        let s = seq(&[p[0].clone(), p[1].clone()]).unwrap();
        let q = par(&[p[0].clone(), p[1].clone()]).unwrap();
        let a = agg(&[s, q, p[2].clone()]).unwrap();
        assert_eq!(cardinality(&a), Cardinality::Continuum);
        let b = agg(&[par(&[p[0].clone(), p[1].clone()]).unwrap(), p[2].clone()]).unwrap();
        assert_eq!(cardinality(&b), Cardinality::CountablyInfinite);
    }

    #[test]
    fn unprovable_reductions_report_an_upper_bound() {
        let p = prims(2);
        let s = seq(&[p[0].clone(), p[1].clone()]).unwrap();
        let f = Formula::atom(AtomicTerm::SeqIndexEq {
            index: 1,
            target: p[0].clone(),
        });
        let r = reduce(&s, &f).unwrap();
        assert_eq!(
            cardinality(&r),
            Cardinality::UpperBound(InfiniteCardinal::Continuum)
        );
        assert_eq!(order(&r), Ok(1));
        assert!(subsumes(&r, &p[0]));
    }
}
