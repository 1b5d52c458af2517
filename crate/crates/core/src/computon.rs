//! Computons: the member values of spaces.
//!
//! A computon is a finite object — a label (primitive), a nonempty sequence
//! of spaces (sequential) or a nonempty map from spaces to positive instance
//! counts (parallel). Sequential spaces also contain infinite sequences
//! symbolically, but those have no finite representation and never appear as
//! values.

use std::fmt;

use crate::enumerate::member;
use crate::space::{Space, SpaceKind};

/// A member value of a computon space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Computon {
    /// The unique member of a primitive space; the label is opaque.
    Primitive(String),
    /// A finite sequence of spaces, indexed 1..=len.
    Sequential(Vec<Space>),
    /// A finite map space → instance count, stored sorted by canonical key.
    Parallel(Vec<(Space, u32)>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComputonError {
    #[error("a sequential computon needs at least one element")]
    EmptySequence,
    #[error("a parallel computon needs at least one entry")]
    EmptyMap,
    #[error("parallel instance counts must be positive")]
    ZeroCount,
    #[error("duplicate space in parallel computon domain")]
    DuplicateEntry,
}

impl Computon {
    pub fn primitive(label: impl Into<String>) -> Computon {
        Computon::Primitive(label.into())
    }

    pub fn sequential(elements: Vec<Space>) -> Result<Computon, ComputonError> {
        if elements.is_empty() {
            return Err(ComputonError::EmptySequence);
        }
        Ok(Computon::Sequential(elements))
    }

    pub fn parallel(entries: Vec<(Space, u32)>) -> Result<Computon, ComputonError> {
        if entries.is_empty() {
            return Err(ComputonError::EmptyMap);
        }
        if entries.iter().any(|(_, n)| *n == 0) {
            return Err(ComputonError::ZeroCount);
        }
        let mut entries = entries;
        entries.sort_by(|(a, _), (b, _)| a.cmp(b));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(ComputonError::DuplicateEntry);
        }
        Ok(Computon::Parallel(entries))
    }

    /// Spaces occurring in this computon: the image of a sequence or the
    /// domain of a parallel map. Primitive computons contain no spaces.
    pub fn occurring_spaces(&self) -> Vec<&Space> {
        match self {
            Computon::Primitive(_) => Vec::new(),
            Computon::Sequential(elems) => {
                let mut out: Vec<&Space> = Vec::new();
                for e in elems {
                    if !out.contains(&e) {
                        out.push(e);
                    }
                }
                out
            }
            Computon::Parallel(entries) => entries.iter().map(|(s, _)| s).collect(),
        }
    }

    /// Count of a space in a parallel computon's domain, if present.
    pub fn count_of(&self, space: &Space) -> Option<u32> {
        match self {
            Computon::Parallel(entries) => entries
                .iter()
                .find(|(s, _)| s == space)
                .map(|(_, n)| *n),
            _ => None,
        }
    }

    /// Canonical textual encoding; injective, used for deterministic ordering
    /// and duplicate suppression during enumeration.
    pub fn encoding(&self) -> String {
        match self {
            Computon::Primitive(label) => format!("p{}:{}", label.len(), label),
            Computon::Sequential(elems) => {
                let keys: Vec<&str> = elems.iter().map(|s| s.canonical_key()).collect();
                format!("s({})", keys.join(","))
            }
            Computon::Parallel(entries) => {
                let parts: Vec<String> = entries
                    .iter()
                    .map(|(s, n)| format!("{}={}", s.canonical_key(), n))
                    .collect();
                format!("q({})", parts.join(","))
            }
        }
    }

    /// Sort key matching the canonical enumeration order of a single-kind
    /// stream: sequences by length then lexicographically, parallel maps by
    /// total instance count, then domain, then counts.
    pub(crate) fn stream_rank(&self) -> (u8, u64, Vec<String>, Vec<u32>) {
        match self {
            Computon::Primitive(label) => (0, 0, vec![label.clone()], Vec::new()),
            Computon::Sequential(elems) => (
                1,
                elems.len() as u64,
                elems
                    .iter()
                    .map(|s| s.canonical_key().to_string())
                    .collect(),
                Vec::new(),
            ),
            Computon::Parallel(entries) => (
                2,
                entries.iter().map(|(_, n)| *n as u64).sum(),
                entries
                    .iter()
                    .map(|(s, _)| s.canonical_key().to_string())
                    .collect(),
                entries.iter().map(|(_, n)| *n).collect(),
            ),
        }
    }
}

impl fmt::Display for Computon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::pretty::computon_text(self, None))
    }
}

/// Classes of a sequential computon relative to its space (injectivity and
/// surjectivity of the underlying index function).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequentialClass {
    Bijective,
    InjectiveNonSurjective,
    NonInjectiveSurjective,
    NonInjectiveNonSurjective,
}

impl fmt::Display for SequentialClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SequentialClass::Bijective => "bijective",
            SequentialClass::InjectiveNonSurjective => "injective/non-surjective",
            SequentialClass::NonInjectiveSurjective => "non-injective/surjective",
            SequentialClass::NonInjectiveNonSurjective => "non-injective/non-surjective",
        })
    }
}

/// Classes of a parallel computon relative to its space (totality of the
/// domain and injectivity of the count assignment).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParallelClass {
    PartialInjective,
    TotalInjective,
    PartialNonInjective,
    TotalNonInjective,
}

impl fmt::Display for ParallelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParallelClass::PartialInjective => "partial/injective",
            ParallelClass::TotalInjective => "total/injective",
            ParallelClass::PartialNonInjective => "partial/non-injective",
            ParallelClass::TotalNonInjective => "total/non-injective",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("computon is not a member of the space")]
    NotAMember,
    #[error("operation does not apply to this space/computon kind")]
    KindMismatch,
}

/// Classify a member of a sequential space by how its sequence uses the
/// operand set: no repeats and full coverage is bijective, and so on.
pub fn classify_sequential(p: &Computon, s: &Space) -> Result<SequentialClass, ClassifyError> {
    let ops = match s.kind() {
        SpaceKind::Sequential(ops) => ops,
        _ => return Err(ClassifyError::KindMismatch),
    };
    let elems = match p {
        Computon::Sequential(elems) => elems,
        _ => return Err(ClassifyError::KindMismatch),
    };
    if !member(p, s) {
        return Err(ClassifyError::NotAMember);
    }
    let mut seen: Vec<&Space> = Vec::new();
    let mut repeated = false;
    for e in elems {
        if seen.contains(&e) {
            repeated = true;
        } else {
            seen.push(e);
        }
    }
    let surjective = ops.iter().all(|op| seen.contains(&op));
    Ok(match (repeated, surjective) {
        (false, true) => SequentialClass::Bijective,
        (false, false) => SequentialClass::InjectiveNonSurjective,
        (true, true) => SequentialClass::NonInjectiveSurjective,
        (true, false) => SequentialClass::NonInjectiveNonSurjective,
    })
}

/// Classify a member of a parallel space: total iff its domain covers every
/// operand, injective iff all instance counts are distinct.
pub fn classify_parallel(p: &Computon, s: &Space) -> Result<ParallelClass, ClassifyError> {
    let ops = match s.kind() {
        SpaceKind::Parallel(ops) => ops,
        _ => return Err(ClassifyError::KindMismatch),
    };
    let entries = match p {
        Computon::Parallel(entries) => entries,
        _ => return Err(ClassifyError::KindMismatch),
    };
    if !member(p, s) {
        return Err(ClassifyError::NotAMember);
    }
    let total = ops
        .iter()
        .all(|op| entries.iter().any(|(d, _)| d == op));
    let mut counts: Vec<u32> = entries.iter().map(|(_, n)| *n).collect();
    counts.sort_unstable();
    let injective = counts.windows(2).all(|w| w[0] != w[1]);
    Ok(match (total, injective) {
        (false, true) => ParallelClass::PartialInjective,
        (true, true) => ParallelClass::TotalInjective,
        (false, false) => ParallelClass::PartialNonInjective,
        (true, false) => ParallelClass::TotalNonInjective,
    })
}

/// Operands of `s` absent from `p`: not in the image of a sequence, or not
/// in the domain of a parallel map. Defined for sequential and parallel
/// spaces only.
pub fn absent_spaces(p: &Computon, s: &Space) -> Result<Vec<Space>, ClassifyError> {
    let ops = match s.kind() {
        SpaceKind::Sequential(ops) | SpaceKind::Parallel(ops) => ops,
        _ => return Err(ClassifyError::KindMismatch),
    };
    match (s.kind(), p) {
        (SpaceKind::Sequential(_), Computon::Sequential(_))
        | (SpaceKind::Parallel(_), Computon::Parallel(_)) => {}
        _ => return Err(ClassifyError::KindMismatch),
    }
    if !member(p, s) {
        return Err(ClassifyError::NotAMember);
    }
    let present = p.occurring_spaces();
    Ok(ops
        .iter()
        .filter(|op| !present.contains(op))
        .cloned()
        .collect())
}
