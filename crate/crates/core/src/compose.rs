//! The composition operators: sequencer, paralleliser and aggregator, plus
//! the symbolic set combinators used to state the reduction laws.
//!
//! Operand lists are canonicalized at construction (deduplicated and sorted
//! by canonical key), which turns the commutativity of all three operators
//! into plain structural equality. Aggregation additionally flattens nested
//! aggregates and drops empty operands, realizing its associativity and
//! identity laws the same way. Sequencing and parallelisation are not
//! associative and are deliberately left unflattened.

use crate::space::{Space, SpaceKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComposeError {
    #[error("composition needs at least two distinct operands")]
    TooFewDistinctOperands,
    #[error("the empty space cannot be sequenced or parallelised")]
    EmptyOperand,
    #[error("a space cannot contain itself as an operand")]
    SelfReference,
}

fn canonicalize(operands: &[Space]) -> Vec<Space> {
    let mut out: Vec<Space> = Vec::new();
    for op in operands {
        if !out.contains(op) {
            out.push(op.clone());
        }
    }
    out.sort();
    out
}

fn check_sequential_like(operands: &[Space]) -> Result<Vec<Space>, ComposeError> {
    if operands.iter().any(Space::is_empty_space) {
        return Err(ComposeError::EmptyOperand);
    }
    let ops = canonicalize(operands);
    if ops.len() < 2 {
        return Err(ComposeError::TooFewDistinctOperands);
    }
    Ok(ops)
}

fn check_occurs(kind: SpaceKind) -> Result<Space, ComposeError> {
    let space = Space::from_kind(kind);
    let self_key = space.canonical_key();
    if space
        .operands()
        .iter()
        .any(|op| op.canonical_key() == self_key)
    {
        return Err(ComposeError::SelfReference);
    }
    Ok(space)
}

/// Build the sequential space over the given operands: the space of all
/// sequences drawn from the operand set. Needs at least two distinct
/// non-empty operands.
pub fn seq(operands: &[Space]) -> Result<Space, ComposeError> {
    let ops = check_sequential_like(operands)?;
    check_occurs(SpaceKind::Sequential(ops))
}

/// Build the parallel space over the given operands: the space of all
/// nonempty partial maps from the operand set to positive instance counts.
pub fn par(operands: &[Space]) -> Result<Space, ComposeError> {
    let ops = check_sequential_like(operands)?;
    check_occurs(SpaceKind::Parallel(ops))
}

/// Build the aggregated space (union) of the given operands. Takes at least
/// two operands; the empty space is allowed and dropped. Nested aggregates
/// flatten, and if canonicalization leaves a single operand that operand is
/// returned unchanged.
pub fn agg(operands: &[Space]) -> Result<Space, ComposeError> {
    if operands.len() < 2 {
        return Err(ComposeError::TooFewDistinctOperands);
    }
    let mut flat: Vec<Space> = Vec::new();
    for op in operands {
        match op.kind() {
            SpaceKind::Empty => {}
            SpaceKind::Aggregated(inner) => flat.extend(inner.iter().cloned()),
            _ => flat.push(op.clone()),
        }
    }
    let ops = canonicalize(&flat);
    match ops.len() {
        0 => Ok(Space::empty()),
        1 => Ok(ops.into_iter().next().unwrap()),
        _ => check_occurs(SpaceKind::Aggregated(ops)),
    }
}

/// Symbolic intersection: members are the computons of both spaces. The two
/// operands are stored in canonical order (intersection commutes); no other
/// simplification is performed.
pub fn intersect(a: &Space, b: &Space) -> Space {
    let (x, y) = if a <= b { (a, b) } else { (b, a) };
    Space::from_kind(SpaceKind::Intersect(x.clone(), y.clone()))
}

/// Symbolic difference: members of `a` that are not members of `b`.
pub fn difference(a: &Space, b: &Space) -> Space {
    Space::from_kind(SpaceKind::Difference(a.clone(), b.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::computon::Computon;
    use crate::enumerate::member;
    use crate::space::cardinality;
    use crate::space::Cardinality;

    fn prims(n: usize) -> Vec<Space> {
        (1..=n).map(|i| Space::primitive(format!("S{i}"))).collect()
    }

    #[test]
    fn sequencing_is_commutative() {
        let p = prims(2);
        let a = seq(&[p[0].clone(), p[1].clone()]).unwrap();
        let b = seq(&[p[1].clone(), p[0].clone()]).unwrap();
        assert_eq!(a.canonical_key(), b.canonical_key());
        assert_eq!(a, b);
    }

    #[test]
    fn duplicate_operands_collapse() {
        let p = prims(1);
        assert_eq!(
            seq(&[p[0].clone(), p[0].clone()]),
            Err(ComposeError::TooFewDistinctOperands)
        );
    }

    #[test]
    fn empty_operand_rejected() {
        let p = prims(1);
        assert_eq!(
            par(&[p[0].clone(), Space::empty()]),
            Err(ComposeError::EmptyOperand)
        );
        assert_eq!(
            seq(&[Space::empty(), p[0].clone()]),
            Err(ComposeError::EmptyOperand)
        );
    }

    #[test]
    fn aggregation_identity() {
        let p = prims(2);
        let s = seq(&p).unwrap();
        assert_eq!(agg(&[s.clone(), Space::empty()]).unwrap(), s);
        assert_eq!(agg(&[Space::empty(), Space::empty()]).unwrap(), Space::empty());
    }

    #[test]
    fn aggregation_flattens() {
        let p = prims(3);
        let left = agg(&[
            p[0].clone(),
            agg(&[p[1].clone(), p[2].clone()]).unwrap(),
        ])
        .unwrap();
        let right = agg(&[
            agg(&[p[0].clone(), p[1].clone()]).unwrap(),
            p[2].clone(),
        ])
        .unwrap();
        assert_eq!(left, right);
        assert_eq!(left.operands().len(), 3);
    }

    #[test]
    fn sequencing_not_associative_witness() {
        let p = prims(3);
        let inner_right = seq(&[p[1].clone(), p[2].clone()]).unwrap();
        let right = seq(&[p[0].clone(), inner_right]).unwrap();
        let inner_left = seq(&[p[0].clone(), p[1].clone()]).unwrap();
        let left = seq(&[inner_left, p[2].clone()]).unwrap();
        let w = Computon::sequential(vec![p[0].clone(), p[0].clone()]).unwrap();
        assert!(member(&w, &right));
        assert!(!member(&w, &left));
        assert_ne!(left, right);
    }

    #[test]
    fn parallelisation_not_associative_witness() {
        let p = prims(3);
        let right = par(&[p[0].clone(), par(&[p[1].clone(), p[2].clone()]).unwrap()]).unwrap();
        let left = par(&[par(&[p[0].clone(), p[1].clone()]).unwrap(), p[2].clone()]).unwrap();
        let w = Computon::parallel(vec![(p[0].clone(), 5)]).unwrap();
        assert!(member(&w, &right));
        assert!(!member(&w, &left));
    }

    #[test]
    fn operator_results_compose_further() {
        let p = prims(4);
        let s = seq(&[p[0].clone(), p[1].clone()]).unwrap();
        let q = par(&[p[2].clone(), s.clone()]).unwrap();
        let a = agg(&[q.clone(), p[3].clone()]).unwrap();
        assert_eq!(cardinality(&s), Cardinality::Continuum);
        assert_eq!(cardinality(&q), Cardinality::CountablyInfinite);
        assert!(matches!(a.kind(), SpaceKind::Aggregated(_)));
    }

    #[test]
    fn intersect_commutes_difference_does_not() {
        let p = prims(2);
        let s = seq(&p).unwrap();
        let q = par(&p).unwrap();
        assert_eq!(intersect(&s, &q), intersect(&q, &s));
        assert_ne!(difference(&s, &q), difference(&q, &s));
    }
}
