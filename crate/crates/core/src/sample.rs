//! Seeded random generation of spaces, members and formulas, used by the
//! law checker and property tests. Everything is deterministic for a fixed
//! seed.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::compose;
use crate::computon::Computon;
use crate::formula::{AtomicTerm, Finiteness, Formula};
use crate::space::{Space, SpaceKind};

pub fn rng_from_seed(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A pool of distinct primitive spaces `S1..Sk`.
pub fn primitive_pool(k: usize) -> Vec<Space> {
    (1..=k).map(|i| Space::primitive(format!("S{i}"))).collect()
}

/// One of the three structural composite kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositeKind {
    Sequential,
    Parallel,
    Aggregated,
}

pub const COMPOSITE_KINDS: [CompositeKind; 3] = [
    CompositeKind::Sequential,
    CompositeKind::Parallel,
    CompositeKind::Aggregated,
];

pub fn compose_kind(
    kind: CompositeKind,
    operands: &[Space],
) -> Result<Space, compose::ComposeError> {
    match kind {
        CompositeKind::Sequential => compose::seq(operands),
        CompositeKind::Parallel => compose::par(operands),
        CompositeKind::Aggregated => compose::agg(operands),
    }
}

/// A random space of at most the given depth over a primitive pool.
/// Depth 0 picks a primitive; deeper levels pick an operator and recurse.
pub fn random_space(rng: &mut StdRng, pool: &[Space], depth: u32) -> Space {
    if depth == 0 || rng.gen_bool(0.3) {
        return pool.choose(rng).expect("nonempty pool").clone();
    }
    let arity = rng.gen_range(2..=4usize.min(pool.len().max(2)));
    let mut operands = Vec::with_capacity(arity);
    for _ in 0..arity {
        operands.push(random_space(rng, pool, depth - 1));
    }
    let kind = COMPOSITE_KINDS[rng.gen_range(0..3)];
    match compose_kind(kind, &operands) {
        Ok(s) => s,
        // Operands deduplicated below two distinct; fall back to a leaf.
        Err(_) => pool.choose(rng).expect("nonempty pool").clone(),
    }
}

/// A random member of a space, when one can be found. Members of reduced
/// spaces come from the materialization when finiteness is provable and by
/// bounded rejection sampling otherwise.
pub fn random_member(rng: &mut StdRng, s: &Space) -> Option<Computon> {
    match s.kind() {
        SpaceKind::Empty => None,
        SpaceKind::Primitive(label) => Some(Computon::primitive(label.clone())),
        SpaceKind::Sequential(ops) => {
            let len = rng.gen_range(1..=4usize);
            let elems = (0..len)
                .map(|_| ops.choose(rng).expect("operands").clone())
                .collect();
            Some(Computon::Sequential(elems))
        }
        SpaceKind::Parallel(ops) => {
            let mut idx: Vec<usize> = (0..ops.len()).collect();
            idx.shuffle(rng);
            let dom = rng.gen_range(1..=ops.len());
            let mut entries: Vec<(Space, u32)> = idx[..dom]
                .iter()
                .map(|&i| (ops[i].clone(), rng.gen_range(1..=4u32)))
                .collect();
            entries.sort_by(|(a, _), (b, _)| a.cmp(b));
            Some(Computon::Parallel(entries))
        }
        SpaceKind::Aggregated(children) => {
            let child = children.choose(rng)?;
            random_member(rng, child)
        }
        SpaceKind::Reduced { base, .. } => {
            if let Finiteness::Finite(members) = crate::formula::prove_finite(s) {
                return members.choose(rng).cloned();
            }
            for _ in 0..64 {
                if let Some(c) = random_member(rng, base) {
                    if crate::enumerate::member(&c, s) {
                        return Some(c);
                    }
                }
            }
            None
        }
        SpaceKind::Intersect(a, b) => {
            for _ in 0..64 {
                if let Some(c) = random_member(rng, a) {
                    if crate::enumerate::member(&c, b) {
                        return Some(c);
                    }
                }
            }
            None
        }
        SpaceKind::Difference(a, b) => {
            for _ in 0..64 {
                if let Some(c) = random_member(rng, a) {
                    if !crate::enumerate::member(&c, b) {
                        return Some(c);
                    }
                }
            }
            None
        }
    }
}

/// A random formula well-formed for the target space, with atoms drawn from
/// `allowed_targets` where the grammar references operands (pass the target's
/// own operands for the unary laws, a shared subset for the binary ones).
pub fn random_formula(rng: &mut StdRng, target: &Space, allowed_targets: &[Space]) -> Formula {
    let atoms = rng.gen_range(1..=3usize);
    let mut f = random_atom(rng, target, allowed_targets);
    for _ in 1..atoms {
        let next = random_atom(rng, target, allowed_targets);
        f = if rng.gen_bool(0.5) {
            Formula::and(f, next)
        } else {
            Formula::or(f, next)
        };
    }
    if rng.gen_bool(0.25) {
        f = Formula::not(f);
    }
    f
}

fn random_atom(rng: &mut StdRng, target: &Space, allowed: &[Space]) -> Formula {
    let pick = |rng: &mut StdRng| allowed.choose(rng).expect("allowed targets").clone();
    let term = match target.kind() {
        SpaceKind::Sequential(_) => match rng.gen_range(0..3) {
            0 => AtomicTerm::SeqIndexEq {
                index: rng.gen_range(1..=4),
                target: pick(rng),
            },
            1 => AtomicTerm::SeqIndexIndexEq {
                left: rng.gen_range(1..=4),
                right: rng.gen_range(1..=4),
            },
            _ => AtomicTerm::SeqLenEq {
                len: rng.gen_range(1..=4),
            },
        },
        SpaceKind::Parallel(_) => match rng.gen_range(0..3) {
            0 => AtomicTerm::ParCountEq {
                target: pick(rng),
                count: rng.gen_range(1..=4),
            },
            1 => AtomicTerm::ParCountCountEq {
                left: pick(rng),
                right: pick(rng),
            },
            _ => AtomicTerm::ParAbsent { target: pick(rng) },
        },
        SpaceKind::Aggregated(_) => AtomicTerm::AggMember { child: pick(rng) },
        SpaceKind::Primitive(_) => AtomicTerm::PrimSelf,
        SpaceKind::Reduced { base, .. } => return random_atom(rng, base, allowed),
        SpaceKind::Intersect(a, _) | SpaceKind::Difference(a, _) => {
            return random_atom(rng, a, allowed)
        }
        SpaceKind::Empty => unreachable!("no formulas over the empty space"),
    };
    Formula::Atom(term)
}
