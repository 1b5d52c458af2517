//! An algebra of computon spaces.
//!
//! Spaces are intensional descriptions of (mostly infinite) sets of
//! computons: sequential constructs, parallel constructs, or opaque
//! primitives. This crate provides:
//!
//! - the space and computon domain types with canonical, order-insensitive
//!   identity ([`space`], [`computon`]);
//! - the three composition operators and the symbolic set combinators
//!   ([`compose`]);
//! - the reduction operator σ with its per-kind formula language,
//!   evaluation and finiteness proving ([`formula`]);
//! - membership decision and canonical budgeted enumeration ([`enumerate`]);
//! - a text DSL for space programs and formulas ([`dsl`]);
//! - machine checking of the algebraic laws ([`laws`]) and the seeded
//!   generators backing it ([`sample`]).

pub mod compose;
pub mod computon;
pub mod dsl;
pub mod enumerate;
pub mod formula;
pub mod laws;
pub mod sample;
pub mod space;

pub use compose::{agg, difference, intersect, par, seq, ComposeError};
pub use computon::{
    absent_spaces, classify_parallel, classify_sequential, ClassifyError, Computon,
    ParallelClass, SequentialClass,
};
pub use enumerate::{
    bounded_members, count_up_to, enumerate, member, EnumerateError, EnumerationStream,
    StreamAbort,
};
pub use formula::{
    check_wellformed, eval, prove_finite, reduce, AtomicTerm, Finiteness, Formula, ReduceError,
};
pub use space::{cardinality, canonical_key, order, subsumes, Cardinality, OrderError, Space};
