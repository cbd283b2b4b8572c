//! Exact finite-field and cyclotomic machinery for studying cliques in
//! generalized Paley graphs and Peisert graphs.
//!
//! Every verdict is computed in exact integer or cyclotomic arithmetic.

pub mod arith;
pub mod cayley;
pub mod character;
pub mod clique;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod formula;
pub mod graph;
pub mod harness;
pub mod peisert;
pub mod sums;
pub mod t5;

pub use cyclotomic::{CyclotomicInt, CyclotomicRing};
pub use error::{Error, Result};
pub use field::{FieldElement, FiniteField};
