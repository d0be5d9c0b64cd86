//! Binomid indices and their lex-minimal extensions.
//!
//! A finite index `e = (e_1, …, e_m)` of nonnegative integers is binomid when
//! `δ(i, j) = S_{i+j} − S_i − S_j ≥ 0` for all `i + j ≤ m`. Its lex-minimal
//! extension is eventually periodic; this crate computes it exactly, together
//! with the knapsack, f-nomid and monoid structures built on top of it.

pub mod cli;
pub mod error;
pub mod extension;
pub mod hilbert;
pub mod index;
pub mod monoid;
pub mod nomid;
pub mod periodic;
pub mod ukp;

pub use error::{Error, Result};
pub use extension::{canonical_form, extend, minimal_period, preperiod_bound, witness, Witness};
pub use hilbert::{hilbert_basis, HilbertBasis};
pub use index::{
    big_delta, delta, max_average, partial_sums, validate_binomid, FiniteIndex, Fraction,
    PartialSumTable, Violation,
};
pub use monoid::{atomic_decomposition, in_span, is_atomic, l_of_k, path_witness, AtomicityReport, PathWitness};
pub use periodic::EventuallyPeriodicIndex;
pub use ukp::{UkpInstance, UkpSolution};
