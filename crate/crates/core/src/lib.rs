//! Enumeration and statistics of congruence-restricted multidimensional
//! Farey sequences.
//!
//! The library enumerates level-Q Farey points whose integer
//! representatives satisfy residue conditions modulo m, and measures how
//! the resulting point sets distribute: window spacing statistics,
//! counting functions for two classical Diophantine approximation
//! problems, growth rates against exactly computed densities, and the
//! distribution of Frobenius numbers over restricted ensembles of
//! primitive lattice points via the simplex covering radius of an
//! associated unimodular lattice.
//!
//! Everything integer is exact (checked 64-bit with 128-bit promotion);
//! everything stochastic is reproducible from a 64-bit seed.

// `!(y > 0.0)` guards reject NaN along with the out-of-range values; the
// suggested `y <= 0.0` would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod congruence;
pub mod diophantine;
pub mod error;
pub mod farey;
pub mod frobenius;
pub mod geom;
pub mod lattice;
pub mod oracles;
pub mod report;
pub mod rng;
pub mod spacing;
pub mod zeta;

pub use error::{Error, Result};

/// Bounds the global worker pool. Parallel kernels aggregate with
/// order-independent reductions, so results never depend on the pool
/// size; this only limits resource use.
pub fn build_thread_pool(threads: usize) -> std::result::Result<(), rayon::ThreadPoolBuildError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
}
