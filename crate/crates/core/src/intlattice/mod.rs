//! Exact integer-matrix and lattice algebra: Hermite and Smith normal forms,
//! saturated kernels, fixed sublattices, finite quotients, and the first
//! cohomology of a cyclic group acting on Z^d.

mod lattice;
mod matrix;
mod normal_form;

pub use lattice::{
    check_order, fixed_sublattice, h1_cyclic, kernel_saturated, norm_map, quotient_structure,
    saturate, FiniteAbelian, Sublattice,
};
pub use matrix::IntMatrix;
pub use normal_form::{hnf, hnf_with_transform, snf, SnfResult};

pub(crate) use lattice::rational_kernel;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix rows have different lengths")]
    Ragged,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix does not satisfy rho^{p} = I")]
    NotOrderP { p: u64 },
    #[error("sublattice is not contained in the larger lattice")]
    NotContained,
    #[error("quotient of a rank {big} lattice by a rank {small} sublattice is infinite")]
    InfiniteQuotient { big: usize, small: usize },
    #[error("invalid invariant factors: {0}")]
    BadInvariantFactors(String),
}
