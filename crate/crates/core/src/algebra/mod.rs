//! Small dense matrix numerics.
//!
//! Everything in this crate operates on systems of dimension eight or
//! less, so the routines here favour robustness and determinism over
//! asymptotic speed: LU with partial pivoting, complex Hessenberg QR for
//! eigenvalues, a doubling iteration for discrete Lyapunov equations,
//! one-sided Jacobi for singular values, and a solvent extractor for the
//! quadratic matrix equation `A1·C² − A0·C + A2 = 0`.
//!
//! All functions are pure: no globals, no interior mutability, safe to
//! call concurrently.

mod eigen;
mod lyapunov;
mod matrix;
mod solvent;
mod svd;

pub use eigen::{eigen, eigenvalues, spectral_radius, Complex64, EigenDecomposition};
pub(crate) use eigen::{polynomial_roots, quadratic_roots};
pub use lyapunov::lyapunov_solve;
pub use matrix::{solve_sylvester, Matrix};
pub use solvent::{quadratic_solvent, quadratic_solvent_allowing_boundary, SolventResult};
pub(crate) use solvent::{linear_pencil_roots, pencil_roots};
pub use svd::{psd_factor, svd, Svd};

use thiserror::Error;

/// Half-width of the band around the unit circle inside which a root is
/// reported as sitting on the boundary rather than classified.
pub const STABILITY_BAND: f64 = 1e-9;

/// Largest matrix dimension accepted by the public eigensolver.
pub const MAX_EIGEN_DIM: usize = 8;

/// Stability class of a single root modulus against the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootClass {
    Stable,
    Boundary,
    Unstable,
}

/// Classifies a modulus with the [`STABILITY_BAND`] tolerance.
pub fn classify_modulus(modulus: f64) -> RootClass {
    if modulus < 1.0 - STABILITY_BAND {
        RootClass::Stable
    } else if modulus > 1.0 + STABILITY_BAND {
        RootClass::Unstable
    } else {
        RootClass::Boundary
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("data length {got} does not match {rows}x{cols}")]
    InvalidData { rows: usize, cols: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("coefficient matrix a0 is singular")]
    SingularA0,
    #[error("iteration budget exhausted before convergence")]
    ConvergenceFailure,
    #[error("transition matrix has spectral radius {rho} outside the stable region")]
    UnstableTransition { rho: f64 },
    #[error("right-hand side q is not symmetric")]
    NonSymmetricQ,
    #[error("no stable solvent: every candidate spectrum reaches the unit circle")]
    NoStableSolvent,
}
