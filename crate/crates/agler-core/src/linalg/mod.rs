//! Deterministic dense complex linear algebra.
//!
//! Everything is built on two Jacobi-type kernels: a cyclic two-sided Jacobi
//! iteration for Hermitian eigenproblems and a one-sided (Hestenes) Jacobi
//! iteration for singular values. Both are unconditionally stable and exact
//! enough at the matrix sizes this crate targets (a few hundred rows). The
//! non-Hermitian eigensolver used by the Dirichlet-series checks is a
//! complex Hessenberg/QR iteration with inverse-iteration eigenvectors.

mod eig;
mod hermitian;
mod lu;
mod svd;

pub use eig::{eig_diagonalizable, eigenbasis_inverse, eigenvalues, matrix_function, Eig};
pub use hermitian::{
    gram_factor, herm_eig, operator_norm, psd_project, HermitianEig, EIG_TOL, HERM_TOL,
    RANK_TOL_DEFAULT,
};
pub use lu::{inverse, lu_factor, solve, solve_shifted, LuFactors, INV_MARGIN};
pub use svd::{clip_singular_values, frame_operator, pinv, svd, Svd};
