//! Numerical toolkit for the Schur-Agler class on truncated infinite
//! polydisks.
//!
//! Everything here works at a finite truncation dimension `d`: points carry
//! finitely many complex coordinates of sup-norm `< 1`, kernels are dense
//! Hermitian matrices over a finite point set, and operator tuples are
//! finite matrix tuples. The main workflows are
//!
//! * [`pick`] — decide Agler-Pick interpolation feasibility by alternating
//!   projections, returning either a positive-kernel decomposition or a
//!   verified dual separation certificate (plus the violating commuting
//!   matrix tuple it induces),
//! * [`realization`] — synthesize a contractive colligation from a kernel
//!   decomposition and evaluate its transfer function at points and at
//!   commuting operator tuples,
//! * [`vn`] — von Neumann inequality experiments: diagonalizable tuples,
//!   polynomial functional calculus, torus sup-norm estimation,
//! * [`bohr`] — the correspondence between polydisk polynomials and
//!   Dirichlet polynomials through prime factorization.
//!
//! The dense complex linear algebra underneath ([`matrix`], [`linalg`]) is
//! deterministic and dependency-free; all randomized entry points take an
//! explicit 64-bit seed.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub mod linalg;
pub mod matrix;
pub mod rng;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
