//! Complex LU factorization with partial pivoting, and the resolvent-style
//! solve `(I - D Delta) X = rhs` used by transfer-function evaluation.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

use super::hermitian::operator_norm;

/// `||D Delta||` must stay below `1 - INV_MARGIN` for a guaranteed solve.
pub const INV_MARGIN: f64 = 1e-8;

/// Relative residual accepted from [`solve_shifted`].
const SHIFTED_RESIDUAL_TOL: f64 = 1e-12;

pub struct LuFactors {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

pub fn lu_factor(a: &ComplexMatrix) -> Result<LuFactors> {
    a.ensure_square()?;
    a.ensure_finite()?;
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut piv, mut best) = (k, lu[(k, k)].norm());
        for i in k + 1..n {
            let v = lu[(i, k)].norm();
            if v > best {
                piv = i;
                best = v;
            }
        }
        if best == 0.0 {
            return Err(Error::Singular);
        }
        if piv != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = t;
            }
            perm.swap(k, piv);
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let m = lu[(i, k)] / pivot;
            lu[(i, k)] = m;
            for j in k + 1..n {
                let lkj = lu[(k, j)];
                lu[(i, j)] -= m * lkj;
            }
        }
    }
    Ok(LuFactors { lu, perm })
}

impl LuFactors {
    pub fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.perm.len();
        debug_assert_eq!(b.len(), n);
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                let lij = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= lij * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let uij = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= uij * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn solve(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(b.rows(), b.cols());
        for c in 0..b.cols() {
            let col = self.solve_vec(&b.column(c));
            for (r, v) in col.into_iter().enumerate() {
                out[(r, c)] = v;
            }
        }
        out
    }
}

/// Solves `A X = B`.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.rows() != b.rows() {
        return Err(Error::ShapeMismatch(format!(
            "solve: {}x{} vs rhs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(lu_factor(a)?.solve(b))
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    solve(a, &ComplexMatrix::identity(a.rows()))
}

/// Solves `(I - D Delta) X = rhs` after checking `||D Delta|| < 1 - INV_MARGIN`.
///
/// One or two refinement passes keep the relative residual below `1e-12`;
/// anything worse is reported as an error rather than returned silently.
pub fn solve_shifted(
    d: &ComplexMatrix,
    delta: &ComplexMatrix,
    rhs: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    d.ensure_square()?;
    delta.ensure_square()?;
    if d.cols() != delta.rows() || delta.cols() != rhs.rows() {
        return Err(Error::ShapeMismatch(format!(
            "solve_shifted: D {}x{}, Delta {}x{}, rhs {}x{}",
            d.rows(),
            d.cols(),
            delta.rows(),
            delta.cols(),
            rhs.rows(),
            rhs.cols()
        )));
    }
    rhs.ensure_finite()?;
    let prod = d.matmul(delta);
    let norm = operator_norm(&prod)?;
    if norm >= 1.0 - INV_MARGIN {
        return Err(Error::OutsideDomain(format!(
            "evaluation outside guaranteed domain: ||D Delta|| = {norm}"
        )));
    }
    let n = prod.rows();
    if n == 0 {
        return Ok(rhs.clone());
    }
    let m = ComplexMatrix::identity(n).sub_matrix(&prod);
    let factors = lu_factor(&m)?;
    let mut x = factors.solve(rhs);
    let rhs_norm = rhs.frobenius_norm();
    for _ in 0..2 {
        let resid = rhs.sub_matrix(&m.matmul(&x));
        if resid.frobenius_norm() <= 0.1 * SHIFTED_RESIDUAL_TOL * rhs_norm {
            break;
        }
        x = x.add_matrix(&factors.solve(&resid));
    }
    let resid = rhs.sub_matrix(&m.matmul(&x)).frobenius_norm();
    if resid > SHIFTED_RESIDUAL_TOL * rhs_norm.max(f64::MIN_POSITIVE) {
        return Err(Error::VerificationFailed(format!(
            "shifted solve residual {resid:.3e} exceeds tolerance"
        )));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solve_roundtrip_random() {
        let mut r = rng::rng(41);
        for _ in 0..6 {
            let a = rng::random_matrix(&mut r, 6, 6, 1.0);
            let b = rng::random_matrix(&mut r, 6, 2, 1.0);
            let x = solve(&a, &b).unwrap();
            let err = a.matmul(&x).sub_matrix(&b).frobenius_norm();
            assert!(err < 1e-11 * b.frobenius_norm().max(1.0), "err = {err:.3e}");
        }
    }

    #[test]
    fn singular_detected() {
        let a = ComplexMatrix::from_rows(
            2,
            2,
            &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(lu_factor(&a), Err(Error::Singular)));
    }

    #[test]
    fn shifted_zero_d_is_identity() {
        let d = ComplexMatrix::zeros(3, 3);
        let delta = ComplexMatrix::diag_real(&[0.3, 0.2, 0.1]);
        let rhs = ComplexMatrix::from_fn(3, 1, |r, _| c(r as f64 + 1.0, -0.5));
        let x = solve_shifted(&d, &delta, &rhs).unwrap();
        assert!(x.sub_matrix(&rhs).frobenius_norm() < 1e-14);
    }

    #[test]
    fn shifted_scalar_geometric_series() {
        let d = ComplexMatrix::diag_real(&[0.5]);
        let delta = ComplexMatrix::diag_real(&[0.5]);
        let rhs = ComplexMatrix::identity(1);
        let x = solve_shifted(&d, &delta, &rhs).unwrap();
        assert!((x[(0, 0)] - c(4.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn shifted_rejects_large_product() {
        let d = ComplexMatrix::diag_real(&[2.0]);
        let delta = ComplexMatrix::diag_real(&[0.6]);
        let rhs = ComplexMatrix::identity(1);
        assert!(matches!(
            solve_shifted(&d, &delta, &rhs),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn shifted_matches_neumann_series() {
        let mut r = rng::rng(43);
        for _ in 0..4 {
            // contractive D and Delta with ||Delta|| <= 0.9
            let mut d = rng::random_matrix(&mut r, 4, 4, 1.0);
            let nd = operator_norm(&d).unwrap();
            d = d.scale_re(0.95 / nd.max(1.0));
            let mut delta = rng::random_matrix(&mut r, 4, 4, 1.0);
            let ndl = operator_norm(&delta).unwrap();
            delta = delta.scale_re(0.9 / ndl.max(1e-12));
            let rhs = rng::random_matrix(&mut r, 4, 2, 1.0);

            let x = solve_shifted(&d, &delta, &rhs).unwrap();
            // partial sums of sum_k (D Delta)^k rhs
            let prod = d.matmul(&delta);
            let mut term = rhs.clone();
            let mut sum = rhs.clone();
            let q = operator_norm(&prod).unwrap();
            for _ in 0..200 {
                term = prod.matmul(&term);
                sum = sum.add_matrix(&term);
            }
            let tail = q.powi(201) / (1.0 - q) * rhs.frobenius_norm();
            let err = sum.sub_matrix(&x).frobenius_norm();
            assert!(err <= tail + 1e-10, "err = {err:.3e}, tail = {tail:.3e}");
        }
    }
}
