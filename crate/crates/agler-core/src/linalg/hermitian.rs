//! Hermitian eigendecomposition by cyclic Jacobi sweeps, and the PSD
//! operations built on top of it: nearest-PSD projection, Gram factorization
//! and the spectral operator norm.

use alloc::vec::Vec;

use num_complex::Complex64;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Relative reconstruction tolerance guaranteed by [`herm_eig`].
pub const EIG_TOL: f64 = 1e-10;
/// Maximum relative Hermitian defect accepted on input.
pub const HERM_TOL: f64 = 1e-8;
/// Default eigenvalue cutoff for [`gram_factor`].
pub const RANK_TOL_DEFAULT: f64 = 1e-9;

/// Sweep until the off-diagonal Frobenius mass drops below this multiple of
/// the input norm.
const SWEEP_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues (real, descending) and a unitary matrix of eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// Rebuilds `Q diag(f(lambda)) Q*`.
    pub fn reconstruct(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let q = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (i, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = f(lambda);
            if v == 0.0 {
                continue;
            }
            for r in 0..n {
                let qr = q[(r, i)] * v;
                for c in 0..n {
                    out[(r, c)] += qr * q[(c, i)].conj();
                }
            }
        }
        out
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += a[(r, c)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation annihilating the (p, q) entry.
///
/// The plane rotation is `U = [[c, s], [-conj(phi) s, conj(phi) c]]` where
/// `phi` is the phase of `a[p][q]`; `A <- U* A U`, `Q <- Q U`.
fn rotate(a: &mut ComplexMatrix, q: &mut ComplexMatrix, p: usize, r: usize) {
    let apr = a[(p, r)];
    let abs = apr.norm();
    if abs == 0.0 {
        return;
    }
    let phi = apr / abs;
    let app = a[(p, p)].re;
    let arr = a[(r, r)].re;
    let tau = (arr - app) / (2.0 * abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let n = a.rows();

    // Columns: A <- A U.
    let u21 = -phi.conj() * s;
    let u22 = phi.conj() * c;
    for i in 0..n {
        let aip = a[(i, p)];
        let air = a[(i, r)];
        a[(i, p)] = aip * c + air * u21;
        a[(i, r)] = aip * s + air * u22;
    }
    // Rows: A <- U* A.
    for j in 0..n {
        let apj = a[(p, j)];
        let arj = a[(r, j)];
        a[(p, j)] = apj * c - phi * s * arj;
        a[(r, j)] = apj * s + phi * c * arj;
    }
    // The rotation zeroes these exactly; drop the round-off dust.
    a[(p, r)] = Complex64::ZERO;
    a[(r, p)] = Complex64::ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(r, r)] = Complex64::new(a[(r, r)].re, 0.0);

    for i in 0..n {
        let qip = q[(i, p)];
        let qir = q[(i, r)];
        q[(i, p)] = qip * c + qir * u21;
        q[(i, r)] = qip * s + qir * u22;
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input may carry a relative Hermitian defect up to [`HERM_TOL`]; it is
/// symmetrized as `(H + H*)/2` before iterating. Eigenvalues come back
/// sorted descending and `Q diag(lambda) Q*` reconstructs the symmetrized
/// input to [`EIG_TOL`] relative accuracy.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermitianEig> {
    h.ensure_square()?;
    h.ensure_finite()?;
    let n = h.rows();
    let norm = h.frobenius_norm();
    if norm > 0.0 {
        let defect = h.hermitian_defect() / norm;
        if defect > HERM_TOL {
            return Err(Error::NotHermitian { defect });
        }
    }
    let mut a = h.hermitize();
    let mut q = ComplexMatrix::identity(n);
    if n > 1 && norm > 0.0 {
        let target = SWEEP_TOL * norm;
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= target {
                converged = true;
                break;
            }
            for p in 0..n {
                for r in p + 1..n {
                    rotate(&mut a, &mut q, p, r);
                }
            }
        }
        if !converged && off_diagonal_norm(&a) > target {
            return Err(Error::NoConvergence("Jacobi eigensolver"));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| q[(r, order[c])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Frobenius-nearest PSD matrix: eigenvalues clipped at zero.
pub fn psd_project(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(h)?;
    if eig.min_eigenvalue() >= 0.0 {
        return Ok(h.hermitize());
    }
    Ok(eig.reconstruct(|l| l.max(0.0)))
}

/// Factors a PSD matrix as `G* G` with `G` having one row per eigenvalue
/// above `rank_tol`. A minimum eigenvalue below `-rank_tol` is rejected.
pub fn gram_factor(k: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let eig = herm_eig(k)?;
    let min = eig.min_eigenvalue();
    if min < -rank_tol {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let n = k.rows();
    let kept: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > rank_tol).collect();
    let mut g = ComplexMatrix::zeros(kept.len(), n);
    for (row, &i) in kept.iter().enumerate() {
        let w = eig.eigenvalues[i].sqrt();
        for p in 0..n {
            g[(row, p)] = eig.eigenvectors[(p, i)].conj() * w;
        }
    }
    Ok(g)
}

/// Largest singular value, as the square root of the top eigenvalue of the
/// smaller of `A A*` and `A* A`.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    a.ensure_finite()?;
    if a.is_empty() {
        return Ok(0.0);
    }
    let gram = if a.rows() <= a.cols() {
        a.matmul(&a.adjoint())
    } else {
        a.adjoint().matmul(a)
    };
    let eig = herm_eig(&gram)?;
    Ok(eig.max_eigenvalue().max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruction_error(h: &ComplexMatrix, eig: &HermitianEig) -> f64 {
        let rebuilt = eig.reconstruct(|l| l);
        rebuilt.sub_matrix(&h.hermitize()).frobenius_norm()
    }

    #[test]
    fn identity_eig() {
        let eig = herm_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(eig.eigenvalues, alloc::vec![1.0, 1.0]);
        let qtq = eig.eigenvectors.adjoint().matmul(&eig.eigenvectors);
        assert!(qtq.sub_matrix(&ComplexMatrix::identity(2)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn swap_matrix_eig() {
        let h = ComplexMatrix::from_rows(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let eig = herm_eig(&h).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut r = rng::rng(7);
        for _ in 0..10 {
            let h = rng::random_hermitian(&mut r, 6, 1.0);
            let eig = herm_eig(&h).unwrap();
            let err = reconstruction_error(&h, &eig);
            assert!(err < 1e-12 * h.frobenius_norm(), "err = {err:.3e}");
            // descending order
            for w in eig.eigenvalues.windows(2) {
                assert!(w[0] >= w[1]);
            }
            let q = &eig.eigenvectors;
            let orth = q.adjoint().matmul(q).sub_matrix(&ComplexMatrix::identity(6));
            assert!(orth.frobenius_norm() < EIG_TOL);
        }
    }

    #[test]
    fn large_random_hermitian_within_tolerance() {
        let mut r = rng::rng(11);
        let h = rng::random_hermitian(&mut r, 50, 2.0);
        let eig = herm_eig(&h).unwrap();
        assert!(reconstruction_error(&h, &eig) <= 1e-11 * h.frobenius_norm());
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = ComplexMatrix::from_rows(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!(matches!(herm_eig(&h), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(matches!(
            herm_eig(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        let mut bad = ComplexMatrix::identity(2);
        bad[(0, 0)] = c(f64::NAN, 0.0);
        assert!(matches!(herm_eig(&bad), Err(Error::NonFinite)));
    }

    #[test]
    fn psd_project_is_fixed_point_on_psd() {
        let mut r = rng::rng(3);
        let g = rng::random_matrix(&mut r, 4, 4, 1.0);
        let p = g.adjoint().matmul(&g);
        let proj = psd_project(&p).unwrap();
        assert!(proj.sub_matrix(&p).frobenius_norm() < EIG_TOL * p.frobenius_norm());
    }

    #[test]
    fn psd_project_clips_negative_part() {
        let h = ComplexMatrix::diag_real(&[1.0, -1.0]);
        let proj = psd_project(&h).unwrap();
        let expected = ComplexMatrix::diag_real(&[1.0, 0.0]);
        assert!(proj.sub_matrix(&expected).frobenius_norm() < 1e-14);
    }

    #[test]
    fn psd_project_idempotent_and_nearest() {
        let mut r = rng::rng(19);
        for _ in 0..5 {
            let h = rng::random_hermitian(&mut r, 5, 1.0);
            let p1 = psd_project(&h).unwrap();
            let p2 = psd_project(&p1).unwrap();
            assert!(p2.sub_matrix(&p1).frobenius_norm() <= 2.0 * EIG_TOL * (1.0 + p1.frobenius_norm()));
            assert!(herm_eig(&p1).unwrap().min_eigenvalue() >= -EIG_TOL);

            // sampled nearest-point property against random PSD competitors
            let dist = h.sub_matrix(&p1).frobenius_norm();
            for _ in 0..100 {
                let scale = r.random::<f64>() + 0.1;
                let g = rng::random_matrix(&mut r, 5, 5, scale);
                let competitor = g.adjoint().matmul(&g);
                let d = h.sub_matrix(&competitor).frobenius_norm();
                assert!(dist <= d + 1e-10);
            }
        }
    }

    #[test]
    fn gram_factor_rank_one() {
        let ones = ComplexMatrix::from_fn(2, 2, |_, _| c(1.0, 0.0));
        let g = gram_factor(&ones, 1e-9).unwrap();
        assert_eq!(g.rows(), 1);
        let back = g.adjoint().matmul(&g);
        assert!(back.sub_matrix(&ones).frobenius_norm() < 1e-13);
    }

    #[test]
    fn gram_factor_zero_matrix() {
        let z = ComplexMatrix::zeros(3, 3);
        let g = gram_factor(&z, 1e-9).unwrap();
        assert_eq!(g.rows(), 0);
    }

    #[test]
    fn gram_factor_rejects_indefinite() {
        let h = ComplexMatrix::diag_real(&[1.0, -1e-3]);
        assert!(matches!(gram_factor(&h, 1e-9), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn gram_factor_roundtrip_random() {
        let mut r = rng::rng(23);
        for _ in 0..8 {
            let g0 = rng::random_matrix(&mut r, 3, 6, 1.0);
            let k = g0.adjoint().matmul(&g0); // PSD of rank <= 3
            let g = gram_factor(&k, 1e-9).unwrap();
            assert!(g.rows() <= 3 + 1);
            let err = g.adjoint().matmul(&g).sub_matrix(&k).frobenius_norm();
            assert!(err <= 10.0 * 1e-9 * k.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn operator_norm_examples() {
        assert!((operator_norm(&ComplexMatrix::identity(3)).unwrap() - 1.0).abs() < 1e-12);
        let d = ComplexMatrix::diag_real(&[0.5, -0.25]);
        assert!((operator_norm(&d).unwrap() - 0.5).abs() < 1e-12);
    }

    /// Independent check: power iteration on `A* A`.
    fn power_iteration_norm(a: &ComplexMatrix, iters: usize) -> f64 {
        let g = a.adjoint().matmul(a);
        let n = g.rows();
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| c(1.0 + (i as f64) * 0.3, 0.7 - (i as f64) * 0.1))
            .collect();
        let mut lambda = 0.0;
        for _ in 0..iters {
            let w = g.matvec(&v);
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            lambda = norm;
            for (vi, wi) in v.iter_mut().zip(&w) {
                *vi = wi / norm;
            }
        }
        lambda.sqrt()
    }

    #[test]
    fn operator_norm_matches_power_iteration() {
        let mut r = rng::rng(31);
        for _ in 0..5 {
            let a = rng::random_matrix(&mut r, 5, 3, 1.0);
            let n1 = operator_norm(&a).unwrap();
            let n2 = power_iteration_norm(&a, 2000);
            assert!((n1 - n2).abs() < 1e-10 * n1.max(1.0), "{n1} vs {n2}");
        }
    }

    #[test]
    fn operator_norm_submultiplicative_sampled() {
        let mut r = rng::rng(37);
        for _ in 0..10 {
            let a = rng::random_matrix(&mut r, 4, 4, 1.0);
            let b = rng::random_matrix(&mut r, 4, 4, 1.0);
            let lhs = operator_norm(&a.matmul(&b)).unwrap();
            let rhs = operator_norm(&a).unwrap() * operator_norm(&b).unwrap();
            assert!(lhs <= rhs + 1e-9);
        }
    }
}
