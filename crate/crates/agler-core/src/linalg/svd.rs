//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations,
//! plus the pseudoinverse, singular-value clipping and frame-operator
//! helpers built on it.

use alloc::vec::Vec;

use num_complex::Complex64;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 60;
const ORTHO_TOL: f64 = 1e-14;

/// Economy-size SVD: `A = U diag(sigma) V*` with `sigma` descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    a.ensure_finite()?;
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint())?;
        return Ok(Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }
    let (m, n) = (a.rows(), a.cols());
    if n == 0 {
        return Ok(Svd {
            u: ComplexMatrix::zeros(m, 0),
            sigma: Vec::new(),
            v: ComplexMatrix::zeros(0, 0),
        });
    }
    let mut b = a.clone();
    let mut v = ComplexMatrix::identity(n);

    let col_dot = |b: &ComplexMatrix, p: usize, q: usize| -> Complex64 {
        let mut acc = Complex64::ZERO;
        for i in 0..m {
            acc += b[(i, p)].conj() * b[(i, q)];
        }
        acc
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = col_dot(&b, p, p).re;
                let beta = col_dot(&b, q, q).re;
                let gamma = col_dot(&b, p, q);
                let g = gamma.norm();
                if g <= ORTHO_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phi = gamma / g;
                let tau = (beta - alpha) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let u21 = -phi.conj() * s;
                let u22 = phi.conj() * c;
                for i in 0..m {
                    let bip = b[(i, p)];
                    let biq = b[(i, q)];
                    b[(i, p)] = bip * c + biq * u21;
                    b[(i, q)] = bip * s + biq * u22;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * u21;
                    v[(i, q)] = vip * s + viq * u22;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        // Accept a slightly looser final state before giving up.
        for p in 0..n {
            for q in p + 1..n {
                let alpha = col_dot(&b, p, p).re;
                let beta = col_dot(&b, q, q).re;
                let g = col_dot(&b, p, q).norm();
                if g > 100.0 * ORTHO_TOL * (alpha * beta).sqrt().max(f64::MIN_POSITIVE) {
                    return Err(Error::NoConvergence("Jacobi SVD"));
                }
            }
        }
    }

    let mut order: Vec<(f64, usize)> = (0..n)
        .map(|j| (col_dot(&b, j, j).re.max(0.0).sqrt(), j))
        .collect();
    order.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));

    let mut u = ComplexMatrix::zeros(m, n);
    let mut vv = ComplexMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &(s, j)) in order.iter().enumerate() {
        sigma.push(s);
        if s > 0.0 {
            for i in 0..m {
                u[(i, k)] = b[(i, j)] / s;
            }
        }
        for i in 0..n {
            vv[(i, k)] = v[(i, j)];
        }
    }
    Ok(Svd { u, sigma, v: vv })
}

/// Moore-Penrose pseudoinverse with a relative singular-value cutoff.
pub fn pinv(a: &ComplexMatrix, rel_cut: f64) -> Result<ComplexMatrix> {
    let s = svd(a)?;
    let cut = rel_cut * s.sigma.first().copied().unwrap_or(0.0);
    let mut out = ComplexMatrix::zeros(a.cols(), a.rows());
    for (k, &sk) in s.sigma.iter().enumerate() {
        if sk <= cut || sk == 0.0 {
            continue;
        }
        let inv = 1.0 / sk;
        for r in 0..a.cols() {
            let vr = s.v[(r, k)] * inv;
            for c in 0..a.rows() {
                out[(r, c)] += vr * s.u[(c, k)].conj();
            }
        }
    }
    Ok(out)
}

/// Clips singular values at `max_sv`, leaving smaller ones untouched:
/// `M -> M V diag(min(sigma, max_sv)/sigma) V*`.
pub fn clip_singular_values(a: &ComplexMatrix, max_sv: f64) -> Result<ComplexMatrix> {
    let s = svd(a)?;
    if s.sigma.iter().all(|&x| x <= max_sv) {
        return Ok(a.clone());
    }
    let n = a.cols();
    let mut shrink = ComplexMatrix::zeros(n, n);
    for (k, &sk) in s.sigma.iter().enumerate() {
        let ratio = if sk > max_sv { max_sv / sk } else { 1.0 };
        for r in 0..n {
            let vr = s.v[(r, k)] * ratio;
            for c in 0..n {
                shrink[(r, c)] += vr * s.v[(c, k)].conj();
            }
        }
    }
    Ok(a.matmul(&shrink))
}

/// Least-squares operator `T` with `T frame[:,p] = eigs[p] frame[:,p]`,
/// extended by zero on the orthocomplement of the frame's column span:
/// `T = (frame diag(eigs)) frame^+`.
pub fn frame_operator(
    frame: &ComplexMatrix,
    eigs: &[Complex64],
    rel_cut: f64,
) -> Result<ComplexMatrix> {
    if frame.cols() != eigs.len() {
        return Err(Error::ShapeMismatch(alloc::format!(
            "frame has {} columns but {} eigenvalues were given",
            frame.cols(),
            eigs.len()
        )));
    }
    let scaled = ComplexMatrix::from_fn(frame.rows(), frame.cols(), |r, c| frame[(r, c)] * eigs[c]);
    Ok(scaled.matmul(&pinv(frame, rel_cut)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::operator_norm;
    use crate::rng;

    #[test]
    fn svd_reconstructs_random() {
        let mut r = rng::rng(53);
        for &(m, n) in &[(5usize, 3usize), (3, 5), (4, 4)] {
            let a = rng::random_matrix(&mut r, m, n, 1.0);
            let s = svd(&a).unwrap();
            let k = m.min(n);
            let mut rebuilt = ComplexMatrix::zeros(m, n);
            for t in 0..k {
                for i in 0..m {
                    for j in 0..n {
                        rebuilt[(i, j)] += s.u[(i, t)] * s.sigma[t] * s.v[(j, t)].conj();
                    }
                }
            }
            let err = rebuilt.sub_matrix(&a).frobenius_norm();
            assert!(err < 1e-12 * a.frobenius_norm(), "err = {err:.3e}");
            for w in s.sigma.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn svd_top_value_is_operator_norm() {
        let mut r = rng::rng(59);
        let a = rng::random_matrix(&mut r, 6, 4, 1.0);
        let s = svd(&a).unwrap();
        let n = operator_norm(&a).unwrap();
        assert!((s.sigma[0] - n).abs() < 1e-10 * n);
    }

    #[test]
    fn pinv_solves_least_squares() {
        let mut r = rng::rng(61);
        let a = rng::random_matrix(&mut r, 6, 3, 1.0);
        let p = pinv(&a, 1e-12).unwrap();
        // A pinv(A) A = A
        let err = a.matmul(&p).matmul(&a).sub_matrix(&a).frobenius_norm();
        assert!(err < 1e-12 * a.frobenius_norm());
    }

    #[test]
    fn clip_caps_norm_only_when_needed() {
        let mut r = rng::rng(67);
        let a = rng::random_matrix(&mut r, 4, 4, 2.0);
        let clipped = clip_singular_values(&a, 1.0).unwrap();
        assert!(operator_norm(&clipped).unwrap() <= 1.0 + 1e-12);
        let small = a.scale_re(1e-3);
        let same = clip_singular_values(&small, 1.0).unwrap();
        assert!(same.sub_matrix(&small).frobenius_norm() < 1e-15);
    }

    #[test]
    fn frame_operator_diagonalizes_basis() {
        let frame = ComplexMatrix::identity(3);
        let eigs = [
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.0),
            Complex64::new(0.0, 0.5),
        ];
        let t = frame_operator(&frame, &eigs, 1e-12).unwrap();
        let expected = ComplexMatrix::diag(&eigs);
        assert!(t.sub_matrix(&expected).frobenius_norm() < 1e-14);
    }
}
