//! Eigendecomposition of general complex matrices: Householder reduction to
//! Hessenberg form, single-shift QR iteration for the eigenvalues, inverse
//! iteration for the eigenvectors.
//!
//! Only diagonalizable matrices with well-separated eigenvalues are
//! supported on the eigenvector path; anything numerically defective is
//! rejected rather than approximated.

use alloc::vec::Vec;

use num_complex::Complex64;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

use super::lu::{lu_factor, solve};
use super::svd::svd;

/// Eigenvalue pairs below this relative separation are treated as repeated,
/// which the diagonalizable-only path rejects.
const SEPARATION_TOL: f64 = 1e-8;
/// Relative residual `||A v - lambda v||` accepted per eigenvector.
const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Eig {
    /// Sorted by descending real part, then descending imaginary part.
    pub values: Vec<Complex64>,
    /// Unit-norm eigenvector columns, same order as `values`.
    pub vectors: ComplexMatrix,
}

fn hessenberg(a: &mut ComplexMatrix) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let len = n - k - 1;
        let mut x: Vec<Complex64> = (0..len).map(|i| a[(k + 1 + i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = x[0];
        let alpha = if x0 == Complex64::ZERO {
            Complex64::new(-xnorm, 0.0)
        } else {
            -(x0 / x0.norm()) * xnorm
        };
        x[0] -= alpha;
        let vnorm2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let v = x;
        // A <- P A with P = I - 2 v v* / |v|^2 acting on rows k+1..
        for j in 0..n {
            let mut w = Complex64::ZERO;
            for i in 0..len {
                w += v[i].conj() * a[(k + 1 + i, j)];
            }
            let w = w * (2.0 / vnorm2);
            for i in 0..len {
                a[(k + 1 + i, j)] -= v[i] * w;
            }
        }
        // A <- A P on columns k+1..
        for i in 0..n {
            let mut w = Complex64::ZERO;
            for j in 0..len {
                w += a[(i, k + 1 + j)] * v[j];
            }
            let w = w * (2.0 / vnorm2);
            for j in 0..len {
                a[(i, k + 1 + j)] -= w * v[j].conj();
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = Complex64::ZERO;
        }
    }
}

/// 2x2 unitary `G` with `G (x, y)^T = (r, 0)^T`, returned row-major.
fn givens(x: Complex64, y: Complex64) -> [Complex64; 4] {
    if y == Complex64::ZERO {
        return [Complex64::ONE, Complex64::ZERO, Complex64::ZERO, Complex64::ONE];
    }
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    let cp = x / r;
    let sp = y / r;
    [cp.conj(), sp.conj(), -sp, cp]
}

fn apply_rows(h: &mut ComplexMatrix, k: usize, g: &[Complex64; 4]) {
    let n = h.cols();
    for j in 0..n {
        let a = h[(k, j)];
        let b = h[(k + 1, j)];
        h[(k, j)] = g[0] * a + g[1] * b;
        h[(k + 1, j)] = g[2] * a + g[3] * b;
    }
}

fn apply_cols(h: &mut ComplexMatrix, k: usize, g: &[Complex64; 4]) {
    let n = h.rows();
    for i in 0..n {
        let a = h[(i, k)];
        let b = h[(i, k + 1)];
        h[(i, k)] = a * g[0].conj() + b * g[1].conj();
        h[(i, k + 1)] = a * g[2].conj() + b * g[3].conj();
    }
}

fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let tr = a + d;
    let disc = ((a - d) * (a - d) + b * c * 4.0).sqrt();
    let r1 = (tr + disc) * 0.5;
    let r2 = (tr - disc) * 0.5;
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, mu: Complex64) {
    let mut x = h[(lo, lo)] - mu;
    let mut y = h[(lo + 1, lo)];
    for k in lo..hi {
        let g = givens(x, y);
        apply_rows(h, k, &g);
        apply_cols(h, k, &g);
        if k > lo {
            h[(k + 1, k - 1)] = Complex64::ZERO;
        }
        if k + 2 <= hi {
            x = h[(k + 1, k)];
            y = h[(k + 2, k)];
        }
    }
}

/// Eigenvalues of a general complex square matrix.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    a.ensure_square()?;
    a.ensure_finite()?;
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = a.clone();
    hessenberg(&mut h);
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;

    let mut values = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut stagnation = 0usize;
    let mut total = 0usize;
    let budget = 100 * n + 300;
    loop {
        for i in 0..hi {
            let denom = h[(i, i)].norm() + h[(i + 1, i + 1)].norm();
            let denom = if denom == 0.0 { scale } else { denom };
            if h[(i + 1, i)].norm() <= eps * denom {
                h[(i + 1, i)] = Complex64::ZERO;
            }
        }
        while hi > 0 && h[(hi, hi - 1)] == Complex64::ZERO {
            values.push(h[(hi, hi)]);
            hi -= 1;
            stagnation = 0;
        }
        if hi == 0 {
            values.push(h[(0, 0)]);
            break;
        }
        let mut lo = hi;
        while lo > 0 && h[(lo, lo - 1)] != Complex64::ZERO {
            lo -= 1;
        }
        total += 1;
        stagnation += 1;
        if total > budget {
            return Err(Error::NoConvergence("QR eigenvalue iteration"));
        }
        let mu = if stagnation % 16 == 0 {
            h[(hi, hi)] + Complex64::new(1.0, 0.5).scale(h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_step(&mut h, lo, hi, mu);
    }
    values.sort_unstable_by(|p, q| (q.re, q.im).partial_cmp(&(p.re, p.im)).unwrap());
    Ok(values)
}

/// Deterministic pseudo-random start vector for inverse iteration.
fn start_vector(n: usize, salt: u64) -> Vec<Complex64> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64 ^ salt.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    let mut next = || {
        state ^= state >> 30;
        state = state.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        state ^= state >> 27;
        state = state.wrapping_mul(0x94d0_49bb_1331_11eb);
        state ^= state >> 31;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    (0..n).map(|_| Complex64::new(next(), next())).collect()
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
    norm
}

/// Full eigendecomposition for diagonalizable matrices with simple spectrum.
pub fn eig_diagonalizable(a: &ComplexMatrix) -> Result<Eig> {
    let values = eigenvalues(a)?;
    let n = values.len();
    if n == 0 {
        return Ok(Eig {
            values,
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let sep_ref = values
        .iter()
        .map(|z| z.norm())
        .fold(scale, f64::max);
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() < SEPARATION_TOL * sep_ref {
                return Err(Error::Defective);
            }
        }
    }

    let mut vectors = ComplexMatrix::zeros(n, n);
    for (idx, &lambda) in values.iter().enumerate() {
        let mut jitter = 1e-13 * sep_ref;
        let mut accepted = false;
        'attempts: for attempt in 0..4 {
            let mut shifted = a.clone();
            for i in 0..n {
                shifted[(i, i)] -= lambda + Complex64::new(jitter, jitter * 0.5);
            }
            let factors = match lu_factor(&shifted) {
                Ok(f) => f,
                Err(_) => {
                    jitter *= 100.0;
                    continue;
                }
            };
            let mut v = start_vector(n, (idx as u64) << 8 | attempt as u64);
            normalize(&mut v);
            for _ in 0..6 {
                let mut w = factors.solve_vec(&v);
                if normalize(&mut w) == 0.0 || w.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
                {
                    jitter *= 100.0;
                    continue 'attempts;
                }
                v = w;
                let av = a.matvec(&v);
                let resid: f64 = av
                    .iter()
                    .zip(&v)
                    .map(|(x, y)| (x - lambda * y).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                if resid <= RESIDUAL_TOL * sep_ref {
                    for (r, &z) in v.iter().enumerate() {
                        vectors[(r, idx)] = z;
                    }
                    accepted = true;
                    break 'attempts;
                }
            }
            jitter *= 100.0;
        }
        if !accepted {
            return Err(Error::Defective);
        }
    }

    // A nearly singular eigenvector basis means the matrix is effectively
    // defective even though the eigenvalues look separated.
    let s = svd(&vectors)?;
    let smin = s.sigma.last().copied().unwrap_or(0.0);
    let smax = s.sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 || smin < 1e-10 * smax {
        return Err(Error::Defective);
    }
    Ok(Eig { values, vectors })
}

/// Applies `f` to a diagonalizable matrix through its eigendecomposition:
/// `P diag(f(lambda)) P^{-1}`.
pub fn matrix_function(
    eig: &Eig,
    p_inv: &ComplexMatrix,
    mut f: impl FnMut(Complex64) -> Complex64,
) -> ComplexMatrix {
    let n = eig.values.len();
    let mut scaled = ComplexMatrix::zeros(n, n);
    for (k, &lambda) in eig.values.iter().enumerate() {
        let fv = f(lambda);
        for r in 0..n {
            scaled[(r, k)] = eig.vectors[(r, k)] * fv;
        }
    }
    scaled.matmul(p_inv)
}

/// Convenience: the inverse of the eigenvector matrix.
pub fn eigenbasis_inverse(eig: &Eig) -> Result<ComplexMatrix> {
    solve(&eig.vectors, &ComplexMatrix::identity(eig.values.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::herm_eig;
    use crate::rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sort_key(values: &mut Vec<Complex64>) {
        values.sort_unstable_by(|p, q| (q.re, q.im).partial_cmp(&(p.re, p.im)).unwrap());
    }

    #[test]
    fn eigenvalues_of_triangular() {
        let a = ComplexMatrix::from_rows(
            3,
            3,
            &[
                c(1.0, 1.0),
                c(2.0, 0.0),
                c(3.0, 0.0),
                c(0.0, 0.0),
                c(-0.5, 0.2),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(2.5, -1.0),
            ],
        )
        .unwrap();
        let vals = eigenvalues(&a).unwrap();
        let mut expected = vec![c(1.0, 1.0), c(-0.5, 0.2), c(2.5, -1.0)];
        sort_key(&mut expected);
        for (v, e) in vals.iter().zip(&expected) {
            assert!((v - e).norm() < 1e-12, "{v} vs {e}");
        }
    }

    #[test]
    fn eigenvalues_match_similarity() {
        let mut r = rng::rng(71);
        for trial in 0..5 {
            let n = 4 + trial % 3;
            let mut expected: Vec<Complex64> = (0..n)
                .map(|i| c(0.3 * i as f64 - 0.7, 0.4 * (i as f64) * (-1.0f64).powi(i as i32)))
                .collect();
            let p = rng::random_matrix(&mut r, n, n, 1.0);
            let d = ComplexMatrix::diag(&expected);
            let a = crate::linalg::solve(&p, &d.matmul(&p)).unwrap(); // P^{-1} D P
            let vals = eigenvalues(&a.transpose()).unwrap(); // same spectrum
            sort_key(&mut expected);
            for (v, e) in vals.iter().zip(&expected) {
                assert!((v - e).norm() < 1e-9, "{v} vs {e}");
            }
        }
    }

    #[test]
    fn eig_recovers_diagonalizable() {
        let mut r = rng::rng(73);
        for _ in 0..5 {
            let n = 5;
            let expected: Vec<Complex64> = (0..n)
                .map(|i| c(1.0 + 0.37 * i as f64, -0.5 + 0.21 * i as f64))
                .collect();
            let q = rng::random_unitary(&mut r, n);
            let a = q
                .matmul(&ComplexMatrix::diag(&expected))
                .matmul(&q.adjoint());
            let eig = eig_diagonalizable(&a).unwrap();
            // residual check per pair
            for k in 0..n {
                let v = eig.vectors.column(k);
                let av = a.matvec(&v);
                let resid: f64 = av
                    .iter()
                    .zip(&v)
                    .map(|(x, y)| (x - eig.values[k] * y).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(resid < 1e-9, "resid = {resid:.3e}");
            }
        }
    }

    #[test]
    fn hermitian_cross_check() {
        let mut r = rng::rng(79);
        let h = rng::random_hermitian(&mut r, 5, 1.0);
        let general = eigenvalues(&h).unwrap();
        let herm = herm_eig(&h).unwrap();
        for (g, e) in general.iter().zip(&herm.eigenvalues) {
            assert!((g.re - e).abs() < 1e-10 && g.im.abs() < 1e-10);
        }
    }

    #[test]
    fn defective_rejected() {
        // Jordan block
        let a = ComplexMatrix::from_rows(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .unwrap();
        assert!(matches!(eig_diagonalizable(&a), Err(Error::Defective)));
    }

    #[test]
    fn nilpotent_eigenvalues_are_zero() {
        let mut a = ComplexMatrix::zeros(3, 3);
        a[(0, 1)] = c(1.0, 0.0);
        a[(1, 2)] = c(2.0, -1.0);
        let vals = eigenvalues(&a).unwrap();
        for v in vals {
            assert!(v.norm() < 1e-10);
        }
    }
}
