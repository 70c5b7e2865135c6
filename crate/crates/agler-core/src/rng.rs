//! Seeded randomness helpers.
//!
//! Every randomized entry point in this crate threads an explicit 64-bit
//! seed through a ChaCha stream; there is no global or ambient randomness.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::ComplexMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian(r: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = r.sample(StandardNormal);
    let im: f64 = r.sample(StandardNormal);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

/// Uniform on the closed disk of the given radius.
pub fn complex_in_disk(r: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let rho = radius * r.random::<f64>().sqrt();
    let theta = core::f64::consts::TAU * r.random::<f64>();
    Complex64::new(rho * theta.cos(), rho * theta.sin())
}

pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(r) * scale)
}

pub fn random_hermitian(r: &mut ChaCha8Rng, n: usize, scale: f64) -> ComplexMatrix {
    random_matrix(r, n, n, scale).hermitize()
}

/// Haar-ish unitary from modified Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary(r: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = random_matrix(r, n, n, 1.0);
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| g.column(j)).collect();
    for j in 0..n {
        for k in 0..j {
            let mut dot = Complex64::ZERO;
            for i in 0..n {
                dot += cols[k][i].conj() * cols[j][i];
            }
            for i in 0..n {
                let t = cols[k][i] * dot;
                cols[j][i] -= t;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    ComplexMatrix::from_columns(&cols).expect("square by construction")
}
