//! Seeded random matrices for property checks and the verification suite.

use num_complex::Complex64;
use rand::Rng;

use super::ComplexMatrix;

/// Entries drawn uniformly from the complex unit disc.
pub fn random_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..n * n)
        .map(|_| {
            let r = rng.random::<f64>().sqrt();
            let phi = rng.random_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(r, phi)
        })
        .collect();
    ComplexMatrix::from_vec(n, n, data).expect("finite entries")
}

/// Haar-distributed unitary: Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let normal = rand_distr::StandardNormal;
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample::<f64, _>(normal), rng.sample::<f64, _>(normal)))
            .collect();
        for _ in 0..2 {
            for b in &cols {
                let proj: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / nrm).collect());
        }
    }
    let mut m = ComplexMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            m[(i, j)] = *z;
        }
    }
    m
}

/// Random contraction: a random matrix rescaled so that its spectral norm is
/// uniform in `[0, 1]`.
pub fn random_contraction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let a = random_matrix(n, rng);
    let norm = a.spectral_norm().expect("square and finite");
    let target: f64 = rng.random();
    if norm == 0.0 {
        return a;
    }
    a.scale(Complex64::new(target / norm, 0.0))
}
