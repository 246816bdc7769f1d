//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! The factors are returned in the order `A = V · diag(σ) · U`, with `U`
//! acting first. Columns of `A · W` are orthogonalised by plane rotations
//! accumulated in `W`; then `A = (A W) W†`, the column norms are the singular
//! values, the normalised columns form `V` and `U = W†`.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Relative threshold below which a singular value is treated as exactly zero
/// and its left singular vector is rebuilt by orthogonal completion.
const RANK_TOL: f64 = 1e-14;

/// `A = V · diag(singular_values) · U` with `V`, `U` unitary.
///
/// Phases and the order of degenerate singular vectors are not canonicalised;
/// only the reconstruction and invariant quantities are meaningful.
#[derive(Clone, Debug, PartialEq)]
pub struct SvdFactors {
    pub v: ComplexMatrix,
    /// Descending, non-negative.
    pub singular_values: Vec<f64>,
    pub u: ComplexMatrix,
}

impl SvdFactors {
    /// `V · diag(σ) · U`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut vs = self.v.clone();
        for (j, &s) in self.singular_values.iter().enumerate() {
            vs.scale_col(j, Complex64::new(s, 0.0));
        }
        &vs * &self.u
    }

    /// Checks ordering, non-negativity, factor unitarity and reconstruction
    /// against `source`, all at `tol`.
    pub fn validate(&self, source: &ComplexMatrix, tol: f64) -> Result<()> {
        let sv = &self.singular_values;
        if sv.iter().any(|&s| s < 0.0) || sv.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Verification(format!(
                "singular values must be non-negative and descending: {sv:?}"
            )));
        }
        self.v.require_unitary(tol)?;
        self.u.require_unitary(tol)?;
        let err = self.reconstruct().max_abs_diff(source);
        if err >= tol {
            return Err(Error::Verification(format!("reconstruction error {err:e} >= {tol:e}")));
        }
        Ok(())
    }

    pub fn smallest(&self) -> f64 {
        *self.singular_values.last().expect("non-empty spectrum")
    }
}

/// SVD of a square matrix.
pub fn svd(a: &ComplexMatrix) -> Result<SvdFactors> {
    let n = a.require_square()?;
    a.check_finite()?;

    // Column-major working copies: cols[j] is column j of A·W.
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut w: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                rotated |= rotate_pair(&mut cols, &mut w, p, q);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = cols.iter().enumerate().map(|(j, c)| (norm(c), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));

    let sigma_max = order[0].0;
    let cutoff = RANK_TOL * sigma_max.max(f64::MIN_POSITIVE);

    let mut singular_values = Vec::with_capacity(n);
    let mut left: Vec<Option<Vec<Complex64>>> = Vec::with_capacity(n);
    for &(s, j) in &order {
        if s > cutoff && sigma_max > 0.0 {
            singular_values.push(s);
            left.push(Some(cols[j].iter().map(|z| z / s).collect()));
        } else {
            singular_values.push(0.0);
            left.push(None);
        }
    }
    let left = complete_basis(left, n);

    let mut v = ComplexMatrix::zeros(n, n);
    let mut u = ComplexMatrix::zeros(n, n);
    for (k, &(_, j)) in order.iter().enumerate() {
        for i in 0..n {
            v[(i, k)] = left[k][i];
            // U = W†, so row k of U is the conjugate of column j of W.
            u[(k, i)] = w[j][i].conj();
        }
    }

    Ok(SvdFactors { v, singular_values, u })
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Orthogonalises columns `p` and `q`; returns whether a rotation was applied.
fn rotate_pair(cols: &mut [Vec<Complex64>], w: &mut [Vec<Complex64>], p: usize, q: usize) -> bool {
    let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
    let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
    let gamma = inner(&cols[p], &cols[q]);
    let g = gamma.norm();
    if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
        return false;
    }

    // Rotate the phase of column q so that <p, q> becomes real and positive,
    // then apply a real Jacobi rotation.
    let phase = (gamma / g).conj();
    let zeta = (beta - alpha) / (2.0 * g);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;

    for m in [&mut *cols, &mut *w] {
        let (lo, hi) = m.split_at_mut(q);
        let (xp, xq) = (&mut lo[p], &mut hi[0]);
        for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
            let bq = *b * phase;
            let ap = *a;
            *a = ap * c - bq * s;
            *b = ap * s + bq * c;
        }
    }
    true
}

/// Fills the missing vectors of a partial orthonormal set with standard basis
/// directions, orthogonalised twice by Gram–Schmidt.
fn complete_basis(partial: Vec<Option<Vec<Complex64>>>, n: usize) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = partial.iter().flatten().cloned().collect();
    let mut out = Vec::with_capacity(n);
    for slot in partial {
        match slot {
            Some(v) => out.push(v),
            None => {
                let mut best: Option<Vec<Complex64>> = None;
                let mut best_norm = 0.0;
                for k in 0..n {
                    let mut cand = vec![Complex64::new(0.0, 0.0); n];
                    cand[k] = Complex64::new(1.0, 0.0);
                    for _ in 0..2 {
                        for b in basis.iter() {
                            let proj = inner(b, &cand);
                            for (c, bi) in cand.iter_mut().zip(b) {
                                *c -= proj * bi;
                            }
                        }
                    }
                    let nrm = norm(&cand);
                    if nrm > best_norm {
                        best_norm = nrm;
                        best = Some(cand.into_iter().map(|z| z / nrm).collect());
                    }
                }
                let v = best.expect("a completion direction always exists");
                basis.push(v.clone());
                out.push(v);
            }
        }
    }
    out
}
