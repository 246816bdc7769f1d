//! Embedding of passive lossy transformations into larger unitaries.
//!
//! For `T = V · diag(σ) · U` with `σ_j ≤ 1`, every singular value below one is
//! paired with an ancilla mode through the coupler
//! `[[cos θ_j, i sin θ_j], [i sin θ_j, cos θ_j]]`, `cos θ_j = σ_j`, giving
//!
//! ```text
//! M = blockdiag(V, I_k) · Θ · blockdiag(U, I_k)
//! ```
//!
//! whose top-left `N x N` block is `T`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{svd, ComplexMatrix, SvdFactors, DEFAULT_TOL};
use crate::{Error, Result};

/// Spectral norms in `(1, 1 + GAIN_WINDOW]` are treated as round-off and clamped.
pub const GAIN_WINDOW: f64 = 1e-9;

/// Singular values within this distance of one get no ancilla.
pub const LOSSLESS_WINDOW: f64 = 1e-12;

/// How a loss figure is derived from the amplitude transmission `η`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossConvention {
    /// `loss = 1 − η`
    #[default]
    Amplitude,
    /// `loss = 1 − η²`, the power coupled into the ancilla.
    Power,
}

impl LossConvention {
    pub fn loss_from_eta(self, eta: f64) -> f64 {
        match self {
            LossConvention::Amplitude => 1.0 - eta,
            LossConvention::Power => 1.0 - eta * eta,
        }
    }

    /// Inverse of [`loss_from_eta`](Self::loss_from_eta) on `[0, 1]`.
    pub fn eta_from_loss(self, loss: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&loss) {
            return Err(Error::OutOfRange {
                name: "loss",
                value: loss,
                range: "[0, 1]",
            });
        }
        Ok(match self {
            LossConvention::Amplitude => 1.0 - loss,
            LossConvention::Power => (1.0 - loss).sqrt(),
        })
    }
}

impl std::str::FromStr for LossConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplitude" => Ok(Self::Amplitude),
            "power" => Ok(Self::Power),
            other => Err(Error::Config(format!("unknown loss convention `{other}`"))),
        }
    }
}

impl std::fmt::Display for LossConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LossConvention::Amplitude => "amplitude",
            LossConvention::Power => "power",
        })
    }
}

/// A square transformation with spectral norm at most one, with its SVD.
#[derive(Clone, Debug)]
pub struct LossyTransform {
    matrix: ComplexMatrix,
    svd: SvdFactors,
    eta: Option<f64>,
}

impl LossyTransform {
    /// Wraps an arbitrary contraction. Norms slightly above one (round-off)
    /// are accepted; anything larger is reported as gain.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let factors = svd(&matrix)?;
        Self::from_parts(matrix, factors, None)
    }

    fn from_parts(matrix: ComplexMatrix, mut svd: SvdFactors, eta: Option<f64>) -> Result<Self> {
        let norm = svd.singular_values[0];
        if norm > 1.0 + GAIN_WINDOW {
            return Err(Error::Gain { norm });
        }
        for s in &mut svd.singular_values {
            *s = s.min(1.0);
        }
        Ok(Self { matrix, svd, eta })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn svd(&self) -> &SvdFactors {
        &self.svd
    }

    /// Set only for members of the lossy 50/50 beamsplitter family.
    pub fn eta(&self) -> Option<f64> {
        self.eta
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    /// Loss under `convention`, from the recorded `η` or else the smallest
    /// singular value.
    pub fn loss_parameter(&self, convention: LossConvention) -> f64 {
        convention.loss_from_eta(self.eta.unwrap_or_else(|| self.svd.smallest()))
    }
}

/// The canonical input coupler `(1/√2)[[1, i], [i, 1]]`.
pub fn beamsplitter_u() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    ComplexMatrix::from_vec(
        2,
        2,
        vec![Complex64::new(h, 0.0), Complex64::new(0.0, h), Complex64::new(0.0, h), Complex64::new(h, 0.0)],
    )
    .expect("2x2")
}

/// The canonical output stage `(1/√2)[[i, i], [−1, 1]]`.
pub fn beamsplitter_v() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    ComplexMatrix::from_vec(
        2,
        2,
        vec![Complex64::new(0.0, h), Complex64::new(0.0, h), Complex64::new(-h, 0.0), Complex64::new(h, 0.0)],
    )
    .expect("2x2")
}

/// `(1/2)[[−η + i, −1 + iη], [−1 + iη, η − i]]`: a 50/50 splitter for every `η`,
/// unitary only at `η = 1`.
///
/// The SVD is populated with the canonical factors `V`, `diag(1, η)`, `U`
/// rather than a numerically computed one, so that the dilation reproduces
/// the reference 3x3 interferometer entry by entry.
pub fn lossy_beamsplitter(eta: f64) -> Result<LossyTransform> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::OutOfRange {
            name: "eta",
            value: eta,
            range: "[0, 1]",
        });
    }
    let matrix = ComplexMatrix::from_vec(
        2,
        2,
        vec![
            Complex64::new(-eta, 1.0) / 2.0,
            Complex64::new(-1.0, eta) / 2.0,
            Complex64::new(-1.0, eta) / 2.0,
            Complex64::new(eta, -1.0) / 2.0,
        ],
    )?;
    let factors = SvdFactors {
        v: beamsplitter_v(),
        singular_values: vec![1.0, eta],
        u: beamsplitter_u(),
    };
    LossyTransform::from_parts(matrix, factors, Some(eta))
}

/// Unitary extension of a [`LossyTransform`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DilatedUnitary {
    pub matrix: ComplexMatrix,
    /// 1-based ports of the original system, `1..=N`.
    pub system_ports: Vec<usize>,
    /// 1-based ancilla ports, `N+1..=N+k`.
    pub ancilla_ports: Vec<usize>,
    /// Coupling angle per ancilla, in `[0, π/2]`.
    pub thetas: Vec<f64>,
}

impl DilatedUnitary {
    pub fn system_size(&self) -> usize {
        self.system_ports.len()
    }

    pub fn ancilla_count(&self) -> usize {
        self.ancilla_ports.len()
    }

    /// The top-left system block.
    pub fn system_block(&self) -> ComplexMatrix {
        let n = self.system_size();
        self.matrix.submatrix(0, 0, n, n)
    }

    /// Appends decoupled ancillas (`θ = 0`) until the matrix has `modes` modes.
    pub fn padded_to(&self, modes: usize) -> DilatedUnitary {
        let current = self.matrix.rows();
        if modes <= current {
            return self.clone();
        }
        let extra = modes - current;
        DilatedUnitary {
            matrix: self.matrix.pad_identity(extra),
            system_ports: self.system_ports.clone(),
            ancilla_ports: (self.system_size() + 1..=modes).collect(),
            thetas: self.thetas.iter().copied().chain(std::iter::repeat_n(0.0, extra)).collect(),
        }
    }

    /// Checks unitarity and block recovery of `source` at `tol`.
    pub fn validate(&self, source: &ComplexMatrix, tol: f64) -> Result<()> {
        self.matrix.require_unitary(tol)?;
        let err = self.system_block().max_abs_diff(source);
        if err >= tol {
            return Err(Error::Verification(format!("system block differs from source by {err:e}")));
        }
        Ok(())
    }
}

/// Dilates `t` with one ancilla per singular value below `1 − 1e−12`.
///
/// Ancillas follow the system modes in descending singular-value order.
pub fn dilate(t: &LossyTransform) -> Result<DilatedUnitary> {
    let n = t.size();
    let sv = &t.svd.singular_values;
    let lossy: Vec<usize> = (0..n).filter(|&j| sv[j] < 1.0 - LOSSLESS_WINDOW).collect();
    let k = lossy.len();
    let total = n + k;

    let mut coupling = ComplexMatrix::identity(total);
    let mut thetas = Vec::with_capacity(k);
    for (a, &j) in lossy.iter().enumerate() {
        let sigma = sv[j].clamp(0.0, 1.0);
        // sqrt((1-σ)(1+σ)) keeps sin θ accurate when σ is close to one.
        let sin = ((1.0 - sigma) * (1.0 + sigma)).sqrt();
        let anc = n + a;
        coupling[(j, j)] = Complex64::new(sigma, 0.0);
        coupling[(anc, anc)] = Complex64::new(sigma, 0.0);
        coupling[(j, anc)] = Complex64::new(0.0, sin);
        coupling[(anc, j)] = Complex64::new(0.0, sin);
        thetas.push(sigma.acos());
    }

    let outer = t.svd.v.pad_identity(k);
    let inner = t.svd.u.pad_identity(k);
    let matrix = &(&outer * &coupling) * &inner;

    let dilated = DilatedUnitary {
        matrix,
        system_ports: (1..=n).collect(),
        ancilla_ports: (n + 1..=total).collect(),
        thetas,
    };
    dilated.matrix.require_unitary(DEFAULT_TOL)?;
    Ok(dilated)
}

/// The reference interferometer: lossy beamsplitter with ancilla coupling `θ`,
/// written out entry by entry.
pub fn reference_interferometer(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    let h = FRAC_1_SQRT_2;
    let z = Complex64::new;
    ComplexMatrix::from_vec(
        3,
        3,
        vec![
            z(-c, 1.0) / 2.0,
            z(-1.0, c) / 2.0,
            z(-s * h, 0.0),
            z(-1.0, c) / 2.0,
            z(c, -1.0) / 2.0,
            z(0.0, s * h),
            z(-s * h, 0.0),
            z(0.0, s * h),
            z(c, 0.0),
        ],
    )
    .expect("3x3")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_contraction;
    use rand::SeedableRng;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn beamsplitter_family_endpoints() {
        let one = lossy_beamsplitter(1.0).unwrap();
        let expected = ComplexMatrix::from_rows(&[vec![c(-1.0, 1.0), c(-1.0, 1.0)], vec![c(-1.0, 1.0), c(1.0, -1.0)]])
            .unwrap()
            .scale(c(0.5, 0.0));
        assert!(one.matrix().max_abs_diff(&expected) < 1e-16);
        assert!(one.matrix().is_unitary(1e-12).unwrap());

        let zero = lossy_beamsplitter(0.0).unwrap();
        let expected = ComplexMatrix::from_rows(&[vec![c(0.0, 1.0), c(-1.0, 0.0)], vec![c(-1.0, 0.0), c(0.0, -1.0)]])
            .unwrap()
            .scale(c(0.5, 0.0));
        assert!(zero.matrix().max_abs_diff(&expected) < 1e-16);
        let computed = svd(zero.matrix()).unwrap();
        assert!((computed.singular_values[0] - 1.0).abs() < 1e-14);
        assert!(computed.singular_values[1].abs() < 1e-14);
    }

    #[test]
    fn canonical_factors_reconstruct() {
        for eta in [0.0, 0.2, 0.5, 0.93, 1.0] {
            let t = lossy_beamsplitter(eta).unwrap();
            t.svd().validate(t.matrix(), 1e-15).unwrap();
        }
    }

    #[test]
    fn equal_splitting_for_every_eta() {
        for eta in [0.0, 0.1, 0.37, 0.5, 0.99, 1.0] {
            let t = lossy_beamsplitter(eta).unwrap();
            for z in t.matrix().as_slice() {
                assert!((z.norm_sqr() - (1.0 + eta * eta) / 4.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn eta_out_of_range() {
        assert!(matches!(lossy_beamsplitter(1.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(lossy_beamsplitter(-0.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn loss_parameter_conventions() {
        let t = lossy_beamsplitter(1.0).unwrap();
        assert_eq!(t.loss_parameter(LossConvention::Amplitude), 0.0);
        assert_eq!(t.loss_parameter(LossConvention::Power), 0.0);
        let t = lossy_beamsplitter(0.0).unwrap();
        assert_eq!(t.loss_parameter(LossConvention::Amplitude), 1.0);
        assert_eq!(t.loss_parameter(LossConvention::Power), 1.0);
        let t = lossy_beamsplitter(0.93).unwrap();
        assert!((t.loss_parameter(LossConvention::Amplitude) - 0.07).abs() < 1e-15);
        assert!((t.loss_parameter(LossConvention::Power) - (1.0 - 0.93 * 0.93)).abs() < 1e-15);
        // without a recorded eta the smallest singular value is used
        let generic = LossyTransform::new(lossy_beamsplitter(0.4).unwrap().matrix().clone()).unwrap();
        assert!((generic.loss_parameter(LossConvention::Amplitude) - 0.6).abs() < 1e-14);
    }

    #[test]
    fn unitary_input_needs_no_ancilla() {
        let t = lossy_beamsplitter(1.0).unwrap();
        let d = dilate(&t).unwrap();
        assert_eq!(d.ancilla_count(), 0);
        assert!(d.matrix.max_abs_diff(t.matrix()) < 1e-15);
    }

    #[test]
    fn reproduces_reference_interferometer() {
        for theta in [0.1, 0.4, 1.0, FRAC_PI_2] {
            let d = dilate(&lossy_beamsplitter(theta.cos()).unwrap()).unwrap();
            assert_eq!(d.ancilla_ports, vec![3]);
            assert!((d.thetas[0] - theta).abs() < 1e-12);
            assert!(d.matrix.max_abs_diff(&reference_interferometer(theta)) < 1e-12);
        }
        let d = dilate(&lossy_beamsplitter(1.0).unwrap()).unwrap().padded_to(3);
        assert!(d.matrix.max_abs_diff(&reference_interferometer(0.0)) < 1e-15);
        assert_eq!(d.thetas, vec![0.0]);
    }

    #[test]
    fn zero_transform_fully_transmits_to_ancillas() {
        let t = LossyTransform::new(ComplexMatrix::zeros(2, 2)).unwrap();
        let d = dilate(&t).unwrap();
        assert_eq!(d.matrix.rows(), 4);
        assert_eq!(d.thetas, vec![FRAC_PI_2; 2]);
        d.validate(t.matrix(), 1e-12).unwrap();
        // system -> ancilla block is itself unitary
        let cross = d.matrix.submatrix(2, 0, 2, 2);
        assert!(cross.is_unitary(1e-12).unwrap());
    }

    #[test]
    fn gain_is_rejected_and_roundoff_clamped() {
        let two = ComplexMatrix::identity(2).scale(c(2.0, 0.0));
        assert!(matches!(LossyTransform::new(two), Err(Error::Gain { .. })));
        let barely = ComplexMatrix::identity(2).scale(c(1.0 + 1e-10, 0.0));
        let t = LossyTransform::new(barely).unwrap();
        assert_eq!(dilate(&t).unwrap().ancilla_count(), 0);
    }

    #[test]
    fn random_contractions_dilate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for trial in 0..200 {
            let n = 2 + trial % 4;
            let a = random_contraction(n, &mut rng);
            let t = LossyTransform::new(a.clone()).unwrap();
            let d = dilate(&t).unwrap();
            d.validate(&a, 1e-10).unwrap();
            assert_eq!(d.ancilla_count(), t.svd().singular_values.iter().filter(|&&s| s < 1.0 - 1e-12).count());
            // re-dilating the recovered block again recovers it
            let again = dilate(&LossyTransform::new(d.system_block()).unwrap()).unwrap();
            again.validate(&a, 1e-10).unwrap();
        }
    }
}
