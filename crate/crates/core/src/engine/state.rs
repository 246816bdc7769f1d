use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{check_inputs, check_port, PhotonPairSource};
use crate::linalg::ComplexMatrix;
use crate::{Error, Result};

/// Output amplitudes of the pair after the interferometer.
///
/// `amplitude(m, n)` is the amplitude for the signal to leave port `m` and the
/// idler port `n` when the signal entered `port_a` and the idler `port_b`.
/// The exchanged assignment has amplitude `amplitude(n, m)`; the two are
/// combined incoherently except for the weight `coherence`.
#[derive(Clone, Debug)]
pub struct TwoPhotonState {
    n_modes: usize,
    amplitudes: Vec<Complex64>,
    coherence: f64,
}

impl TwoPhotonState {
    pub fn evolve(m: &ComplexMatrix, source: &PhotonPairSource, gamma: f64) -> Result<Self> {
        let n = check_inputs(m, source, gamma)?;
        let (p, q) = source.indices();
        let mut amplitudes = Vec::with_capacity(n * n);
        for ms in 0..n {
            for ni in 0..n {
                amplitudes.push(m[(ms, p)] * m[(ni, q)]);
            }
        }
        Ok(Self {
            n_modes: n,
            amplitudes,
            coherence: gamma,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn coherence(&self) -> f64 {
        self.coherence
    }

    /// 1-based ports.
    pub fn amplitude(&self, signal_port: usize, idler_port: usize) -> Complex64 {
        self.amplitudes[(signal_port - 1) * self.n_modes + idler_port - 1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Probability of one photon in each of ports `m` and `n` (1-based,
    /// unordered), or of both in the same port when `m == n`.
    pub fn coincidence(&self, m: usize, n: usize) -> Result<f64> {
        check_port(m, self.n_modes)?;
        check_port(n, self.n_modes)?;
        let direct = self.amplitude(m, n);
        let exchanged = self.amplitude(n, m);
        let g = self.coherence;
        Ok(if m == n {
            (1.0 + g) * direct.norm_sqr()
        } else {
            direct.norm_sqr() + exchanged.norm_sqr() + 2.0 * g * (direct * exchanged.conj()).re
        })
    }
}

/// Coincidence probability for output ports `m`, `n` (1-based).
///
/// With `p`, `q` the source ports: for `m ≠ n`
/// `|M[m,p]M[n,q]|² + |M[m,q]M[n,p]|² + 2γ Re(M[m,p]M[n,q] · conj(M[m,q]M[n,p]))`,
/// and for `m = n` the bunching probability `(1 + γ)|M[m,p]M[m,q]|²`.
pub fn coincidence(m_mat: &ComplexMatrix, source: &PhotonPairSource, gamma: f64, m: usize, n: usize) -> Result<f64> {
    TwoPhotonState::evolve(m_mat, source, gamma)?.coincidence(m, n)
}

pub fn coincidence_map(m: &ComplexMatrix, source: &PhotonPairSource, gamma: f64) -> Result<CoincidenceMap> {
    let state = TwoPhotonState::evolve(m, source, gamma)?;
    let n = state.n_modes();
    let mut probabilities = Vec::with_capacity(n * (n + 1) / 2);
    for a in 1..=n {
        for b in a..=n {
            probabilities.push(state.coincidence(a, b)?);
        }
    }
    Ok(CoincidenceMap { n_modes: n, probabilities })
}

/// Probabilities over unordered output-port pairs `(m, n)`, `m ≤ n`, 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct CoincidenceMap {
    n_modes: usize,
    probabilities: Vec<f64>,
}

impl CoincidenceMap {
    pub(crate) fn from_probabilities(n_modes: usize, probabilities: Vec<f64>) -> Self {
        debug_assert_eq!(probabilities.len(), n_modes * (n_modes + 1) / 2);
        Self { n_modes, probabilities }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    fn offset(&self, m: usize, n: usize) -> usize {
        let (m, n) = if m <= n { (m - 1, n - 1) } else { (n - 1, m - 1) };
        // rows r < m hold n_modes - r entries each
        m * self.n_modes - m * m.saturating_sub(1) / 2 + (n - m)
    }

    pub fn get(&self, m: usize, n: usize) -> Result<f64> {
        check_port(m, self.n_modes)?;
        check_port(n, self.n_modes)?;
        Ok(self.probabilities[self.offset(m, n)])
    }

    /// `(m, n, P)` in row-major order over `m ≤ n`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n_modes;
        (1..=n)
            .flat_map(move |a| (a..=n).map(move |b| (a, b)))
            .zip(&self.probabilities)
            .map(|((a, b), &p)| (a, b, p))
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("map serialises")
    }
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    pairs: Vec<(usize, usize, f64)>,
    total: f64,
}

impl Serialize for CoincidenceMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapJson {
            pairs: self.pairs().collect(),
            total: self.total(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoincidenceMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MapJson::deserialize(d)?;
        let count = raw.pairs.len();
        // count = n(n+1)/2
        let n_modes = ((((8 * count + 1) as f64).sqrt() - 1.0) / 2.0).round() as usize;
        if n_modes == 0 || n_modes * (n_modes + 1) / 2 != count {
            return Err(D::Error::custom(format!("{count} pairs do not form a full map")));
        }
        let mut map = CoincidenceMap {
            n_modes,
            probabilities: vec![f64::NAN; count],
        };
        for (m, n, p) in raw.pairs {
            if m == 0 || n == 0 || m > n_modes || n > n_modes {
                return Err(D::Error::custom(Error::InvalidPort(format!("pair ({m}, {n})"))));
            }
            let k = map.offset(m, n);
            map.probabilities[k] = p;
        }
        if map.probabilities.iter().any(|p| p.is_nan()) {
            return Err(D::Error::custom("duplicate pair in coincidence map"));
        }
        Ok(map)
    }
}
