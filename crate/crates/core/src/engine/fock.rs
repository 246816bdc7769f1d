//! Brute-force second-quantised oracle.
//!
//! Each (port, species) pair is an independent bosonic mode, so `n` ports give
//! `2n` modes. The two-photon sector of that Fock space is built explicitly,
//! the input density matrix is assembled from creation operators acting on
//! the vacuum, evolved as `U ρ U†` with `U` the Fock-space transition matrix
//! (permanents of the single-particle transfer matrix), and coincidences are
//! read off by projecting onto `b†b†|0⟩` states.
//!
//! None of this shares code with the amplitude formulas in `state`.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use super::{check_inputs, check_port, CoincidenceMap, PhotonPairSource};
use crate::linalg::{permanent, ComplexMatrix};
use crate::Result;

const SIGNAL: usize = 0;
const IDLER: usize = 1;
const SPECIES: usize = 2;

/// Occupation-number vector → amplitude.
pub type FockState = BTreeMap<Vec<u8>, Complex64>;

/// Basis of all occupation vectors with a fixed photon number.
#[derive(Clone, Debug)]
pub struct FockBasis {
    modes: usize,
    states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl FockBasis {
    pub fn new(modes: usize, photons: u8) -> Self {
        let mut states = Vec::new();
        let mut current = vec![0u8; modes];
        fill(&mut current, 0, photons, &mut states);
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self { modes, states, index }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    /// Dense coordinates of `state`; every component must lie in this sector.
    pub fn to_dense(&self, state: &FockState) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (occ, amp) in state {
            v[self.index[occ]] += amp;
        }
        v
    }

    /// `U[S, T] = perm(Λ[S, T]) / sqrt(∏ s! ∏ t!)`, where `Λ[S, T]` repeats
    /// output mode rows per occupation of `S` and input mode columns per `T`.
    pub fn transition_matrix(&self, single_particle: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.dim();
        let mut u = ComplexMatrix::zeros(d, d);
        let expanded: Vec<Vec<usize>> = self.states.iter().map(|s| expand(s)).collect();
        let norms: Vec<f64> = self.states.iter().map(|s| factorial_product(s)).collect();
        for (i, rows) in expanded.iter().enumerate() {
            for (j, cols) in expanded.iter().enumerate() {
                let perm = permanent(&single_particle.select(rows, cols))?;
                u[(i, j)] = perm / (norms[i] * norms[j]).sqrt();
            }
        }
        Ok(u)
    }
}

fn fill(current: &mut Vec<u8>, mode: usize, remaining: u8, out: &mut Vec<Vec<u8>>) {
    if mode + 1 == current.len() {
        current[mode] = remaining;
        out.push(current.clone());
        current[mode] = 0;
        return;
    }
    for k in (0..=remaining).rev() {
        current[mode] = k;
        fill(current, mode + 1, remaining - k, out);
    }
    current[mode] = 0;
}

fn expand(occupation: &[u8]) -> Vec<usize> {
    occupation
        .iter()
        .enumerate()
        .flat_map(|(mode, &k)| std::iter::repeat_n(mode, k as usize))
        .collect()
}

fn factorial_product(occupation: &[u8]) -> f64 {
    occupation
        .iter()
        .map(|&k| (1..=k as u32).product::<u32>() as f64)
        .product()
}

pub fn vacuum(modes: usize) -> FockState {
    FockState::from([(vec![0u8; modes], Complex64::new(1.0, 0.0))])
}

/// `a†_mode` with the `sqrt(n + 1)` factor.
pub fn create(mode: usize, state: &FockState) -> FockState {
    let mut out = FockState::new();
    for (occ, amp) in state {
        let mut next = occ.clone();
        next[mode] += 1;
        *out.entry(next).or_default() += amp * (f64::from(occ[mode]) + 1.0).sqrt();
    }
    out
}

/// `a_mode` with the `sqrt(n)` factor.
pub fn annihilate(mode: usize, state: &FockState) -> FockState {
    let mut out = FockState::new();
    for (occ, amp) in state {
        if occ[mode] == 0 {
            continue;
        }
        let mut next = occ.clone();
        next[mode] -= 1;
        *out.entry(next).or_default() += amp * f64::from(occ[mode]).sqrt();
    }
    out
}

fn mode_index(port: usize, species: usize) -> usize {
    port * SPECIES + species
}

/// Two-photon sector of `n` ports × {signal, idler} with a fixed input
/// transformation; coincidences for any coherence can be read from it.
pub struct FockOracle {
    ports: usize,
    basis: FockBasis,
    transition: ComplexMatrix,
    source: PhotonPairSource,
}

impl FockOracle {
    pub fn new(m: &ComplexMatrix, source: &PhotonPairSource) -> Result<Self> {
        let ports = check_inputs(m, source, 0.0)?;
        let modes = ports * SPECIES;
        // Species never mix: Λ = M ⊗ I₂ in (port, species) ordering.
        let mut lambda = ComplexMatrix::zeros(modes, modes);
        for out_port in 0..ports {
            for in_port in 0..ports {
                for sp in 0..SPECIES {
                    lambda[(mode_index(out_port, sp), mode_index(in_port, sp))] = m[(out_port, in_port)];
                }
            }
        }
        let basis = FockBasis::new(modes, 2);
        let transition = basis.transition_matrix(&lambda)?;
        Ok(Self {
            ports,
            basis,
            transition,
            source: *source,
        })
    }

    fn pair(&self, signal_port: usize, idler_port: usize) -> FockState {
        let vac = vacuum(self.basis.modes());
        create(mode_index(signal_port, SIGNAL), &create(mode_index(idler_port, IDLER), &vac))
    }

    /// Input density matrix for coherence `gamma`.
    pub fn input_density(&self, gamma: f64) -> ComplexMatrix {
        let (p, q) = self.source.indices();
        let psi1 = self.basis.to_dense(&self.pair(p, q));
        let psi2 = self.basis.to_dense(&self.pair(q, p));
        let terms = [
            (&psi1, &psi1, 0.5),
            (&psi2, &psi2, 0.5),
            (&psi1, &psi2, gamma / 2.0),
            (&psi2, &psi1, gamma / 2.0),
        ];
        let d = self.basis.dim();
        let mut rho = ComplexMatrix::zeros(d, d);
        for (ket, bra, w) in terms {
            for i in 0..d {
                if ket[i] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    rho[(i, j)] += ket[i] * bra[j].conj() * w;
                }
            }
        }
        rho
    }

    /// `U ρ U†`.
    pub fn output_density(&self, gamma: f64) -> ComplexMatrix {
        let rho = self.input_density(gamma);
        &(&self.transition * &rho) * &self.transition.dagger()
    }

    /// `⟨φ| ρ |φ⟩`.
    fn expectation(&self, rho: &ComplexMatrix, phi: &FockState) -> f64 {
        let v = self.basis.to_dense(phi);
        let d = self.basis.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            if v[i] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                acc += v[i].conj() * rho[(i, j)] * v[j];
            }
        }
        acc.re
    }

    /// Coincidence between output ports `m` and `n` (1-based): the sum over
    /// both signal/idler assignments of `⟨0| b b ρ b† b† |0⟩`.
    pub fn coincidence(&self, gamma: f64, m: usize, n: usize) -> Result<f64> {
        let m = check_port(m, self.ports)?;
        let n = check_port(n, self.ports)?;
        Ok(self.project(&self.output_density(gamma), m, n))
    }

    fn project(&self, rho: &ComplexMatrix, m: usize, n: usize) -> f64 {
        let mut p = self.expectation(rho, &self.pair(m, n));
        if m != n {
            p += self.expectation(rho, &self.pair(n, m));
        }
        p
    }

    /// All coincidences from a single evolution of the density matrix.
    pub fn coincidence_map(&self, gamma: f64) -> CoincidenceMap {
        let rho = self.output_density(gamma);
        let mut probabilities = Vec::new();
        for m in 0..self.ports {
            for n in m..self.ports {
                probabilities.push(self.project(&rho, m, n));
            }
        }
        CoincidenceMap::from_probabilities(self.ports, probabilities)
    }
}

/// Oracle counterpart of [`coincidence`](super::coincidence).
pub fn oracle_coincidence(
    m_mat: &ComplexMatrix,
    source: &PhotonPairSource,
    gamma: f64,
    m: usize,
    n: usize,
) -> Result<f64> {
    check_inputs(m_mat, source, gamma)?;
    FockOracle::new(m_mat, source)?.coincidence(gamma, m, n)
}
