//! Two-photon interference through a linear-optical unitary.
//!
//! The input is a photon pair (signal and idler) entering two distinct ports
//! `p`, `q`. Partial distinguishability is captured by a single coherence
//! `γ = ξ · exp(−τ²/T²)` weighting the cross terms between the two ways of
//! assigning signal and idler to the input ports:
//!
//! ```text
//! ρ = ½(|ψ₁⟩⟨ψ₁| + |ψ₂⟩⟨ψ₂|) + γ/2 (|ψ₁⟩⟨ψ₂| + |ψ₂⟩⟨ψ₁|)
//! ψ₁ = a†_{p,s} a†_{q,i} |0⟩,   ψ₂ = a†_{q,s} a†_{p,i} |0⟩
//! ```
//!
//! A photon entering port `p` leaves port `m` with amplitude `M[m, p]`.

mod closed;
mod fock;
mod source;
mod state;

pub use closed::{p12_closed, p13_closed};
pub use fock::{annihilate, create, oracle_coincidence, vacuum, FockBasis, FockOracle, FockState};
pub use source::{mutual_coherence, PhotonPairSource, DEFAULT_COHERENCE_TIME_PS};
pub use state::{coincidence, coincidence_map, CoincidenceMap, TwoPhotonState};

/// Unitarity gate applied before any two-photon evolution.
pub const UNITARY_GATE: f64 = 1e-8;

use crate::linalg::ComplexMatrix;
use crate::{Error, Result};

pub(crate) fn check_inputs(m: &ComplexMatrix, source: &PhotonPairSource, gamma: f64) -> Result<usize> {
    m.require_unitary(UNITARY_GATE)?;
    let n = m.rows();
    source.check_modes(n)?;
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::OutOfRange {
            name: "gamma",
            value: gamma,
            range: "[0, 1]",
        });
    }
    Ok(n)
}

pub(crate) fn check_port(port: usize, n_modes: usize) -> Result<usize> {
    if port == 0 || port > n_modes {
        Err(Error::InvalidPort(format!("output port {port} outside 1..={n_modes}")))
    } else {
        Ok(port - 1)
    }
}
