use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Coherence time used when none is configured.
pub const DEFAULT_COHERENCE_TIME_PS: f64 = 1.0;

/// A photon pair injected into two distinct ports (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSource", deny_unknown_fields)]
pub struct PhotonPairSource {
    pub port_a: usize,
    pub port_b: usize,
    /// Gaussian coherence time `T`, picoseconds.
    pub coherence_time_ps: f64,
    /// Source visibility `ξ`: the coherence at zero delay.
    pub visibility: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSource {
    #[serde(default = "default_port_a")]
    port_a: usize,
    #[serde(default = "default_port_b")]
    port_b: usize,
    #[serde(default = "default_coherence_time")]
    coherence_time_ps: f64,
    #[serde(default = "default_visibility")]
    visibility: f64,
}

fn default_port_a() -> usize {
    1
}
fn default_port_b() -> usize {
    2
}
fn default_coherence_time() -> f64 {
    DEFAULT_COHERENCE_TIME_PS
}
fn default_visibility() -> f64 {
    1.0
}

impl TryFrom<RawSource> for PhotonPairSource {
    type Error = Error;

    fn try_from(r: RawSource) -> Result<Self> {
        PhotonPairSource::new(r.port_a, r.port_b, r.coherence_time_ps, r.visibility)
    }
}

impl Default for PhotonPairSource {
    fn default() -> Self {
        Self {
            port_a: 1,
            port_b: 2,
            coherence_time_ps: DEFAULT_COHERENCE_TIME_PS,
            visibility: 1.0,
        }
    }
}

impl PhotonPairSource {
    pub fn new(port_a: usize, port_b: usize, coherence_time_ps: f64, visibility: f64) -> Result<Self> {
        if port_a == 0 || port_b == 0 {
            return Err(Error::InvalidPort("source ports are 1-based".into()));
        }
        if port_a == port_b {
            return Err(Error::InvalidPort(format!("source ports must differ, got {port_a} twice")));
        }
        if !(coherence_time_ps > 0.0 && coherence_time_ps.is_finite()) {
            return Err(Error::OutOfRange {
                name: "coherence_time_ps",
                value: coherence_time_ps,
                range: "(0, inf)",
            });
        }
        if !(0.0..=1.0).contains(&visibility) {
            return Err(Error::OutOfRange {
                name: "visibility",
                value: visibility,
                range: "[0, 1]",
            });
        }
        Ok(Self {
            port_a,
            port_b,
            coherence_time_ps,
            visibility,
        })
    }

    /// Ideal source on ports 1 and 2 with the given visibility.
    pub fn with_visibility(visibility: f64) -> Result<Self> {
        Self::new(1, 2, DEFAULT_COHERENCE_TIME_PS, visibility)
    }

    /// `γ(τ) = ξ · exp(−τ²/T²)`.
    pub fn coherence(&self, tau_ps: f64) -> f64 {
        let x = tau_ps / self.coherence_time_ps;
        self.visibility * (-x * x).exp()
    }

    pub(crate) fn check_modes(&self, n_modes: usize) -> Result<()> {
        for p in [self.port_a, self.port_b] {
            if p > n_modes {
                return Err(Error::InvalidPort(format!("source port {p} outside 1..={n_modes}")));
            }
        }
        Ok(())
    }

    /// Ports as 0-based indices `(p, q)`.
    pub(crate) fn indices(&self) -> (usize, usize) {
        (self.port_a - 1, self.port_b - 1)
    }

    pub fn swapped(&self) -> Self {
        Self {
            port_a: self.port_b,
            port_b: self.port_a,
            ..*self
        }
    }
}

pub fn mutual_coherence(source: &PhotonPairSource, tau_ps: f64) -> f64 {
    source.coherence(tau_ps)
}
