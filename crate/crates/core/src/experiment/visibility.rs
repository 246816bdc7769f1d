use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Contrast of a coincidence feature at zero delay against the long-delay
/// baseline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VisibilityMetric {
    /// `1 − zero/long`
    Dip,
    /// `zero/long − 1`
    Peak,
    /// `|zero − long| / (zero + long)`
    Michelson,
}

impl FromStr for VisibilityMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dip" => Ok(Self::Dip),
            "peak" => Ok(Self::Peak),
            "michelson" => Ok(Self::Michelson),
            other => Err(Error::Config(format!("unknown visibility metric `{other}`"))),
        }
    }
}

pub fn visibility(zero_delay: f64, long_delay: f64, metric: VisibilityMetric) -> Result<f64> {
    let zero_baseline = || Error::OutOfRange {
        name: "baseline",
        value: long_delay,
        range: "(0, inf)",
    };
    match metric {
        VisibilityMetric::Dip | VisibilityMetric::Peak if long_delay <= 0.0 => Err(zero_baseline()),
        VisibilityMetric::Dip => Ok(1.0 - zero_delay / long_delay),
        VisibilityMetric::Peak => Ok(zero_delay / long_delay - 1.0),
        VisibilityMetric::Michelson => {
            let sum = zero_delay + long_delay;
            if sum <= 0.0 {
                Err(zero_baseline())
            } else {
                Ok((zero_delay - long_delay).abs() / sum)
            }
        }
    }
}

/// Amplitude loss at which zero-delay and long-delay coincidences between the
/// two interferometer outputs are equal.
///
/// The balance `(γ/2)c − (γ/8)(1 − c)² = 0` with `c = cos²θ` does not depend
/// on the coherence, so the root `c = 3 − 2√2` holds for every `ξ > 0`.
pub fn crossing_loss(xi: f64) -> Result<f64> {
    if !(xi > 0.0 && xi <= 1.0) {
        return Err(Error::OutOfRange {
            name: "xi",
            value: xi,
            range: "(0, 1]",
        });
    }
    // Smaller root of c² − 6c + 1 = 0.
    let c = 3.0 - 2.0 * std::f64::consts::SQRT_2;
    Ok(1.0 - c.sqrt())
}
