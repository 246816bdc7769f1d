//! Synthetic coincidence counts: a signal proportional to the normalised scan
//! value plus a flat accidental background, both Poisson distributed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::ScanResult;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountsModel {
    /// Coincidences per second at the long-delay baseline.
    pub pair_rate: f64,
    /// Seconds per grid point.
    pub integration_time: f64,
    /// Flat accidental coincidences per second.
    pub dark_coincidence_rate: f64,
    pub rng_seed: u64,
}

impl CountsModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("pair_rate", self.pair_rate),
            ("integration_time", self.integration_time),
            ("dark_coincidence_rate", self.dark_coincidence_rate),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("counts.{name}: must be a finite rate >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Expected counts for a scan value against its long-delay baseline.
    ///
    /// A zero baseline contributes no signal; this only happens where the
    /// observable vanishes at every delay (the loss channel with no loss).
    pub fn expected(&self, value: f64, baseline: f64) -> f64 {
        let normalised = if baseline > 0.0 { value / baseline } else { 0.0 };
        self.pair_rate * self.integration_time * normalised + self.dark_coincidence_rate * self.integration_time
    }
}

/// Samples `counts[loss][tau]` sequentially in grid order from a generator
/// seeded with `model.rng_seed`.
pub fn synthesize_counts(scan: &ScanResult, model: &CountsModel) -> Result<Vec<Vec<u64>>> {
    model.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(model.rng_seed);
    scan.values
        .iter()
        .zip(&scan.long_delay_baseline)
        .map(|(row, &baseline)| {
            row.iter()
                .map(|&v| sample(model.expected(v, baseline), &mut rng))
                .collect()
        })
        .collect()
}

fn sample(mean: f64, rng: &mut ChaCha8Rng) -> Result<u64> {
    if mean <= 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(mean).map_err(|e| Error::Config(format!("poisson mean {mean}: {e}")))?;
    Ok(dist.sample(rng) as u64)
}

/// Scan CSV with `counts,seed` appended to every row. Map scans are not
/// supported since counts are sampled per grid point.
pub fn counts_csv(scan: &ScanResult, counts: &[Vec<u64>], seed: u64) -> Result<String> {
    if scan.maps.is_some() {
        return Err(Error::Config("counts are only defined for single-observable scans".into()));
    }
    let mut out = format!("{},counts,seed\n", ScanResult::CSV_HEADER);
    let flat: Vec<u64> = counts.iter().flatten().copied().collect();
    let mut k = 0;
    scan.for_each_row(|mut row| {
        row.push(flat[k].to_string());
        row.push(seed.to_string());
        out.push_str(&row.join(","));
        out.push('\n');
        k += 1;
    });
    Ok(out)
}
