use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dilation::{dilate, lossy_beamsplitter, LossConvention};
use crate::engine::{coincidence, coincidence_map, p12_closed, p13_closed, CoincidenceMap, FockOracle, PhotonPairSource};
use crate::fmt::fmt17;
use crate::linalg::ComplexMatrix;
use crate::{Error, Result};

/// Agreement required between scan values and the Fock oracle when
/// verification is enabled.
const VERIFY_TOL: f64 = 1e-12;

/// What a scan records at each grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Observable {
    P12,
    P13,
    P23,
    /// Every output pair; the value grid holds P12.
    #[serde(rename = "map")]
    Map,
}

impl Observable {
    fn ports(self) -> (usize, usize) {
        match self {
            Observable::P12 | Observable::Map => (1, 2),
            Observable::P13 => (1, 3),
            Observable::P23 => (2, 3),
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P12" | "p12" => Ok(Observable::P12),
            "P13" | "p13" => Ok(Observable::P13),
            "P23" | "p23" => Ok(Observable::P23),
            "map" => Ok(Observable::Map),
            other => Err(Error::Config(format!("unknown observable `{other}` (P12, P13, P23, map)"))),
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Observable::P12 => "P12",
            Observable::P13 => "P13",
            Observable::P23 => "P23",
            Observable::Map => "map",
        })
    }
}

/// `n` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|k| start + (end - start) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// 81 delays over [−2, 2] ps.
pub fn default_tau_grid() -> Vec<f64> {
    linspace(-2.0, 2.0, 81)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    /// Delays in picoseconds, ascending.
    #[serde(default = "default_tau_grid")]
    pub tau_grid: Vec<f64>,
    pub losses: Vec<f64>,
    #[serde(default)]
    pub loss_convention: LossConvention,
    #[serde(default)]
    pub source: PhotonPairSource,
    pub observable: Observable,
    /// Cross-check every point against the Fock-space oracle.
    #[serde(default)]
    pub verify: bool,
}

impl ScanConfig {
    pub fn new(losses: Vec<f64>, observable: Observable, source: PhotonPairSource) -> Self {
        Self {
            tau_grid: default_tau_grid(),
            losses,
            loss_convention: LossConvention::Amplitude,
            source,
            observable,
            verify: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tau_grid.is_empty() {
            return Err(Error::Config("tau_grid: must not be empty".into()));
        }
        if let Some(k) = self.tau_grid.iter().position(|t| !t.is_finite()) {
            return Err(Error::Config(format!("tau_grid[{k}]: must be finite")));
        }
        if let Some(k) = self.tau_grid.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::Config(format!("tau_grid[{}]: grid must be sorted ascending", k + 1)));
        }
        if self.losses.is_empty() {
            return Err(Error::Config("losses: must not be empty".into()));
        }
        if let Some(k) = self.losses.iter().position(|l| !(0.0..=1.0).contains(l)) {
            return Err(Error::Config(format!("losses[{k}]: {} is outside [0, 1]", self.losses[k])));
        }
        if self.source.port_a > 3 || self.source.port_b > 3 {
            return Err(Error::Config("source: ports must lie within the 3-mode interferometer".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub config: ScanConfig,
    /// `values[loss][tau]`.
    pub values: Vec<Vec<f64>>,
    /// `gammas[tau]`, shared by every loss.
    pub gammas: Vec<f64>,
    /// Value at `γ = 0` (long delay), per loss.
    pub long_delay_baseline: Vec<f64>,
    /// Value at `γ = ξ` (zero delay), per loss.
    pub zero_delay_value: Vec<f64>,
    /// Full maps per loss and delay, only for [`Observable::Map`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<Vec<CoincidenceMap>>>,
}

/// The three-mode interferometer for `η`, with the loss channel always present.
fn interferometer(eta: f64) -> Result<ComplexMatrix> {
    Ok(dilate(&lossy_beamsplitter(eta)?)?.padded_to(3).matrix)
}

struct Evaluator {
    theta: f64,
    matrix: ComplexMatrix,
    source: PhotonPairSource,
    observable: Observable,
    closed_form: bool,
}

impl Evaluator {
    fn new(eta: f64, cfg: &ScanConfig) -> Result<Self> {
        let (a, b) = (cfg.source.port_a, cfg.source.port_b);
        Ok(Self {
            theta: eta.clamp(0.0, 1.0).acos(),
            matrix: interferometer(eta)?,
            source: cfg.source,
            observable: cfg.observable,
            closed_form: (a.min(b), a.max(b)) == (1, 2),
        })
    }

    fn value(&self, gamma: f64) -> Result<f64> {
        match (self.observable, self.closed_form) {
            (Observable::P12 | Observable::Map, true) => Ok(p12_closed(self.theta, gamma)),
            (Observable::P13, true) => Ok(p13_closed(self.theta, gamma)),
            _ => {
                let (m, n) = self.observable.ports();
                coincidence(&self.matrix, &self.source, gamma, m, n)
            }
        }
    }
}

pub fn run_scan(cfg: &ScanConfig) -> Result<ScanResult> {
    cfg.validate()?;
    let gammas: Vec<f64> = cfg.tau_grid.iter().map(|&t| cfg.source.coherence(t)).collect();
    let xi = cfg.source.visibility;

    let mut values = Vec::with_capacity(cfg.losses.len());
    let mut long_delay_baseline = Vec::with_capacity(cfg.losses.len());
    let mut zero_delay_value = Vec::with_capacity(cfg.losses.len());
    let mut maps = (cfg.observable == Observable::Map).then(Vec::new);

    for &loss in &cfg.losses {
        let eta = cfg.loss_convention.eta_from_loss(loss)?;
        let eval = Evaluator::new(eta, cfg)?;
        let row = gammas.iter().map(|&g| eval.value(g)).collect::<Result<Vec<_>>>()?;

        if cfg.verify {
            verify_row(&eval, &gammas, &row, loss)?;
        }
        if let Some(maps) = maps.as_mut() {
            let per_tau = gammas
                .iter()
                .map(|&g| coincidence_map(&eval.matrix, &cfg.source, g))
                .collect::<Result<Vec<_>>>()?;
            maps.push(per_tau);
        }

        long_delay_baseline.push(eval.value(0.0)?);
        zero_delay_value.push(eval.value(xi)?);
        values.push(row);
    }

    Ok(ScanResult {
        config: cfg.clone(),
        values,
        gammas,
        long_delay_baseline,
        zero_delay_value,
        maps,
    })
}

fn verify_row(eval: &Evaluator, gammas: &[f64], row: &[f64], loss: f64) -> Result<()> {
    let oracle = FockOracle::new(&eval.matrix, &eval.source)?;
    let (m, n) = eval.observable.ports();
    for (&g, &v) in gammas.iter().zip(row) {
        let expected = oracle.coincidence(g, m, n)?;
        if (expected - v).abs() > VERIFY_TOL {
            return Err(Error::Verification(format!(
                "loss {loss}, gamma {g}: scan value {v} differs from oracle {expected}"
            )));
        }
    }
    Ok(())
}

impl ScanResult {
    pub const CSV_HEADER: &'static str = "loss,tau_ps,gamma,value,observable,convention";

    /// One row per `(loss, τ)`; map scans emit one row per port pair, with
    /// the observable column naming the pair (`P11`, `P12`, …).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        self.for_each_row(|row| {
            out.push_str(&row.join(","));
            out.push('\n');
        });
        out
    }

    /// Calls `f` with the fields of each CSV data row, in grid order.
    pub(crate) fn for_each_row(&self, mut f: impl FnMut(Vec<String>)) {
        let convention = self.config.loss_convention.to_string();
        for (li, &loss) in self.config.losses.iter().enumerate() {
            for (ti, &tau) in self.config.tau_grid.iter().enumerate() {
                let base = [fmt17(loss), fmt17(tau), fmt17(self.gammas[ti])];
                match &self.maps {
                    Some(maps) => {
                        for (m, n, p) in maps[li][ti].pairs() {
                            let mut row = base.to_vec();
                            row.extend([fmt17(p), format!("P{m}{n}"), convention.clone()]);
                            f(row);
                        }
                    }
                    None => {
                        let mut row = base.to_vec();
                        row.extend([
                            fmt17(self.values[li][ti]),
                            self.config.observable.to_string(),
                            convention.clone(),
                        ]);
                        f(row);
                    }
                }
            }
        }
    }
}
