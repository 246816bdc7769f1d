//! `scan` and `figures`: resolve a scan configuration from a config file,
//! a manifest and command-line overrides, run it, and emit CSV.

use std::path::Path;

use lossy_optics::dilation::LossConvention;
use lossy_optics::engine::PhotonPairSource;
use lossy_optics::experiment::{
    counts_csv, linspace, run_scan, synthesize_counts, CountsModel, Observable, ScanConfig,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::manifest::{read_file, RunManifest};

/// Source visibility used by the figure presets.
pub const PRESET_VISIBILITY: f64 = 0.87;

/// The resolved configuration of a scan run, as recorded in its manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanRun {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Figure>,
    pub scan: ScanConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<CountsModel>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    /// P12 against delay over 41 losses from 0 to 1.
    Fig2,
    /// P12 at losses 0.07, 0.26 and 0.96.
    Fig3,
    /// P13 at losses 0, 0.26 and 0.96.
    Fig4,
}

impl Figure {
    pub fn config(self) -> ScanConfig {
        let (losses, observable) = match self {
            Figure::Fig2 => (linspace(0.0, 1.0, 41), Observable::P12),
            Figure::Fig3 => (vec![0.07, 0.26, 0.96], Observable::P12),
            Figure::Fig4 => (vec![0.0, 0.26, 0.96], Observable::P13),
        };
        let source = PhotonPairSource::with_visibility(PRESET_VISIBILITY).expect("preset visibility is valid");
        ScanConfig::new(losses, observable, source)
    }
}

/// Command-line overrides applied on top of a loaded configuration.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub observable: Option<Observable>,
    pub losses: Option<Vec<f64>>,
    pub tau_grid: Option<Vec<f64>>,
    pub xi: Option<f64>,
    pub convention: Option<LossConvention>,
    pub verify: bool,
    pub pair_rate: Option<f64>,
    pub dark_rate: Option<f64>,
    pub integration_time: Option<f64>,
    /// Explicit `--seed`, or the seed from the environment.
    pub seed: Option<u64>,
}

impl Overrides {
    pub fn apply(&self, mut run: ScanRun) -> CliResult<ScanRun> {
        let scan = &mut run.scan;
        if let Some(o) = self.observable {
            scan.observable = o;
        }
        if let Some(l) = &self.losses {
            scan.losses = l.clone();
        }
        if let Some(t) = &self.tau_grid {
            scan.tau_grid = t.clone();
        }
        if let Some(xi) = self.xi {
            let s = scan.source;
            scan.source = PhotonPairSource::new(s.port_a, s.port_b, s.coherence_time_ps, xi)
                .map_err(|e| CliError::Config(format!("--xi: {e}")))?;
        }
        if let Some(c) = self.convention {
            scan.loss_convention = c;
        }
        scan.verify |= self.verify;

        let wants_counts = self.pair_rate.is_some() || self.dark_rate.is_some() || self.integration_time.is_some();
        if wants_counts || run.counts.is_some() {
            let mut counts = run.counts.unwrap_or(CountsModel {
                pair_rate: 0.0,
                integration_time: 1.0,
                dark_coincidence_rate: 0.0,
                rng_seed: 0,
            });
            if let Some(r) = self.pair_rate {
                counts.pair_rate = r;
            }
            if let Some(r) = self.dark_rate {
                counts.dark_coincidence_rate = r;
            }
            if let Some(t) = self.integration_time {
                counts.integration_time = t;
            }
            if let Some(s) = self.seed {
                counts.rng_seed = s;
            }
            counts.validate()?;
            run.counts = Some(counts);
        }
        Ok(run)
    }
}

/// A list of values given as `0.07,0.26,0.96` or `grid(start,end,n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl std::str::FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_grid(s).map(Grid)
    }
}

/// Parses `0.07,0.26,0.96` or `grid(start,end,n)`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if let Some(inner) = text.strip_prefix("grid(").and_then(|t| t.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let [start, end, n] = parts[..] else {
            return Err(format!("`{text}`: expected grid(start,end,n)"));
        };
        let num = |s: &str| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
        let n = n.parse::<usize>().map_err(|e| format!("`{n}`: {e}"))?;
        return Ok(linspace(num(start)?, num(end)?, n));
    }
    text.split(',')
        .map(|tok| tok.trim().parse::<f64>().map_err(|e| format!("`{tok}`: {e}")))
        .collect()
}

fn from_json_with_path<T: DeserializeOwned>(value: serde_json::Value, prefix: &str) -> CliResult<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let path = match (prefix, path.as_str()) {
            (p, ".") => p.trim_end_matches('.').to_string(),
            (p, rest) => format!("{p}{rest}"),
        };
        CliError::Config(format!("{path}: {}", e.into_inner()))
    })
}

/// Loads a scan config file: either a bare `ScanConfig` object or the
/// manifest of an earlier `scan` or `figures` run.
pub fn load_config(path: &Path) -> CliResult<(ScanRun, Option<RunManifest>)> {
    let text = read_file(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let is_manifest = value.get("command").is_some() && value.get("config").is_some();
    if is_manifest {
        let manifest: RunManifest = from_json_with_path(value, "")?;
        if manifest.command != "scan" && manifest.command != "figures" {
            return Err(CliError::Config(format!(
                "command: manifest records a `{}` run, not a scan",
                manifest.command
            )));
        }
        let run = from_json_with_path(manifest.config.clone(), "config.")?;
        Ok((run, Some(manifest)))
    } else {
        let scan = from_json_with_path(value, "")?;
        Ok((ScanRun { preset: None, scan, counts: None }, None))
    }
}

/// Runs a resolved scan; returns the CSV text.
pub fn execute(run: &ScanRun) -> CliResult<String> {
    run.scan.validate()?;
    let result = run_scan(&run.scan)?;
    Ok(match &run.counts {
        Some(model) => {
            let counts = synthesize_counts(&result, model)?;
            counts_csv(&result, &counts, model.rng_seed)?
        }
        None => result.to_csv(),
    })
}

/// Builds the manifest describing `run` with its CSV at `out`.
pub fn manifest_for(command: &str, run: &ScanRun, out: &Path) -> RunManifest {
    let manifest = RunManifest::new(command, run).with_output(out);
    match &run.counts {
        Some(c) => manifest.with_seed("counts", c.rng_seed),
        None => manifest,
    }
}
