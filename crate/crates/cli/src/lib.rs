//! Command-line front end for `lossy-optics`: dilate lossy matrices, compile
//! and decompose netlists, run delay scans and figure presets, and run the
//! oracle verification suite.
//!
//! All commands write CSV or JSON. Every file output is accompanied by a
//! run manifest (`<output>.manifest.json`) recording the resolved
//! configuration and seeds.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lossy_optics::circuit::{decompose, parse, serialize};
use lossy_optics::dilation::{dilate, LossConvention, LossyTransform};
use lossy_optics::experiment::Observable;
use lossy_optics::fmt::fmt17;
use lossy_optics::linalg::{parse_matrix, ComplexMatrix};
use serde_json::json;

mod error;
pub mod manifest;
pub mod scan;
pub mod verify;

pub use error::{CliError, CliResult};
pub use manifest::RunManifest;

use manifest::{read_file, write_file};
use scan::{Figure, Grid, Overrides, ScanRun};
use verify::{run_verify, VerifyOptions};

/// Environment variable that overrides the seed recorded in a manifest.
pub const SEED_ENV: &str = "LOSSY_OPTICS_SEED";

/// Sizes for which `dilate` also emits a netlist.
const NETLIST_SIZES: std::ops::RangeInclusive<usize> = 2..=8;

#[derive(Debug, Parser)]
#[command(name = "lossy-optics", version, about = "Lossy linear optics by unitary dilation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed a lossy matrix in a unitary with ancilla modes.
    Dilate {
        /// Matrix file: JSON [[[re, im], ...], ...] or rows of `re+imj` tokens.
        input: PathBuf,
        /// Output prefix; writes PREFIX.unitary.json, PREFIX.netlist and
        /// PREFIX.manifest.json. Defaults to the input path without extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiply out a netlist into its unitary.
    Compile {
        netlist: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Json)]
        format: MatrixFormat,
    },
    /// Factor a unitary into couplers and phase shifters.
    Decompose {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a netlist (or, with --matrix, a matrix file) parses.
    ParseCheck {
        input: PathBuf,
        #[arg(long)]
        matrix: bool,
    },
    /// Coincidence probability against delay for one or more losses.
    Scan(ScanArgs),
    /// Preset scans: fig2 (P12 over 41 losses), fig3 (P12), fig4 (P13), source visibility 0.87.
    Figures {
        #[arg(value_enum)]
        figure: Figure,
        #[command(flatten)]
        args: ScanArgs,
    },
    /// Run the oracle-equivalence and invariant suites.
    Verify {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the JSON report (and its manifest) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    Json,
    Text,
}

#[derive(Clone, Debug, Default, Args)]
pub struct ScanArgs {
    /// JSON ScanConfig, or the manifest of an earlier scan to replay.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// P12, P13, P23 or map.
    #[arg(long, value_parser = parse_observable)]
    pub observable: Option<Observable>,
    /// Comma-separated losses or grid(start,end,n).
    #[arg(long)]
    pub losses: Option<Grid>,
    /// Delays in ps, comma-separated or grid(start,end,n).
    #[arg(long)]
    pub taus: Option<Grid>,
    /// Source visibility.
    #[arg(long)]
    pub xi: Option<f64>,
    /// amplitude (loss = 1 − η) or power (loss = 1 − η²).
    #[arg(long, value_parser = parse_convention)]
    pub convention: Option<LossConvention>,
    /// Cross-check every point against the Fock-space oracle.
    #[arg(long)]
    pub verify: bool,
    /// Emit synthetic counts with this pair rate (per second).
    #[arg(long)]
    pub pair_rate: Option<f64>,
    /// Flat accidental coincidence rate (per second).
    #[arg(long)]
    pub dark_rate: Option<f64>,
    /// Seconds per grid point.
    #[arg(long)]
    pub integration_time: Option<f64>,
    /// Counts seed; takes precedence over LOSSY_OPTICS_SEED.
    #[arg(long)]
    pub seed: Option<u64>,
    /// CSV output file; stdout when absent (no manifest is written then).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

type ValueParseResult<T> = std::result::Result<T, String>;

fn parse_observable(s: &str) -> ValueParseResult<Observable> {
    s.parse().map_err(|e: lossy_optics::Error| e.to_string())
}

fn parse_convention(s: &str) -> ValueParseResult<LossConvention> {
    s.parse().map_err(|e: lossy_optics::Error| e.to_string())
}

/// Process environment relevant to a run.
#[derive(Clone, Debug, Default)]
pub struct Context {
    pub seed_override: Option<u64>,
}

impl Context {
    pub fn from_env() -> CliResult<Self> {
        let seed_override = match std::env::var(SEED_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|e| CliError::Config(format!("{SEED_ENV}: `{v}`: {e}")))?,
            ),
            Err(std::env::VarError::NotPresent) => None,
            Err(e) => return Err(CliError::Config(format!("{SEED_ENV}: {e}"))),
        };
        Ok(Self { seed_override })
    }

    /// Explicit flag, then the environment.
    fn seed(&self, flag: Option<u64>) -> Option<u64> {
        flag.or(self.seed_override)
    }
}

pub fn run(cli: &Cli, ctx: &Context, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Dilate { input, out: prefix } => cmd_dilate(input, prefix.as_deref(), out),
        Command::Compile { netlist, out: path, format } => cmd_compile(netlist, path.as_deref(), *format, out),
        Command::Decompose { input, out: path } => cmd_decompose(input, path.as_deref(), out),
        Command::ParseCheck { input, matrix } => cmd_parse_check(input, *matrix, out),
        Command::Scan(args) => cmd_scan(args, None, ctx, out),
        Command::Figures { figure, args } => cmd_scan(args, Some(*figure), ctx, out),
        Command::Verify { trials, seed, out: path } => {
            let opts = VerifyOptions {
                trials: *trials,
                seed: ctx.seed(*seed).unwrap_or(0),
                inject_fault: false,
            };
            cmd_verify(&opts, path.as_deref(), out)
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

fn read_matrix(path: &Path) -> CliResult<ComplexMatrix> {
    Ok(parse_matrix(&read_file(path)?)?)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn cmd_dilate(input: &Path, prefix: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let matrix = read_matrix(input)?;
    let dilated = dilate(&LossyTransform::new(matrix.clone())?)?;
    let prefix = prefix.map(Path::to_path_buf).unwrap_or_else(|| input.with_extension(""));

    let unitary_path = with_suffix(&prefix, ".unitary.json");
    let json = serde_json::to_string_pretty(&dilated).expect("dilation serialises");
    write_file(&unitary_path, &(json + "\n"))?;
    let mut manifest = RunManifest::new("dilate", &json!({"input": input, "matrix": matrix})).with_output(&unitary_path);

    let mut report = format!(
        "modes: {} system + {} ancilla\nk = {}\n",
        dilated.system_size(),
        dilated.ancilla_count(),
        dilated.ancilla_count()
    );
    for (port, theta) in dilated.ancilla_ports.iter().zip(&dilated.thetas) {
        report.push_str(&format!("theta[ancilla port {port}] = {}\n", fmt17(*theta)));
    }
    report.push_str(&format!("unitary: {}\n", unitary_path.display()));

    if NETLIST_SIZES.contains(&dilated.matrix.rows()) {
        let netlist_path = with_suffix(&prefix, ".netlist");
        write_file(&netlist_path, &serialize(&decompose(&dilated.matrix)?))?;
        report.push_str(&format!("netlist: {}\n", netlist_path.display()));
        manifest = manifest.with_output(&netlist_path);
    }
    let manifest_path = with_suffix(&prefix, ".manifest.json");
    manifest.write(&manifest_path)?;
    report.push_str(&format!("manifest: {}\n", manifest_path.display()));
    emit(out, &report)
}

pub fn cmd_compile(netlist: &Path, path: Option<&Path>, format: MatrixFormat, out: &mut dyn Write) -> CliResult<()> {
    let text = read_file(netlist)?;
    let nl = parse(&text)?;
    let u = nl.compile();
    let rendered = match format {
        MatrixFormat::Json => u.to_json() + "\n",
        MatrixFormat::Text => u.to_text(),
    };
    match path {
        None => emit(out, &rendered),
        Some(p) => {
            write_file(p, &rendered)?;
            RunManifest::new("compile", &json!({"netlist": netlist, "text": text}))
                .with_output(p)
                .write(&RunManifest::path_for(p))
        }
    }
}

pub fn cmd_decompose(input: &Path, path: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let u = read_matrix(input)?;
    let text = serialize(&decompose(&u)?);
    match path {
        None => emit(out, &text),
        Some(p) => {
            write_file(p, &text)?;
            RunManifest::new("decompose", &json!({"input": input, "matrix": u}))
                .with_output(p)
                .write(&RunManifest::path_for(p))
        }
    }
}

pub fn cmd_parse_check(input: &Path, matrix: bool, out: &mut dyn Write) -> CliResult<()> {
    let text = read_file(input)?;
    let summary = if matrix {
        let m = parse_matrix(&text)?;
        format!("ok: {}x{} matrix\n", m.rows(), m.cols())
    } else {
        let nl = parse(&text)?;
        format!("ok: {} modes, {} elements\n", nl.n_modes(), nl.len())
    };
    emit(out, &summary)
}

pub fn cmd_scan(args: &ScanArgs, preset: Option<Figure>, ctx: &Context, out: &mut dyn Write) -> CliResult<()> {
    let base = match (&args.config, preset) {
        (Some(path), None) => scan::load_config(path)?.0,
        (Some(_), Some(_)) => {
            return Err(CliError::Config("--config cannot be combined with a figure preset".into()));
        }
        (None, Some(fig)) => ScanRun { preset: Some(fig), scan: fig.config(), counts: None },
        (None, None) => {
            let Grid(losses) = args
                .losses
                .clone()
                .ok_or_else(|| CliError::Config("losses: pass --losses or --config".into()))?;
            let observable = args.observable.unwrap_or(Observable::P12);
            let source = lossy_optics::engine::PhotonPairSource::default();
            ScanRun {
                preset: None,
                scan: lossy_optics::experiment::ScanConfig::new(losses, observable, source),
                counts: None,
            }
        }
    };
    let overrides = Overrides {
        observable: args.observable,
        losses: args.losses.clone().map(|g| g.0),
        tau_grid: args.taus.clone().map(|g| g.0),
        xi: args.xi,
        convention: args.convention,
        verify: args.verify,
        pair_rate: args.pair_rate,
        dark_rate: args.dark_rate,
        integration_time: args.integration_time,
        seed: ctx.seed(args.seed),
    };
    let run = overrides.apply(base)?;
    let csv = scan::execute(&run)?;
    match &args.out {
        None => emit(out, &csv),
        Some(p) => {
            write_file(p, &csv)?;
            let command = if preset.is_some() { "figures" } else { "scan" };
            let manifest_path = RunManifest::path_for(p);
            scan::manifest_for(command, &run, p).write(&manifest_path)?;
            emit(out, &format!("wrote {} ({})\n", p.display(), manifest_path.display()))
        }
    }
}

pub fn cmd_verify(opts: &VerifyOptions, path: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let report = run_verify(opts)?;
    let text = serde_json::to_string_pretty(&report).expect("report serialises") + "\n";
    emit(out, &text)?;
    if let Some(p) = path {
        write_file(p, &text)?;
        RunManifest::new("verify", opts)
            .with_output(p)
            .with_seed("verify", opts.seed)
            .write(&RunManifest::path_for(p))?;
    }
    let failed: Vec<String> = report
        .failures()
        .map(|s| {
            let case = s.failing_case.as_ref().map(|c| c.to_string()).unwrap_or_default();
            format!("{} (max deviation {:e} > {:e}) at {case}", s.name, s.max_deviation, s.tolerance)
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join("; ")))
    }
}
