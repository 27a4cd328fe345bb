//! Command-line surface: JSON run configurations dispatched to the
//! computation modules, with deterministic JSON/CSV/SVG artifacts.
//!
//! Exit codes follow a three-way contract: `0` for a successful
//! computation, `1` for usage or configuration errors, `2` for
//! physics-domain outcomes (unstable drift, marginal point, infeasible
//! request). The same configuration always produces byte-identical output.

use crate::calibration::{derive_rates, PhysicalParams};
use crate::lyapunov::solve_steady;
use crate::model::{build_diffusion, build_drift, occupations, ModelParams, Occupations};
use crate::spectral::{
    band_linspace, default_band, find_stability_boundary, regime_report_with, spectral_point,
    Channel, RegimeReport, DEFAULT_COHERENT_THRESHOLD,
};
use crate::sweep::{
    csv_string, emit_plot, run_preset, run_sweep, BandSpec, Control, SweepSpec, SweepTable,
};
use crate::{Error, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Measurement system of a configuration document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Units {
    /// Dimensionless rates relative to the cavity linewidth (`model` block).
    Kappa,
    /// Laboratory SI quantities (`physical` block), converted on load.
    Si,
}

/// Sweep description inside a configuration (the base parameters come from
/// the document's `model`/`physical` block).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepBlock {
    control: Control,
    from: f64,
    to: f64,
    points: usize,
    #[serde(default)]
    fixed_partner_xi: f64,
    #[serde(default)]
    omega_band: Option<BandSpec>,
    #[serde(default = "default_threshold")]
    coherent_threshold: f64,
}

fn default_threshold() -> f64 {
    DEFAULT_COHERENT_THRESHOLD
}

/// Parsed configuration document.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    units: Units,
    #[serde(default)]
    model: Option<ModelParams>,
    #[serde(default)]
    physical: Option<PhysicalParams>,
    /// Channel for the stability search (defaults to mechanical).
    #[serde(default)]
    channel: Option<Channel>,
    #[serde(default)]
    sweep: Option<SweepBlock>,
}

impl RunConfig {
    fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        match (cfg.units, &cfg.model, &cfg.physical) {
            (Units::Kappa, Some(_), None) | (Units::Si, None, Some(_)) => Ok(cfg),
            _ => Err(Error::Config(
                "config must carry exactly one parameter block matching its units: \
                 'model' with units = \"kappa\", or 'physical' with units = \"si\""
                    .to_string(),
            )),
        }
    }

    /// Normalized model parameters, converting from SI when necessary.
    fn model_params(&self) -> Result<ModelParams> {
        match (&self.model, &self.physical) {
            (Some(m), None) => {
                m.validate()?;
                Ok(m.clone())
            }
            (None, Some(p)) => Ok(derive_rates(p)?.model),
            _ => unreachable!("validated on load"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "dce",
    version,
    about = "Steady-state photon/phonon generation in a parametrically \
             modulated cavity with mechanical and condensate channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the steady state and report occupations plus regime data.
    Steady(SteadyArgs),
    /// Run a parameter sweep from a config or preset; write CSV and
    /// optional SVG.
    Sweep(SweepArgs),
    /// Tabulate the frequency-dependent response kernels over a band.
    Spectrum(SpectrumArgs),
    /// Locate the parametric instability boundary for one channel.
    Stability(StabilityArgs),
    /// Convert laboratory parameters into model rates with diagnostics.
    Calibrate(CalibrateArgs),
}

#[derive(Args, Debug)]
struct SteadyArgs {
    /// JSON run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Also write the JSON report to this file.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Regime-classification band as min:max:points.
    #[arg(long, value_name = "WMIN:WMAX:N", allow_hyphen_values = true)]
    band: Option<String>,
    /// Coherent/dissipative decision threshold.
    #[arg(long, value_name = "X")]
    coherent_threshold: Option<f64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// JSON run configuration containing a `sweep` block.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Named figure preset.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// CSV output path (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also render the occupation curves to this SVG file.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    /// JSON run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Frequency band as min:max:points (default: 201 points over |ω| ≤ κ).
    #[arg(long, value_name = "WMIN:WMAX:N", allow_hyphen_values = true)]
    band: Option<String>,
    /// CSV output path (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StabilityArgs {
    /// JSON run configuration (optional `channel`: mechanical | atomic).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Also write the JSON report to this file.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    /// JSON run configuration with units = "si" and a `physical` block.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Also write the JSON report to this file.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Entry point used by the binary: real process arguments and streams.
pub fn run_from_env() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run(&args, &mut out, &mut err)
}

/// Parses `args` (including the program name) and executes one command,
/// writing artifacts to `out` and diagnostics to `err`. Returns the
/// process exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    1
                }
            };
        }
    };
    let outcome = match cli.command {
        Command::Steady(a) => cmd_steady(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Spectrum(a) => cmd_spectrum(&a, out),
        Command::Stability(a) => cmd_stability(&a, out),
        Command::Calibrate(a) => cmd_calibrate(&a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Maps error variants onto the exit-code contract: configuration and I/O
/// problems are usage errors (1); everything the physics can legitimately
/// refuse is a domain outcome (2).
fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidParams(_) | Error::Config(_) | Error::Io { .. } | Error::Cancelled => 1,
        Error::Unstable { .. }
        | Error::MarginalStability { .. }
        | Error::NonPhysical { .. }
        | Error::Pole { .. }
        | Error::IndeterminateRegime(_)
        | Error::BoundaryNotFound { .. }
        | Error::Infeasible(_)
        | Error::StepSizeRejected { .. }
        | Error::NotConverged { .. } => 2,
    }
}

fn parse_band(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = |what: &str| Error::Config(format!("bad --band '{s}': {what}"));
    if parts.len() != 3 {
        return Err(bad("expected min:max:points"));
    }
    let min: f64 = parts[0].parse().map_err(|_| bad("min is not a number"))?;
    let max: f64 = parts[1].parse().map_err(|_| bad("max is not a number"))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| bad("points is not an integer"))?;
    if !(min < max) {
        return Err(bad("needs min < max"));
    }
    if n < 2 {
        return Err(bad("needs at least 2 points"));
    }
    Ok(band_linspace(min, max, n))
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Io {
        path: "<stdout>".to_string(),
        source: e,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Emits `text` to stdout, and additionally to `path` when given.
fn emit_text(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    write_out(out, text)?;
    if let Some(p) = path {
        write_file(p, text)?;
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))
}

#[derive(Serialize)]
struct SteadyOutput {
    occupations: Occupations,
    stable: bool,
    max_re_eig: f64,
    residual: f64,
    regime_report: RegimeReport,
}

#[derive(Serialize)]
struct UnstableOutput {
    stable: bool,
    max_re_eig: f64,
}

fn cmd_steady(a: &SteadyArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig::load(&a.config)?;
    let p = cfg.model_params()?;
    let band = match &a.band {
        Some(s) => parse_band(s)?,
        None => default_band(p.kappa),
    };
    let threshold = a.coherent_threshold.unwrap_or(DEFAULT_COHERENT_THRESHOLD);
    let ss = solve_steady(&build_drift(&p), &build_diffusion(&p))?;
    if !ss.stable {
        let report = UnstableOutput {
            stable: false,
            max_re_eig: ss.max_re_eig,
        };
        emit_text(out, a.out.as_deref(), &to_json(&report)?)?;
        return Ok(2);
    }
    let v = ss.covariance()?;
    let report = SteadyOutput {
        occupations: occupations(v)?,
        stable: true,
        max_re_eig: ss.max_re_eig,
        residual: ss.residual,
        regime_report: regime_report_with(&p, &band, threshold)?,
    };
    emit_text(out, a.out.as_deref(), &to_json(&report)?)?;
    Ok(0)
}

/// Runs `f` under a thread pool capped by `DCE_THREADS` when that variable
/// is set; otherwise uses the ambient rayon configuration.
fn with_thread_cap<T: Send>(f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match std::env::var("DCE_THREADS") {
        Err(_) => f(),
        Ok(raw) => {
            let n: usize = raw.trim().parse().map_err(|_| {
                Error::Config(format!("DCE_THREADS must be a positive integer, got '{raw}'"))
            })?;
            if n == 0 {
                return Err(Error::Config(
                    "DCE_THREADS must be a positive integer, got '0'".to_string(),
                ));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool construction failed: {e}")))?;
            pool.install(f)
        }
    }
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let table: SweepTable = match (&a.config, &a.preset) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "pass either --config or --preset, not both".to_string(),
            ))
        }
        (None, None) => {
            return Err(Error::Config(
                "sweep needs --config or --preset".to_string(),
            ))
        }
        (None, Some(name)) => with_thread_cap(|| run_preset(name))?,
        (Some(path), None) => {
            let cfg = RunConfig::load(path)?;
            let base = cfg.model_params()?;
            let sb = cfg.sweep.clone().ok_or_else(|| {
                Error::Config(format!(
                    "{}: sweep command needs a 'sweep' block",
                    path.display()
                ))
            })?;
            let spec = SweepSpec {
                base,
                control: sb.control,
                from: sb.from,
                to: sb.to,
                points: sb.points,
                fixed_partner_xi: sb.fixed_partner_xi,
                omega_band: sb.omega_band,
                coherent_threshold: sb.coherent_threshold,
            };
            with_thread_cap(|| run_sweep(&spec))?
        }
    };
    let csv = csv_string(&table);
    match &a.out {
        Some(path) => write_file(path, &csv)?,
        None => write_out(out, &csv)?,
    }
    if let Some(path) = &a.svg {
        emit_plot(&[&table], path)?;
    }
    Ok(0)
}

/// Per-kernel column names for the spectrum table, in emission order.
const SPECTRUM_KERNELS: [&str; 10] = [
    "sigma_a",
    "sigma_b",
    "sigma_d",
    "sigma_s",
    "sigma_m_aux",
    "lam_bar_s",
    "lam_m_aux",
    "lam_tilde_a",
    "lam_tilde_b",
    "lam_tilde_d",
];

fn cmd_spectrum(a: &SpectrumArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig::load(&a.config)?;
    let p = cfg.model_params()?;
    let band = match &a.band {
        Some(s) => parse_band(s)?,
        None => default_band(p.kappa),
    };
    let mut csv = String::from("omega");
    for k in SPECTRUM_KERNELS {
        csv.push_str(&format!(",re_{k},im_{k}"));
    }
    csv.push('\n');
    for &w in &band {
        let sp = spectral_point(&p, w)?;
        csv.push_str(&w.to_string());
        for z in [
            sp.sigma_a,
            sp.sigma_b,
            sp.sigma_d,
            sp.sigma_s,
            sp.sigma_m_aux,
            sp.lam_bar_s,
            sp.lam_m_aux,
            sp.lam_tilde_a,
            sp.lam_tilde_b,
            sp.lam_tilde_d,
        ] {
            csv.push_str(&format!(",{},{}", z.re, z.im));
        }
        csv.push('\n');
    }
    match &a.out {
        Some(path) => write_file(path, &csv)?,
        None => write_out(out, &csv)?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct StabilityOutput {
    channel: &'static str,
    lambda_critical: f64,
    predicted: f64,
    relative_gap: f64,
    max_re_eig: f64,
}

fn cmd_stability(a: &StabilityArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig::load(&a.config)?;
    let p = cfg.model_params()?;
    let channel = cfg.channel.unwrap_or(Channel::Mechanical);
    let b = find_stability_boundary(&p, channel)?;
    let report = StabilityOutput {
        channel: channel.name(),
        lambda_critical: b.lambda_critical,
        predicted: b.predicted,
        relative_gap: (b.lambda_critical - b.predicted).abs() / b.predicted,
        max_re_eig: b.max_re_eig,
    };
    emit_text(out, a.out.as_deref(), &to_json(&report)?)?;
    Ok(0)
}

fn cmd_calibrate(a: &CalibrateArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig::load(&a.config)?;
    let Some(physical) = &cfg.physical else {
        return Err(Error::Config(
            "calibrate needs units = \"si\" and a 'physical' block".to_string(),
        ));
    };
    let rates = derive_rates(physical)?;
    emit_text(out, a.out.as_deref(), &to_json(&rates)?)?;
    Ok(0)
}
