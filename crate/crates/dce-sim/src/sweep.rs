//! Parameter sweeps, figure-style presets, and artifact emission.
//!
//! A sweep walks one control (a modulation depth, absolute or relative to
//! its stability limit, or a coupling) across a grid, solving the steady
//! state at every point and recording occupations together with stability
//! and regime metadata. Grid points are independent and evaluated in
//! parallel with ordered collection, so the output is byte-identical for
//! any worker count. Tables serialize to commented CSV (round-trip exact)
//! and render to self-contained deterministic SVG plots.

use crate::lyapunov::solve_steady;
use crate::model::{build_diffusion, build_drift, occupations, ModelParams};
use crate::spectral::{
    band_linspace, coherent_ratio, default_band, regime_report, Regime,
    DEFAULT_COHERENT_THRESHOLD,
};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::str::FromStr;

/// The quantity a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Control {
    /// Mirror modulation depth as a fraction of its stability limit.
    #[serde(rename = "xi_m_rel")]
    XiMRel,
    /// Bogoliubov modulation depth as a fraction of its stability limit.
    #[serde(rename = "xi_d_rel")]
    XiDRel,
    /// Absolute mirror modulation amplitude.
    #[serde(rename = "lambda_m")]
    LambdaM,
    /// Absolute Bogoliubov modulation amplitude.
    #[serde(rename = "lambda_d")]
    LambdaD,
    /// Enhanced mirror-cavity coupling.
    #[serde(rename = "g")]
    CouplingG,
    /// Enhanced condensate-cavity coupling.
    #[serde(rename = "G")]
    CouplingGBec,
}

impl Control {
    pub fn as_str(self) -> &'static str {
        match self {
            Control::XiMRel => "xi_m_rel",
            Control::XiDRel => "xi_d_rel",
            Control::LambdaM => "lambda_m",
            Control::LambdaD => "lambda_d",
            Control::CouplingG => "g",
            Control::CouplingGBec => "G",
        }
    }

    /// Relative controls express the modulation as a fraction of ξ_max.
    pub fn is_relative(self) -> bool {
        matches!(self, Control::XiMRel | Control::XiDRel)
    }

    /// The phononic channel this control modulates, if any.
    fn modulated_channel(self) -> Option<Channel> {
        match self {
            Control::XiMRel | Control::LambdaM => Some(Channel::Mirror),
            Control::XiDRel | Control::LambdaD => Some(Channel::Bogoliubov),
            _ => None,
        }
    }
}

impl FromStr for Control {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "xi_m_rel" => Control::XiMRel,
            "xi_d_rel" => Control::XiDRel,
            "lambda_m" => Control::LambdaM,
            "lambda_d" => Control::LambdaD,
            "g" => Control::CouplingG,
            "G" => Control::CouplingGBec,
            other => {
                return Err(Error::Config(format!(
                    "unknown control '{other}' (expected xi_m_rel, xi_d_rel, lambda_m, \
                     lambda_d, g or G)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Channel {
    Mirror,
    Bogoliubov,
}

/// Frequency band description for the per-row regime classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl BandSpec {
    pub fn to_grid(self) -> Vec<f64> {
        band_linspace(self.min, self.max, self.points)
    }
}

fn default_threshold() -> f64 {
    DEFAULT_COHERENT_THRESHOLD
}

/// Full description of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub control: Control,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    /// Modulation depth ξ of the channel *not* being swept (applied when the
    /// control targets a phononic channel; ignored for coupling sweeps).
    #[serde(default)]
    pub fixed_partner_xi: f64,
    /// Band for the regime classification; the default covers |ω| ≤ κ.
    #[serde(default)]
    pub omega_band: Option<BandSpec>,
    /// Coherent/dissipative decision threshold.
    #[serde(default = "default_threshold")]
    pub coherent_threshold: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if !(self.from < self.to) {
            return Err(Error::InvalidParams(format!(
                "sweep needs from < to, got {} and {}",
                self.from, self.to
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidParams(format!(
                "sweep needs at least 2 points, got {}",
                self.points
            )));
        }
        if !(self.from >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "control values must be >= 0, got from = {}",
                self.from
            )));
        }
        if self.control.is_relative() && self.to >= 1.0 {
            return Err(Error::InvalidParams(format!(
                "relative sweeps must stay below the stability limit (to = {} >= 1)",
                self.to
            )));
        }
        if !(self.fixed_partner_xi >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "fixed_partner_xi must be >= 0, got {}",
                self.fixed_partner_xi
            )));
        }
        Ok(())
    }

    /// The parameter set at one control value: partner depth applied, then
    /// the control resolved (relative depths against ξ_max computed with the
    /// swept channel silent).
    pub fn resolve(&self, x: f64) -> Result<ModelParams> {
        let mut q = self.base.clone();
        match self.control.modulated_channel() {
            Some(Channel::Mirror) => q.lambda_d = self.fixed_partner_xi * q.gamma_d / 2.0,
            Some(Channel::Bogoliubov) => q.lambda_m = self.fixed_partner_xi * q.gamma_m / 2.0,
            None => {}
        }
        match self.control {
            Control::LambdaM => q.lambda_m = x,
            Control::LambdaD => q.lambda_d = x,
            Control::CouplingG => q.g = x,
            Control::CouplingGBec => q.g_bec = x,
            Control::XiMRel => {
                q.lambda_m = 0.0;
                let xi_max = regime_report(&q)?.xi_m_max;
                q.lambda_m = x * xi_max * q.gamma_m / 2.0;
            }
            Control::XiDRel => {
                q.lambda_d = 0.0;
                let xi_max = regime_report(&q)?.xi_d_max;
                q.lambda_d = x * xi_max * q.gamma_d / 2.0;
            }
        }
        Ok(q)
    }
}

/// One grid point of a sweep. Occupations are present only for stable,
/// physical solves; the spectral abscissa is present whenever the drift
/// could be assembled; regime fields are independent of stability and may
/// be missing only when the classifier itself failed (recorded in the
/// table's notes).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub control_value: f64,
    pub n_photon: Option<f64>,
    pub n_phonon_m: Option<f64>,
    pub n_phonon_d: Option<f64>,
    pub max_re_eig: Option<f64>,
    pub residual: Option<f64>,
    pub coherent_ratio: Option<f64>,
    pub regime: Option<Regime>,
    pub stable: bool,
}

/// Sweep result: ordered rows plus the metadata needed to reproduce them.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    /// Preset name when the sweep came from a preset.
    pub preset: Option<String>,
    pub control: Control,
    /// Base parameters (before the control is applied).
    pub base: ModelParams,
    pub fixed_partner_xi: f64,
    pub rows: Vec<SweepRow>,
    /// Per-point incidents (solver or classifier failures), in row order.
    pub notes: Vec<String>,
}

impl SweepTable {
    /// Label for plots and legends.
    pub fn label(&self) -> &str {
        self.preset.as_deref().unwrap_or_else(|| self.control.as_str())
    }
}

/// Runs one sweep. Grid points are evaluated in parallel; per-point
/// failures never abort the sweep — they leave the affected fields blank
/// and append a note.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let grid = band_linspace(spec.from, spec.to, spec.points);
    let band = spec
        .omega_band
        .map(BandSpec::to_grid)
        .unwrap_or_else(|| default_band(spec.base.kappa));
    let evaluated: Vec<(SweepRow, Vec<String>)> = grid
        .par_iter()
        .map(|&x| evaluate_point(spec, x, &band))
        .collect();
    let mut rows = Vec::with_capacity(evaluated.len());
    let mut notes = Vec::new();
    for (i, (row, mut point_notes)) in evaluated.into_iter().enumerate() {
        for n in point_notes.drain(..) {
            notes.push(format!("row {i} ({} = {}): {n}", spec.control.as_str(), row.control_value));
        }
        rows.push(row);
    }
    Ok(SweepTable {
        preset: None,
        control: spec.control,
        base: spec.base.clone(),
        fixed_partner_xi: spec.fixed_partner_xi,
        rows,
        notes,
    })
}

fn evaluate_point(spec: &SweepSpec, x: f64, band: &[f64]) -> (SweepRow, Vec<String>) {
    let mut notes = Vec::new();
    let mut row = SweepRow {
        control_value: x,
        n_photon: None,
        n_phonon_m: None,
        n_phonon_d: None,
        max_re_eig: None,
        residual: None,
        coherent_ratio: None,
        regime: None,
        stable: false,
    };
    let q = match spec.resolve(x) {
        Ok(q) => q,
        Err(e) => {
            notes.push(format!("control resolution failed: {e}"));
            return (row, notes);
        }
    };
    match solve_steady(&build_drift(&q), &build_diffusion(&q)) {
        Ok(ss) => {
            row.max_re_eig = Some(ss.max_re_eig);
            row.stable = ss.stable;
            if let Some(v) = ss.v {
                row.residual = Some(ss.residual);
                match occupations(&v) {
                    Ok(n) => {
                        row.n_photon = Some(n.photon);
                        row.n_phonon_m = Some(n.phonon_m);
                        row.n_phonon_d = Some(n.phonon_d);
                    }
                    Err(e) => notes.push(format!("occupation extraction failed: {e}")),
                }
            }
        }
        Err(e) => notes.push(format!("steady solve failed: {e}")),
    }
    match coherent_ratio(&q, band, spec.coherent_threshold) {
        Ok((ratio, regime)) => {
            row.coherent_ratio = Some(ratio);
            row.regime = Some(regime);
        }
        Err(e) => notes.push(format!("regime classification failed: {e}")),
    }
    (row, notes)
}

/// Named sweep configurations for the bundled figure-style studies.
#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub name: String,
    pub spec: SweepSpec,
}

/// All recognized preset names.
pub const PRESET_NAMES: [&str; 10] = [
    "fig3a_weak",
    "fig3a_strong",
    "fig4a",
    "fig4b",
    "fig5_equal",
    "fig5_diff",
    "fig6_equal_xm0",
    "fig6_equal_xm02",
    "fig6_diff_xm0",
    "fig6_diff_xm02",
];

/// Resolves a named preset. The relative grids run from 0.005 to 0.99 of
/// the stability limit on 200 points — the curves approach but never
/// reach the divergence.
pub fn preset(name: &str) -> Result<FigurePreset> {
    let rel = |g: f64, g_bec: f64, gamma: f64, control: Control, partner_xi: f64| SweepSpec {
        base: ModelParams {
            gamma_m: gamma,
            gamma_d: gamma,
            g,
            g_bec,
            ..Default::default()
        },
        control,
        from: 0.005,
        to: 0.99,
        points: 200,
        fixed_partner_xi: partner_xi,
        omega_band: None,
        coherent_threshold: DEFAULT_COHERENT_THRESHOLD,
    };
    let spec = match name {
        // Mirror-only channel at two coupling strengths (no condensate).
        "fig3a_weak" => rel(0.05, 0.0, 1e-4, Control::XiMRel, 0.0),
        "fig3a_strong" => rel(0.25, 0.0, 1e-4, Control::XiMRel, 0.0),
        // Atomic channel swept, equal vs 20:1 couplings, heavier damping.
        "fig4a" => rel(0.05, 0.05, 1e-3, Control::XiDRel, 0.0),
        "fig4b" => rel(0.005, 0.1, 1e-3, Control::XiDRel, 0.0),
        // Equal vs strongly split couplings.
        "fig5_equal" => rel(0.05, 0.05, 1e-4, Control::XiDRel, 0.0),
        "fig5_diff" => rel(0.001, 0.25, 1e-4, Control::XiDRel, 0.0),
        // Atomic sweep with the mirror modulation off/on.
        "fig6_equal_xm0" => rel(0.05, 0.05, 1e-4, Control::XiDRel, 0.0),
        "fig6_equal_xm02" => rel(0.05, 0.05, 1e-4, Control::XiDRel, 0.2),
        "fig6_diff_xm0" => rel(0.001, 0.05, 1e-4, Control::XiDRel, 0.0),
        "fig6_diff_xm02" => rel(0.001, 0.05, 1e-4, Control::XiDRel, 0.2),
        other => {
            return Err(Error::Config(format!(
                "unknown preset '{other}'; valid presets: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(FigurePreset {
        name: name.to_string(),
        spec,
    })
}

/// Runs a named preset and tags the table with its name.
pub fn run_preset(name: &str) -> Result<SweepTable> {
    let p = preset(name)?;
    let mut table = run_sweep(&p.spec)?;
    table.preset = Some(p.name);
    Ok(table)
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

const CSV_HEADER: &str =
    "control,n_photon,n_phonon_m,n_phonon_d,max_re_eig,residual,coherent_ratio,regime,stable";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Renders a table as CSV text: a `#`-commented metadata prologue (base
/// parameters, control, preset, notes), the fixed header, then one line per
/// row. All numbers are shortest round-trip decimals; line endings are LF.
pub fn csv_string(table: &SweepTable) -> String {
    let mut out = String::new();
    if let Some(name) = &table.preset {
        out.push_str(&format!("# preset = {name}\n"));
    }
    out.push_str(&format!("# control = {}\n", table.control.as_str()));
    let b = &table.base;
    for (k, v) in [
        ("kappa", b.kappa),
        ("gamma_m", b.gamma_m),
        ("gamma_d", b.gamma_d),
        ("g", b.g),
        ("G", b.g_bec),
        ("lambda_m", b.lambda_m),
        ("lambda_d", b.lambda_d),
        ("nbar_m", b.nbar_m),
        ("nbar_d", b.nbar_d),
        ("nbar_ph", b.nbar_ph),
        ("fixed_partner_xi", table.fixed_partner_xi),
    ] {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    for note in &table.notes {
        out.push_str(&format!("# note = {}\n", note.replace('\n', "; ")));
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.control_value,
            opt(r.n_photon),
            opt(r.n_phonon_m),
            opt(r.n_phonon_d),
            opt(r.max_re_eig),
            opt(r.residual),
            opt(r.coherent_ratio),
            r.regime.map(|g| g.to_string()).unwrap_or_default(),
            r.stable,
        ));
    }
    out
}

/// Writes [`csv_string`] to a file.
pub fn emit_csv(table: &SweepTable, path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(table)).map_err(|e| io_err(path, e))
}

fn parse_opt(field: &str, line_no: usize) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse()
        .map(Some)
        .map_err(|e| Error::Config(format!("line {line_no}: bad number '{field}': {e}")))
}

/// Parses CSV text produced by [`csv_string`] back into a table,
/// reconstructing metadata from the comment prologue. Round-trips
/// bit-exactly thanks to the shortest round-trip number formatting.
pub fn parse_csv(text: &str) -> Result<SweepTable> {
    let mut preset_name = None;
    let mut control = None;
    let mut base = ModelParams::default();
    let mut fixed_partner_xi = 0.0;
    let mut notes = Vec::new();
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if let Some(comment) = line.strip_prefix('#') {
            let Some((k, v)) = comment.split_once('=') else {
                continue;
            };
            let (k, v) = (k.trim(), v.trim());
            let num = |v: &str| -> Result<f64> {
                v.parse()
                    .map_err(|e| Error::Config(format!("line {line_no}: bad number '{v}': {e}")))
            };
            match k {
                "preset" => preset_name = Some(v.to_string()),
                "control" => control = Some(v.parse::<Control>()?),
                "kappa" => base.kappa = num(v)?,
                "gamma_m" => base.gamma_m = num(v)?,
                "gamma_d" => base.gamma_d = num(v)?,
                "g" => base.g = num(v)?,
                "G" => base.g_bec = num(v)?,
                "lambda_m" => base.lambda_m = num(v)?,
                "lambda_d" => base.lambda_d = num(v)?,
                "nbar_m" => base.nbar_m = num(v)?,
                "nbar_d" => base.nbar_d = num(v)?,
                "nbar_ph" => base.nbar_ph = num(v)?,
                "fixed_partner_xi" => fixed_partner_xi = num(v)?,
                "note" => notes.push(v.to_string()),
                _ => {}
            }
            continue;
        }
        if !seen_header {
            if line != CSV_HEADER {
                return Err(Error::Config(format!(
                    "line {line_no}: expected header '{CSV_HEADER}', got '{line}'"
                )));
            }
            seen_header = true;
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(Error::Config(format!(
                "line {line_no}: expected 9 fields, got {}",
                fields.len()
            )));
        }
        rows.push(SweepRow {
            control_value: parse_opt(fields[0], line_no)?.ok_or_else(|| {
                Error::Config(format!("line {line_no}: missing control value"))
            })?,
            n_photon: parse_opt(fields[1], line_no)?,
            n_phonon_m: parse_opt(fields[2], line_no)?,
            n_phonon_d: parse_opt(fields[3], line_no)?,
            max_re_eig: parse_opt(fields[4], line_no)?,
            residual: parse_opt(fields[5], line_no)?,
            coherent_ratio: parse_opt(fields[6], line_no)?,
            regime: match fields[7] {
                "" => None,
                "coherent" => Some(Regime::Coherent),
                "dissipative" => Some(Regime::Dissipative),
                "unmodulated" => Some(Regime::Unmodulated),
                other => {
                    return Err(Error::Config(format!(
                        "line {line_no}: unknown regime '{other}'"
                    )))
                }
            },
            stable: match fields[8] {
                "true" => true,
                "false" => false,
                other => {
                    return Err(Error::Config(format!(
                        "line {line_no}: bad stable flag '{other}'"
                    )))
                }
            },
        });
    }
    if !seen_header {
        return Err(Error::Config("missing CSV header".to_string()));
    }
    let control =
        control.ok_or_else(|| Error::Config("missing '# control = …' metadata".to_string()))?;
    Ok(SweepTable {
        preset: preset_name,
        control,
        base,
        fixed_partner_xi,
        rows,
        notes,
    })
}

/// One plotted curve: a label and (control, occupation) points.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Occupations below this floor plot at the floor (log axis; vacuum rows
/// are exactly zero).
const PLOT_FLOOR: f64 = 1e-12;

/// Extracts the three occupation series of a table (photons, mirror
/// phonons, Bogoliubov phonons), skipping rows without occupations.
pub fn occupation_series(table: &SweepTable) -> Vec<Series> {
    let columns: [(&str, fn(&SweepRow) -> Option<f64>); 3] = [
        ("Casimir photons", |r| r.n_photon),
        ("mechanical Casimir phonons", |r| r.n_phonon_m),
        ("Bogoliubov Casimir phonons", |r| r.n_phonon_d),
    ];
    columns
        .iter()
        .filter_map(|(name, get)| {
            let points: Vec<(f64, f64)> = table
                .rows
                .iter()
                .filter_map(|r| get(r).map(|n| (r.control_value, n.max(PLOT_FLOOR))))
                .collect();
            (!points.is_empty()).then(|| Series {
                label: format!("{} — {name}", table.label()),
                points,
            })
        })
        .collect()
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];
const DASHES: [&str; 4] = ["", "6 3", "2 2", "8 3 2 3"];

/// Renders curves into a self-contained SVG with a log-scale occupation
/// axis. Purely textual and deterministic: identical inputs give identical
/// bytes.
pub fn render_svg(series: &[Series], x_label: &str) -> Result<String> {
    if series.is_empty() || series.iter().all(|s| s.points.is_empty()) {
        return Err(Error::InvalidParams(
            "nothing to plot: no series with data points".to_string(),
        ));
    }
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in &s.points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    // Log axis spans whole decades around the data.
    let mut ly0 = y0.log10().floor();
    let mut ly1 = y1.log10().ceil();
    if ly1 <= ly0 {
        ly0 -= 1.0;
        ly1 += 1.0;
    }

    let (left, top, width, height) = (70.0, 20.0, 520.0, 440.0);
    let px = |x: f64| left + (x - x0) / (x1 - x0) * width;
    let py = |y: f64| top + (1.0 - (y.log10() - ly0) / (ly1 - ly0)) * height;

    let mut svg = String::new();
    svg.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"880\" height=\"520\" \
         viewBox=\"0 0 880 520\" font-family=\"monospace\" font-size=\"12\">\n",
    );
    svg.push_str("<rect width=\"880\" height=\"520\" fill=\"white\"/>\n");

    // Decade grid and y tick labels.
    let mut k = ly0 as i64;
    while k <= ly1 as i64 {
        let y = py(10f64.powi(k as i32));
        svg.push_str(&format!(
            "<line x1=\"{left:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            left + width
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">1e{k}</text>\n",
            left - 8.0,
            y + 4.0
        ));
        k += 1;
    }
    // X ticks.
    for i in 0..=5 {
        let x = x0 + (x1 - x0) * i as f64 / 5.0;
        let xp = px(x);
        svg.push_str(&format!(
            "<line x1=\"{xp:.2}\" y1=\"{:.2}\" x2=\"{xp:.2}\" y2=\"{:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            top,
            top + height
        ));
        svg.push_str(&format!(
            "<text x=\"{xp:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{:.3}</text>\n",
            top + height + 18.0,
            x
        ));
    }
    // Axes.
    svg.push_str(&format!(
        "<rect x=\"{left:.2}\" y=\"{top:.2}\" width=\"{width:.2}\" height=\"{height:.2}\" \
         fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{x_label}</text>\n",
        left + width / 2.0,
        top + height + 40.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" transform=\"rotate(-90 16 {:.2})\" \
         text-anchor=\"middle\">mean occupation</text>\n",
        top + height / 2.0,
        top + height / 2.0
    ));

    // Curves.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = DASHES[(i / PALETTE.len()) % DASHES.len()];
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(" stroke-dasharray=\"{dash}\"")
        };
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash_attr} \
             points=\"{}\"/>\n",
            pts.join(" ")
        ));
    }
    // Legend.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = top + 10.0 + 18.0 * i as f64;
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"{color}\" stroke-width=\"2\"/>\n",
            left + width + 16.0,
            left + width + 44.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{y:.2}\">{}</text>\n",
            left + width + 50.0,
            xml_escape(&s.label)
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the occupation curves of one or more tables into an SVG file.
/// Errors if no table contributes any plottable row.
pub fn emit_plot(tables: &[&SweepTable], path: &Path) -> Result<()> {
    let series: Vec<Series> = tables.iter().flat_map(|t| occupation_series(t)).collect();
    let x_label = tables
        .first()
        .map(|t| t.control.as_str())
        .unwrap_or("control");
    let svg = render_svg(&series, x_label)?;
    std::fs::write(path, svg).map_err(|e| io_err(path, e))
}
