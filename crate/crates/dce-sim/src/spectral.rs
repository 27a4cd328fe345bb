//! Fourier-space response: self-energies, induced parametric gain, effective
//! damping rates, collective cooperativities, modulation limits and the
//! coherent-regime classifier.
//!
//! Each mode, once its partners are eliminated in frequency space, behaves
//! like a degenerate parametric amplifier with a dressed damping rate
//! (self-energy Σ) and a dressed gain λ̃. The closed forms here follow from
//! straight elimination of the linear fluctuation equations and are checked
//! in the tests against the drift-matrix description: the zero-frequency
//! self-energies must reproduce the effective damping rates, and the
//! modulation limit must track the eigenvalue stability boundary.

use crate::lyapunov::spectral_abscissa;
use crate::model::{build_drift, ModelParams};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Denominator magnitude below which a kernel evaluation counts as a pole.
const POLE_TOL: f64 = 1e-14;

/// All spectral kernels of the three-mode system at one real frequency.
///
/// `sigma_m_aux` and `lam_m_aux` are the mirror-channel auxiliary kernels
/// that dress the cavity as seen from the Bogoliubov mode; `sigma_s` and
/// `lam_bar_s` are their condensate-channel counterparts seen from the
/// mirror.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub omega: f64,
    /// Cavity self-energy from both phononic channels.
    pub sigma_a: Complex64,
    /// Mirror self-energy through the dressed cavity.
    pub sigma_b: Complex64,
    /// Bogoliubov self-energy through the dressed cavity.
    pub sigma_d: Complex64,
    /// Condensate-channel contribution to the cavity self-energy.
    pub sigma_s: Complex64,
    /// Mirror-channel contribution to the cavity self-energy.
    pub sigma_m_aux: Complex64,
    /// Condensate-channel induced-gain kernel.
    pub lam_bar_s: Complex64,
    /// Mirror-channel induced-gain kernel.
    pub lam_m_aux: Complex64,
    /// Parametric gain induced on the cavity.
    pub lam_tilde_a: Complex64,
    /// Dressed mirror gain (bare λ_m plus the cavity-mediated part).
    pub lam_tilde_b: Complex64,
    /// Dressed Bogoliubov gain (bare λ_d plus the cavity-mediated part).
    pub lam_tilde_d: Complex64,
}

/// Evaluates every kernel at the real frequency `omega` (units of κ).
///
/// The phononic response denominators are D(ω) = (γ/2 − iω)² − λ²; the
/// cavity appears dressed by one channel when eliminated from the other.
/// Any denominator within [`POLE_TOL`] of zero aborts with a pole error
/// naming the offending kernel.
pub fn spectral_point(p: &ModelParams, omega: f64) -> Result<SpectralPoint> {
    p.validate()?;
    let i = Complex64::i();
    let miw = Complex64::new(0.0, -omega);
    let g2 = p.g * p.g;
    let gg2 = p.g_bec * p.g_bec;

    let rm = p.gamma_m / 2.0 + miw; // mirror response numerator γ_m/2 − iω
    let rd = p.gamma_d / 2.0 + miw;
    let dm = rm * rm - p.lambda_m * p.lambda_m;
    let dd = rd * rd - p.lambda_d * p.lambda_d;
    if dm.norm() < POLE_TOL {
        return Err(Error::Pole {
            kernel: "mirror-response",
            omega,
        });
    }
    if dd.norm() < POLE_TOL {
        return Err(Error::Pole {
            kernel: "bogoliubov-response",
            omega,
        });
    }

    let sigma_m_aux = -i * (g2 * rm / dm);
    let sigma_s = -i * (gg2 * rd / dd);
    let sigma_a = sigma_m_aux + sigma_s;
    let lam_m_aux = p.lambda_m * g2 / dm;
    let lam_bar_s = p.lambda_d * gg2 / dd;
    let lam_tilde_a = p.lambda_m * g2 / dm + p.lambda_d * gg2 / dd;

    // Cavity dressed by the condensate channel, as seen from the mirror.
    let x = p.kappa / 2.0 + miw + i * sigma_s;
    let den_b = x * x - lam_bar_s * lam_bar_s;
    if den_b.norm() < POLE_TOL {
        return Err(Error::Pole {
            kernel: "atom-dressed-cavity",
            omega,
        });
    }
    let sigma_b = -i * (g2 * x / den_b);
    let lam_tilde_b = p.lambda_m + g2 * lam_bar_s / den_b;

    // Cavity dressed by the mirror channel, as seen from the condensate.
    let y = p.kappa / 2.0 + miw + i * sigma_m_aux;
    let den_d = y * y - lam_m_aux * lam_m_aux;
    if den_d.norm() < POLE_TOL {
        return Err(Error::Pole {
            kernel: "mirror-dressed-cavity",
            omega,
        });
    }
    let sigma_d = -i * (gg2 * y / den_d);
    let lam_tilde_d = p.lambda_d + gg2 * lam_m_aux / den_d;

    Ok(SpectralPoint {
        omega,
        sigma_a,
        sigma_b,
        sigma_d,
        sigma_s,
        sigma_m_aux,
        lam_bar_s,
        lam_m_aux,
        lam_tilde_a,
        lam_tilde_b,
        lam_tilde_d,
    })
}

/// Classification of the induced cavity gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// |Im λ̃_a| ≪ |Re λ̃_a| across the band: the induced gain acts as a
    /// coherent parametric drive.
    Coherent,
    /// The dissipative (imaginary) part competes with or dominates the gain.
    Dissipative,
    /// No parametric modulation is active.
    Unmodulated,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Coherent => "coherent",
            Regime::Dissipative => "dissipative",
            Regime::Unmodulated => "unmodulated",
        })
    }
}

/// Default threshold under which the worst Im/Re ratio still counts as
/// coherent.
pub const DEFAULT_COHERENT_THRESHOLD: f64 = 0.1;

/// Equally spaced band of `n` frequencies covering [min, max]; for an odd
/// count over a symmetric band the center point is exactly zero.
pub fn band_linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    assert!(n >= 1 && max >= min);
    if n == 1 {
        return vec![(min + max) / 2.0];
    }
    let half = (n - 1) as f64 / 2.0;
    let mid = (min + max) / 2.0;
    let step = (max - min) / (n - 1) as f64;
    (0..n).map(|i| mid + (i as f64 - half) * step).collect()
}

/// The default classification band: 201 points over one cavity linewidth to
/// either side, |ω| ≤ κ.
pub fn default_band(kappa: f64) -> Vec<f64> {
    band_linspace(-kappa, kappa, 201)
}

/// Worst ratio |Im λ̃_a| / |Re λ̃_a| over the sampled band, and the regime it
/// implies under `threshold`.
///
/// Band points where |Re λ̃_a| ≤ 1e-14 are skipped; if the whole band is
/// skipped (or empty) no classification is possible. With both modulations
/// off the gain vanishes identically and the regime is `Unmodulated` with
/// ratio 0.
pub fn coherent_ratio(p: &ModelParams, omega_band: &[f64], threshold: f64) -> Result<(f64, Regime)> {
    p.validate()?;
    if p.lambda_m + p.lambda_d == 0.0 {
        return Ok((0.0, Regime::Unmodulated));
    }
    if omega_band.is_empty() {
        return Err(Error::IndeterminateRegime(
            "empty frequency band".to_string(),
        ));
    }
    let points: Vec<SpectralPoint> = omega_band
        .par_iter()
        .map(|&w| spectral_point(p, w))
        .collect::<Result<_>>()?;
    let mut ratio: Option<f64> = None;
    for pt in &points {
        let re = pt.lam_tilde_a.re.abs();
        if re > 1e-14 {
            let r = pt.lam_tilde_a.im.abs() / re;
            ratio = Some(ratio.map_or(r, |best: f64| best.max(r)));
        }
    }
    let ratio = ratio.ok_or_else(|| {
        Error::IndeterminateRegime(format!(
            "Re of the induced gain below 1e-14 at all {} band points",
            omega_band.len()
        ))
    })?;
    let regime = if ratio < threshold {
        Regime::Coherent
    } else {
        Regime::Dissipative
    };
    Ok((ratio, regime))
}

/// Closed-form summary of the operating regime: cooperativities, modulation
/// depths and their stability limits, effective damping rates, and the
/// coherent/dissipative classification of the induced cavity gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    /// Bare optomechanical cooperativity C₀ = 4g²/(κγ_m).
    pub cooperativity_c0: f64,
    /// Bare opto-atomic cooperativity C₁ = 4G²/(κγ_d).
    pub cooperativity_c1: f64,
    /// Collective mirror cooperativity (partner modulation folded in).
    pub collective_cm: f64,
    /// Collective Bogoliubov cooperativity (partner modulation folded in).
    pub collective_cd: f64,
    /// Mirror modulation depth ξ_m = 2λ_m/γ_m.
    pub xi_m: f64,
    /// Bogoliubov modulation depth ξ_d = 2λ_d/γ_d.
    pub xi_d: f64,
    /// Stability limit of ξ_m with the partner depth frozen at `xi_d`.
    pub xi_m_max: f64,
    /// Stability limit of ξ_d with the partner depth frozen at `xi_m`.
    pub xi_d_max: f64,
    /// Effective mirror damping Γ_m = γ_m(1 + C_m).
    pub gamma_eff_m: f64,
    /// Effective Bogoliubov damping Γ_d = γ_d(1 + C_d).
    pub gamma_eff_d: f64,
    /// Phonon-induced cavity damping κ·C_a (signed; negative past ξ = 1).
    pub kappa_opt: f64,
    /// Effective cavity damping κ(1 + C_a).
    pub kappa_eff: f64,
    /// Induced-damping cooperativity C_a = C₀/(1−ξ_m²) + C₁/(1−ξ_d²).
    pub cooperativity_ca: f64,
    /// True when a modulation depth sits numerically on the ξ = 1 divergence
    /// of C_a; the three κ fields are NaN in that case.
    pub kappa_opt_divergent: bool,
    /// Worst |Im/Re| of the induced cavity gain on the default band.
    pub coherent_ratio: f64,
    pub regime: Regime,
}

/// Bare and collective cooperativities (C₀, C₁, C_m, C_d); the collective
/// values fold in the partner channel's modulation depth.
fn cooperativities(p: &ModelParams) -> (f64, f64, f64, f64) {
    let c0 = 4.0 * p.g * p.g / (p.kappa * p.gamma_m);
    let c1 = 4.0 * p.g_bec * p.g_bec / (p.kappa * p.gamma_d);
    let xi_m = p.xi_m();
    let xi_d = p.xi_d();
    let cm = c0 * (1.0 + c1 - xi_d * xi_d) / ((1.0 + c1) * (1.0 + c1) - xi_d * xi_d);
    let cd = c1 * (1.0 + c0 - xi_m * xi_m) / ((1.0 + c0) * (1.0 + c0) - xi_m * xi_m);
    (c0, c1, cm, cd)
}

/// Computes the full closed-form regime report for one parameter set.
///
/// The collective cooperativities fold the partner channel's modulation
/// depth into the usual C/(1 + C_partner) reduction; each ξ_max is the
/// modulation limit λ_max = (γ/2)(1 + C_collective) expressed as a depth,
/// with the partner frozen at its configured value.
///
/// At ξ = 1 exactly the phononic response has a pole on the classifier band
/// (at ω = 0), where the induced gain turns purely imaginary; the report
/// then carries ratio = ∞ and regime `Dissipative` rather than failing.
pub fn regime_report(p: &ModelParams) -> Result<RegimeReport> {
    regime_report_with(p, &default_band(p.kappa), DEFAULT_COHERENT_THRESHOLD)
}

/// [`regime_report`] with an explicit classification band and threshold.
pub fn regime_report_with(
    p: &ModelParams,
    omega_band: &[f64],
    threshold: f64,
) -> Result<RegimeReport> {
    p.validate()?;
    let (c0, c1, cm, cd) = cooperativities(p);
    let xi_m = p.xi_m();
    let xi_d = p.xi_d();
    let divergent =
        (1.0 - xi_m * xi_m).abs() <= POLE_TOL || (1.0 - xi_d * xi_d).abs() <= POLE_TOL;
    let ca = if divergent {
        f64::NAN
    } else {
        c0 / (1.0 - xi_m * xi_m) + c1 / (1.0 - xi_d * xi_d)
    };
    let (ratio, regime) = match coherent_ratio(p, omega_band, threshold) {
        Ok(pair) => pair,
        Err(Error::Pole { .. }) => (f64::INFINITY, Regime::Dissipative),
        Err(e) => return Err(e),
    };
    Ok(RegimeReport {
        cooperativity_c0: c0,
        cooperativity_c1: c1,
        collective_cm: cm,
        collective_cd: cd,
        xi_m,
        xi_d,
        xi_m_max: 1.0 + cm,
        xi_d_max: 1.0 + cd,
        gamma_eff_m: p.gamma_m * (1.0 + cm),
        gamma_eff_d: p.gamma_d * (1.0 + cd),
        kappa_opt: p.kappa * ca,
        kappa_eff: p.kappa * (1.0 + ca),
        cooperativity_ca: ca,
        kappa_opt_divergent: divergent,
        coherent_ratio: ratio,
        regime,
    })
}

/// Which parametric drive the boundary search varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Mechanical,
    Atomic,
}

impl Channel {
    pub fn name(self) -> &'static str {
        match self {
            Channel::Mechanical => "mechanical",
            Channel::Atomic => "atomic",
        }
    }
}

/// Outcome of the stability-boundary bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityBoundary {
    /// Modulation amplitude at which the drift's spectral abscissa crosses 0.
    pub lambda_critical: f64,
    /// Closed-form limit (γ/2)(1 + C_collective) for comparison.
    pub predicted: f64,
    /// Residual spectral abscissa at `lambda_critical` (|·| ≤ 1e-10).
    pub max_re_eig: f64,
}

/// Spectral abscissa with the chosen channel's modulation replaced.
fn abscissa_at(p: &ModelParams, which: Channel, lambda: f64) -> f64 {
    let mut q = p.clone();
    match which {
        Channel::Mechanical => q.lambda_m = lambda,
        Channel::Atomic => q.lambda_d = lambda,
    }
    spectral_abscissa(&build_drift(&q))
}

/// Locates the exact instability threshold of one modulation channel by
/// eigenvalue bisection, holding everything else (including the partner
/// modulation) fixed.
///
/// The closed-form limit seeds the bracket; candidates up to ten times the
/// prediction are scanned before giving up. The returned critical amplitude
/// satisfies |max Re eigenvalue| ≤ 1e-10.
pub fn find_stability_boundary(p: &ModelParams, which: Channel) -> Result<StabilityBoundary> {
    p.validate()?;
    // The collective cooperativity folds in only the partner depth, so the
    // prediction is independent of the channel's own current amplitude.
    let (_, _, cm, cd) = cooperativities(p);
    let predicted = match which {
        Channel::Mechanical => p.gamma_m / 2.0 * (1.0 + cm),
        Channel::Atomic => p.gamma_d / 2.0 * (1.0 + cd),
    };
    let f0 = abscissa_at(p, which, 0.0);
    if f0 >= 0.0 {
        return Err(Error::Unstable { max_re_eig: f0 });
    }
    let mut lo = 0.0;
    let mut hi = None;
    for factor in [0.5, 0.75, 0.9, 1.01, 1.1, 1.5, 2.0, 4.0, 10.0] {
        let cand = predicted * factor;
        if abscissa_at(p, which, cand) > 0.0 {
            hi = Some(cand);
            break;
        }
        lo = cand;
    }
    let mut hi = hi.ok_or(Error::BoundaryNotFound {
        channel: which.name(),
        limit: 10.0 * predicted,
    })?;
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..400 {
        mid = 0.5 * (lo + hi);
        let f = abscissa_at(p, which, mid);
        if f.abs() <= 1e-10 {
            return Ok(StabilityBoundary {
                lambda_critical: mid,
                predicted,
                max_re_eig: f,
            });
        }
        if f > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::BoundaryNotFound {
        channel: which.name(),
        limit: mid,
    })
}
