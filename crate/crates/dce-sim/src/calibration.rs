//! Laboratory parameters to dimensionless model rates.
//!
//! Everything downstream works in units of the cavity linewidth; this module
//! owns the one place where SI quantities appear. The chain is: laser drive
//! and detuning give the intracavity mean field, the mean field enhances the
//! single-photon couplings, and the two modulation depths convert hardware
//! amplitudes (spring-constant depth δk, collision depth ε) into the
//! parametric rates λ_m, λ_d.

use crate::lyapunov::TimeDependentParams;
use crate::model::ModelParams;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Reduced Planck constant (J·s), CODATA 2018 exact-definition value.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Laboratory description of one experimental configuration, SI units
/// throughout (rad/s for every rate and frequency).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    /// Cavity length L (m).
    pub cavity_length: f64,
    /// Effective mass of the moving mirror (kg).
    pub mirror_mass: f64,
    /// Mirror mechanical frequency ω_m (rad/s).
    pub mirror_freq: f64,
    /// Cavity resonance ω_c (rad/s).
    pub cavity_freq: f64,
    /// Drive laser frequency ω_L (rad/s).
    pub laser_freq: f64,
    /// Drive laser power P_L (W).
    pub laser_power: f64,
    /// Cavity amplitude decay κ (rad/s).
    pub cavity_decay: f64,
    /// Mirror damping γ_m (rad/s).
    pub mech_damping: f64,
    /// Bogoliubov mode damping γ_d (rad/s).
    pub bogoliubov_damping: f64,
    /// Number of condensate atoms N.
    pub atom_number: f64,
    /// Atomic mass m_a (kg).
    pub atom_mass: f64,
    /// Two-body s-wave scattering length a_s (m).
    pub scattering_length: f64,
    /// Optical mode waist radius w (m).
    pub mode_waist: f64,
    /// Atom-pump detuning Δ_a (rad/s); negative for a repulsive lattice,
    /// and assumed deep in the dispersive regime.
    pub atom_detuning: f64,
    /// Vacuum Rabi coupling g_a (rad/s).
    pub rabi_coupling: f64,
    /// Spring-constant modulation depth δk (N/m).
    pub spring_mod_depth: f64,
    /// Collision-frequency modulation depth ε (dimensionless, in [0, 1]).
    pub collision_mod_depth: f64,
    /// Cavity-laser detuning Δ_c = ω_c − ω_L (rad/s).
    pub detuning: f64,
}

impl PhysicalParams {
    /// Domain check: strictly positive hardware scales, non-negative drive
    /// and modulation depths, ε ≤ 1, nonzero atomic detuning.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("cavity_length", self.cavity_length),
            ("mirror_mass", self.mirror_mass),
            ("mirror_freq", self.mirror_freq),
            ("cavity_freq", self.cavity_freq),
            ("laser_freq", self.laser_freq),
            ("cavity_decay", self.cavity_decay),
            ("mech_damping", self.mech_damping),
            ("bogoliubov_damping", self.bogoliubov_damping),
            ("atom_number", self.atom_number),
            ("atom_mass", self.atom_mass),
            ("mode_waist", self.mode_waist),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be > 0, got {v}")));
            }
        }
        let non_negative = [
            ("laser_power", self.laser_power),
            ("scattering_length", self.scattering_length),
            ("rabi_coupling", self.rabi_coupling),
            ("spring_mod_depth", self.spring_mod_depth),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.collision_mod_depth) {
            return Err(Error::InvalidParams(format!(
                "collision_mod_depth must lie in [0, 1], got {}",
                self.collision_mod_depth
            )));
        }
        if self.atom_detuning == 0.0 || !self.atom_detuning.is_finite() {
            return Err(Error::InvalidParams(
                "atom_detuning must be nonzero (dispersive regime)".to_string(),
            ));
        }
        if !self.detuning.is_finite() {
            return Err(Error::InvalidParams("detuning must be finite".to_string()));
        }
        Ok(())
    }
}

/// Sanity indicators attached to a calibration. None of these is fatal: the
/// derivation is exact given the inputs, but outside these windows the
/// two-mode condensate truncation, the resonance condition, or the
/// rotating-wave step lose accuracy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// U₀·|ā|² / ω_R; the two-mode condensate expansion wants ≤ 10.
    pub weak_interaction_ratio: f64,
    /// |Δ₀ − ω_m| / ω_m (detuning off the mechanical resonance).
    pub detuning_resonance_gap: f64,
    /// |ω_d − ω_m| / ω_m (Bogoliubov mode off the mechanical resonance).
    pub bogoliubov_resonance_gap: f64,
    /// ω_m / κ; the rotating-wave step wants ≥ 10.
    pub sideband_ratio: f64,
    /// Human-readable warnings for every indicator outside its window.
    pub warnings: Vec<String>,
}

/// Calibration output: the dimensionless model (still in rad/s; call
/// [`ModelParams::normalized`] for κ-units) plus every intermediate of the
/// derivation and the sanity diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedRates {
    pub model: ModelParams,
    /// Mirror zero-point position spread (m).
    pub x_zp: f64,
    /// Single-photon optomechanical coupling g₀ (rad/s).
    pub g0: f64,
    /// Optical-lattice barrier height per photon U₀ = −g_a²/Δ_a (rad/s).
    pub u0: f64,
    /// Single-photon condensate coupling G₀ = √(2N)·U₀/4 (rad/s).
    pub g0_bec: f64,
    /// Atomic recoil frequency ω_R (rad/s).
    pub omega_r: f64,
    /// s-wave collision frequency ω_sw (rad/s).
    pub omega_sw: f64,
    /// Bogoliubov mode frequency ω_d = 4ω_R + ω_sw (rad/s).
    pub omega_d: f64,
    /// Mirror mechanical frequency, copied from the input (rad/s).
    pub omega_m: f64,
    /// Condensate Stark shift δ₀ = N·U₀/2 (rad/s).
    pub stark_shift: f64,
    /// Effective detuning Δ₀ = Δ_c + N·U₀/2 (rad/s).
    pub delta0: f64,
    /// Cavity drive rate E_L = √(κ·P_L/ℏω_L) (rad/s).
    pub drive_rate: f64,
    /// Intracavity mean photon number |ā|².
    pub mean_photons: f64,
    pub diagnostics: Diagnostics,
}

impl DerivedRates {
    /// Packages the calibration for the full time-dependent dynamics.
    pub fn time_dependent(&self) -> TimeDependentParams {
        TimeDependentParams {
            base: self.model.clone(),
            delta0: self.delta0,
            omega_m: self.omega_m,
            omega_d: self.omega_d,
        }
    }
}

/// Derives the dimensionless model rates from one laboratory configuration.
///
/// The mean field uses the zeroth-order detuning (no self-consistent
/// displacement iteration): ā = E_L/(κ/2 + iΔ₀), and the enhanced couplings
/// are g = g₀|ā|, G = G₀|ā|. A non-positive lattice height U₀ (wrong sign of
/// the atomic detuning) is fatal; everything else out of range only warns.
pub fn derive_rates(pp: &PhysicalParams) -> Result<DerivedRates> {
    pp.validate()?;
    let x_zp = (HBAR / (2.0 * pp.mirror_mass * pp.mirror_freq)).sqrt();
    let g0 = x_zp * pp.cavity_freq / pp.cavity_length;
    let u0 = -pp.rabi_coupling * pp.rabi_coupling / pp.atom_detuning;
    if !(u0 > 0.0) {
        return Err(Error::InvalidParams(format!(
            "derived lattice height U0 = {u0:.3e} rad/s must be positive; \
             the atomic detuning must be negative (red) for a repulsive lattice"
        )));
    }
    let g0_bec = (2.0 * pp.atom_number).sqrt() * u0 / 4.0;
    let k0 = pp.laser_freq / SPEED_OF_LIGHT;
    let omega_r = HBAR * k0 * k0 / (2.0 * pp.atom_mass);
    let omega_sw = 8.0 * std::f64::consts::PI * HBAR * pp.atom_number * pp.scattering_length
        / (pp.atom_mass * pp.cavity_length * pp.mode_waist * pp.mode_waist);
    let omega_d = 4.0 * omega_r + omega_sw;
    let stark_shift = pp.atom_number * u0 / 2.0;
    let delta0 = pp.detuning + stark_shift;
    let drive_rate = (pp.cavity_decay * pp.laser_power / (HBAR * pp.laser_freq)).sqrt();
    let mean_field = drive_rate / (pp.cavity_decay * pp.cavity_decay / 4.0 + delta0 * delta0).sqrt();
    let mean_photons = mean_field * mean_field;

    let model = ModelParams {
        kappa: pp.cavity_decay,
        gamma_m: pp.mech_damping,
        gamma_d: pp.bogoliubov_damping,
        g: g0 * mean_field,
        g_bec: g0_bec * mean_field,
        lambda_m: pp.spring_mod_depth * x_zp * x_zp / (2.0 * HBAR),
        lambda_d: pp.collision_mod_depth * omega_sw / 4.0,
        nbar_m: 0.0,
        nbar_d: 0.0,
        nbar_ph: 0.0,
    };
    model.validate()?;

    let weak_interaction_ratio = u0 * mean_photons / omega_r;
    let detuning_resonance_gap = (delta0 - pp.mirror_freq).abs() / pp.mirror_freq;
    let bogoliubov_resonance_gap = (omega_d - pp.mirror_freq).abs() / pp.mirror_freq;
    let sideband_ratio = pp.mirror_freq / pp.cavity_decay;
    let mut warnings = Vec::new();
    if weak_interaction_ratio > 10.0 {
        warnings.push(format!(
            "weak-interaction window exceeded: U0*<n> = {weak_interaction_ratio:.2} recoil \
             frequencies (> 10); two-mode condensate truncation unreliable"
        ));
    }
    if detuning_resonance_gap > 0.1 {
        warnings.push(format!(
            "effective detuning misses the mechanical resonance by {:.1}%",
            100.0 * detuning_resonance_gap
        ));
    }
    if bogoliubov_resonance_gap > 0.1 {
        warnings.push(format!(
            "Bogoliubov frequency misses the mechanical resonance by {:.1}%",
            100.0 * bogoliubov_resonance_gap
        ));
    }
    if sideband_ratio < 10.0 {
        warnings.push(format!(
            "sideband resolution omega_m/kappa = {sideband_ratio:.2} below 10; \
             rotating-wave description degrades"
        ));
    }

    Ok(DerivedRates {
        model,
        x_zp,
        g0,
        u0,
        g0_bec,
        omega_r,
        omega_sw,
        omega_d,
        omega_m: pp.mirror_freq,
        stark_shift,
        delta0,
        drive_rate,
        mean_photons,
        diagnostics: Diagnostics {
            weak_interaction_ratio,
            detuning_resonance_gap,
            bogoliubov_resonance_gap,
            sideband_ratio,
            warnings,
        },
    })
}

/// Scattering length that brings the Bogoliubov mode onto the mechanical
/// resonance, inverting ω_d(a_s) = 4ω_R + ω_sw(a_s) = ω_m.
///
/// ω_sw cannot be negative, so a mechanical frequency below the free-recoil
/// floor 4ω_R is unreachable; exactly at the floor the answer is a_s = 0.
pub fn resonance_tuning(pp: &PhysicalParams) -> Result<f64> {
    pp.validate()?;
    let k0 = pp.laser_freq / SPEED_OF_LIGHT;
    let omega_r = HBAR * k0 * k0 / (2.0 * pp.atom_mass);
    let needed_sw = pp.mirror_freq - 4.0 * omega_r;
    if needed_sw < 0.0 {
        return Err(Error::Infeasible(format!(
            "mechanical frequency {:.4e} rad/s lies below the recoil floor 4*omega_R = {:.4e} \
             rad/s; no scattering length can reach resonance",
            pp.mirror_freq,
            4.0 * omega_r
        )));
    }
    Ok(
        needed_sw * pp.atom_mass * pp.cavity_length * pp.mode_waist * pp.mode_waist
            / (8.0 * std::f64::consts::PI * HBAR * pp.atom_number),
    )
}
