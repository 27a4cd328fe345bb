//! System parameters and the linearized quadrature dynamics.
//!
//! Quadratures are X = (o + o†)/√2, P = (o − o†)/(i√2), stacked as
//! u = (X_a, P_a, X_b, P_b, X_d, P_d) for the cavity mode a, the mirror
//! phonon mode b and the condensate Bogoliubov mode d. Vacuum variance is
//! 1/2 per quadrature, so a mode's occupation is n = (⟨X²⟩ + ⟨P²⟩ − 1)/2.
//!
//! On resonance and after the rotating-wave approximation the fluctuation
//! dynamics are du = A u dt + noise with the time-independent drift A
//! assembled by [`build_drift`] and the diagonal diffusion matrix assembled
//! by [`build_diffusion`].

use crate::{Error, Result};
use nalgebra::{Matrix2x6, Matrix6, Vector6};
use serde::{Deserialize, Serialize};

/// 6x6 drift matrix of the linearized quadrature dynamics.
pub type DriftMatrix = Matrix6<f64>;
/// 6x6 diagonal diffusion matrix of the input-noise correlators.
pub type DiffusionMatrix = Matrix6<f64>;
/// 6x6 symmetric quadrature covariance, V_ij = ⟨u_i u_j + u_j u_i⟩/2.
pub type CovarianceMatrix = Matrix6<f64>;

/// Dimensionless rates of one system instance, in units of the cavity
/// linewidth kappa (kappa = 1 after [`ModelParams::normalized`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Cavity amplitude decay rate (the reference unit).
    #[serde(default = "one")]
    pub kappa: f64,
    /// Mirror phonon damping rate.
    pub gamma_m: f64,
    /// Bogoliubov phonon damping rate.
    pub gamma_d: f64,
    /// Enhanced mirror-cavity coupling g.
    #[serde(default)]
    pub g: f64,
    /// Enhanced condensate-cavity coupling G.
    #[serde(default, alias = "G")]
    pub g_bec: f64,
    /// Mechanical parametric modulation amplitude (real; phase absorbed).
    #[serde(default)]
    pub lambda_m: f64,
    /// Atomic-collision parametric modulation amplitude (real; phase absorbed).
    #[serde(default)]
    pub lambda_d: f64,
    /// Mirror bath thermal occupation.
    #[serde(default)]
    pub nbar_m: f64,
    /// Bogoliubov bath thermal occupation.
    #[serde(default)]
    pub nbar_d: f64,
    /// Photonic bath thermal occupation (≈ 0 at optical frequencies).
    #[serde(default)]
    pub nbar_ph: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            gamma_m: 1e-4,
            gamma_d: 1e-4,
            g: 0.0,
            g_bec: 0.0,
            lambda_m: 0.0,
            lambda_d: 0.0,
            nbar_m: 0.0,
            nbar_d: 0.0,
            nbar_ph: 0.0,
        }
    }
}

impl ModelParams {
    /// Checks the domain invariants: positive decay rates, non-negative
    /// couplings, modulations and thermal occupations, all finite.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("kappa", self.kappa),
            ("gamma_m", self.gamma_m),
            ("gamma_d", self.gamma_d),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be > 0, got {v}")));
            }
        }
        let non_negative = [
            ("g", self.g),
            ("G", self.g_bec),
            ("lambda_m", self.lambda_m),
            ("lambda_d", self.lambda_d),
            ("nbar_m", self.nbar_m),
            ("nbar_d", self.nbar_d),
            ("nbar_ph", self.nbar_ph),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Returns the same system expressed in units of kappa. Idempotent:
    /// normalizing twice gives the same values.
    pub fn normalized(&self) -> Self {
        let k = self.kappa;
        Self {
            kappa: 1.0,
            gamma_m: self.gamma_m / k,
            gamma_d: self.gamma_d / k,
            g: self.g / k,
            g_bec: self.g_bec / k,
            lambda_m: self.lambda_m / k,
            lambda_d: self.lambda_d / k,
            ..self.clone()
        }
    }

    /// Modulation parameter ξ_m = 2 λ_m / γ_m of the mechanical channel.
    pub fn xi_m(&self) -> f64 {
        2.0 * self.lambda_m / self.gamma_m
    }

    /// Modulation parameter ξ_d = 2 λ_d / γ_d of the atomic channel.
    pub fn xi_d(&self) -> f64 {
        2.0 * self.lambda_d / self.gamma_d
    }
}

/// Mean occupations of the three modes in the order (cavity photon,
/// mirror phonon, Bogoliubov phonon).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Occupations {
    pub photon: f64,
    pub phonon_m: f64,
    pub phonon_d: f64,
}

impl Occupations {
    /// Occupations as an array in quadrature-block order.
    pub fn as_array(&self) -> [f64; 3] {
        [self.photon, self.phonon_m, self.phonon_d]
    }
}

/// Assembles the RWA drift matrix. All couplings enter off-diagonally with
/// the beam-splitter sign pattern; the parametric drives appear only on the
/// phononic diagonals as λ − γ/2 (amplified quadrature) and −(λ + γ/2)
/// (squeezed quadrature).
pub fn build_drift(p: &ModelParams) -> DriftMatrix {
    let (k, gm, gd) = (p.kappa, p.gamma_m, p.gamma_d);
    let (g, gg, lm, ld) = (p.g, p.g_bec, p.lambda_m, p.lambda_d);
    let mut a = Matrix6::zeros();
    a[(0, 0)] = -k / 2.0;
    a[(0, 3)] = -g;
    a[(0, 5)] = gg;
    a[(1, 1)] = -k / 2.0;
    a[(1, 2)] = g;
    a[(1, 4)] = -gg;
    a[(2, 1)] = -g;
    a[(2, 2)] = lm - gm / 2.0;
    a[(3, 0)] = g;
    a[(3, 3)] = -(lm + gm / 2.0);
    a[(4, 1)] = gg;
    a[(4, 4)] = ld - gd / 2.0;
    a[(5, 0)] = -gg;
    a[(5, 5)] = -(ld + gd / 2.0);
    a
}

/// Assembles the diagonal diffusion matrix
/// Diag[κ/2·(2n̄_ph+1), κ/2·(2n̄_ph+1), γ_m/2·(2n̄_m+1), …, γ_d/2·(2n̄_d+1), …].
pub fn build_diffusion(p: &ModelParams) -> DiffusionMatrix {
    let ph = p.kappa / 2.0 * (2.0 * p.nbar_ph + 1.0);
    let m = p.gamma_m / 2.0 * (2.0 * p.nbar_m + 1.0);
    let d = p.gamma_d / 2.0 * (2.0 * p.nbar_d + 1.0);
    Matrix6::from_diagonal(&Vector6::new(ph, ph, m, m, d, d))
}

/// Symplectic eigenvalues of a covariance matrix, ascending. Physical states
/// have all three ≥ 1/2 in this convention.
pub fn symplectic_eigenvalues(v: &CovarianceMatrix) -> [f64; 3] {
    // The eigenvalues of Ω·V come in pairs ±iν; the ν are the symplectic
    // eigenvalues. Ω is the per-mode rotation [[0, 1], [−1, 0]].
    let mut omega = Matrix6::zeros();
    for m in 0..3 {
        omega[(2 * m, 2 * m + 1)] = 1.0;
        omega[(2 * m + 1, 2 * m)] = -1.0;
    }
    let ev = (omega * v).complex_eigenvalues();
    let mut mags: Vec<f64> = ev.iter().map(|z| z.im.abs()).collect();
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
    [mags[0], mags[2], mags[4]]
}

/// Extracts (n_photon, n_phonon_m, n_phonon_d) with n = (V_XX + V_PP − 1)/2.
///
/// Rejects covariances violating the symplectic bound by more than 1e-6;
/// occupations within −1e-9 of zero (floating-point noise near vacuum) are
/// clamped to exactly zero.
pub fn occupations(v: &CovarianceMatrix) -> Result<Occupations> {
    let nu = symplectic_eigenvalues(v);
    if nu[0] < 0.5 - 1e-6 {
        return Err(Error::NonPhysical { min_nu: nu[0] });
    }
    let mut n = [0.0_f64; 3];
    for m in 0..3 {
        let raw = (v[(2 * m, 2 * m)] + v[(2 * m + 1, 2 * m + 1)] - 1.0) / 2.0;
        if raw < -1e-9 {
            return Err(Error::NonPhysical { min_nu: nu[0] });
        }
        n[m] = raw.max(0.0);
    }
    Ok(Occupations {
        photon: n[0],
        phonon_m: n[1],
        phonon_d: n[2],
    })
}

/// Occupation of the collective phononic mode B = cosh(r)·b − sinh(r)·d†
/// with squeezing parameter r = artanh(g/G), together with r itself.
///
/// Requires G > g ≥ 0; at g = 0 the collective mode reduces to the mirror
/// mode (r = 0, n_B = n_phonon_m).
pub fn collective_mode_occupation(v: &CovarianceMatrix, p: &ModelParams) -> Result<(f64, f64)> {
    if !(p.g_bec > p.g) {
        return Err(Error::InvalidParams(format!(
            "collective mode needs G > g (got g = {}, G = {})",
            p.g, p.g_bec
        )));
    }
    let r = (p.g / p.g_bec).atanh();
    let (ch, sh) = (r.cosh(), r.sinh());
    // Congruence onto (X_B, P_B); B mixes d† so the sinh sign flips between
    // the X and P rows.
    let mut s = Matrix2x6::zeros();
    s[(0, 2)] = ch;
    s[(0, 4)] = -sh;
    s[(1, 3)] = ch;
    s[(1, 5)] = sh;
    let vb = s * v * s.transpose();
    let n_b = (vb[(0, 0)] + vb[(1, 1)] - 1.0) / 2.0;
    Ok((n_b, r))
}
