//! Steady-state and time-dependent covariance dynamics.
//!
//! The steady covariance of a stable linear system solves the Lyapunov
//! equation A·V + V·Aᵀ = −D ([`solve_steady`]); out of steady state the
//! covariance obeys dV/dt = A·V + V·Aᵀ + D ([`integrate_covariance`]).
//!
//! [`build_drift_time_dependent`] assembles the full pre-rotating-wave drift,
//! with explicit mode rotations and oscillating parametric drives, and
//! [`rwa_validate`] integrates it to a stroboscopic steady cycle to measure
//! how well the rotating-wave (time-independent) description reproduces the
//! exact occupations.

use crate::model::{
    build_diffusion, build_drift, occupations, CovarianceMatrix, DiffusionMatrix, DriftMatrix,
    ModelParams, Occupations,
};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector, Matrix6};
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicBool, Ordering};

/// Largest real part over the eigenvalues of a drift matrix. Negative means
/// Hurwitz-stable.
pub fn spectral_abscissa(a: &DriftMatrix) -> f64 {
    a.complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Result of a steady-state Lyapunov solve.
#[derive(Debug, Clone)]
pub struct SteadyState {
    /// Steady covariance; `None` when the drift is unstable.
    pub v: Option<CovarianceMatrix>,
    /// Relative residual ‖A·V + V·Aᵀ + D‖ / ‖D‖ of the returned solution
    /// (0 when no solution is returned).
    pub residual: f64,
    /// Whether the drift is Hurwitz-stable.
    pub stable: bool,
    /// Spectral abscissa of the drift.
    pub max_re_eig: f64,
}

impl SteadyState {
    /// The steady covariance, or the instability as an error.
    pub fn covariance(&self) -> Result<&CovarianceMatrix> {
        self.v.as_ref().ok_or(Error::Unstable {
            max_re_eig: self.max_re_eig,
        })
    }
}

/// Drift below this spectral-abscissa magnitude counts as marginally stable;
/// the Lyapunov solve would be (near-)singular and is refused.
const MARGINAL_TOL: f64 = 1e-12;

/// Solves A·V + V·Aᵀ = −D for a square system of any size by LU on the
/// vectorized form (I⊗A + A⊗I)·vec(V) = −vec(D).
///
/// The system is at most 6x6 here, so the dense O(n⁶) solve is both cheap and
/// bit-deterministic. Errors on marginal stability; an unstable drift is
/// reported in the result rather than solved.
pub fn solve_lyapunov_dyn(a: &DMatrix<f64>, d: &DMatrix<f64>) -> Result<(Option<DMatrix<f64>>, f64)> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n);
    assert_eq!(d.shape(), (n, n));
    let max_re_eig = a
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_re_eig.abs() < MARGINAL_TOL {
        return Err(Error::MarginalStability { max_re_eig });
    }
    if max_re_eig > 0.0 {
        return Ok((None, max_re_eig));
    }
    let id = DMatrix::<f64>::identity(n, n);
    let m = id.kronecker(a) + a.kronecker(&id);
    let rhs = DVector::from_column_slice(d.as_slice()) * -1.0;
    let x = m
        .lu()
        .solve(&rhs)
        .ok_or(Error::MarginalStability { max_re_eig })?;
    let v = DMatrix::from_column_slice(n, n, x.as_slice());
    // The exact solution is symmetric; enforce it against round-off.
    let v = (&v + v.transpose()) * 0.5;
    Ok((Some(v), max_re_eig))
}

/// Solves the steady-state Lyapunov equation for the 6x6 quadrature system.
///
/// Stability is diagnosed, never assumed: an unstable drift yields
/// `stable = false` and no covariance, while a drift within 1e-12 of the
/// boundary is refused as marginal.
pub fn solve_steady(a: &DriftMatrix, d: &DiffusionMatrix) -> Result<SteadyState> {
    let ad = DMatrix::from_column_slice(6, 6, a.as_slice());
    let dd = DMatrix::from_column_slice(6, 6, d.as_slice());
    let (v, max_re_eig) = solve_lyapunov_dyn(&ad, &dd)?;
    match v {
        Some(v) => {
            let v6 = Matrix6::from_column_slice(v.as_slice());
            let resid = (a * v6 + v6 * a.transpose() + d).norm();
            let scale = d.norm();
            let residual = if scale > 0.0 { resid / scale } else { resid };
            Ok(SteadyState {
                v: Some(v6),
                residual,
                stable: true,
                max_re_eig,
            })
        }
        None => Ok(SteadyState {
            v: None,
            residual: 0.0,
            stable: false,
            max_re_eig,
        }),
    }
}

/// Convenience wrapper: steady state of a parameter set, straight from the
/// rotating-wave drift and diffusion.
pub fn steady_state_of(p: &ModelParams) -> Result<SteadyState> {
    p.validate()?;
    solve_steady(&build_drift(p), &build_diffusion(p))
}

/// One classical Runge-Kutta step of dV/dt = A·V + V·Aᵀ + D.
fn rk4_step(a: &DriftMatrix, d: &DiffusionMatrix, v: &CovarianceMatrix, dt: f64) -> CovarianceMatrix {
    let f = |v: &CovarianceMatrix| a * v + v * a.transpose() + d;
    let k1 = f(v);
    let k2 = f(&(v + k1 * (dt / 2.0)));
    let k3 = f(&(v + k2 * (dt / 2.0)));
    let k4 = f(&(v + k3 * dt));
    let next = v + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    (next + next.transpose()) * 0.5
}

/// Per-step tolerance for the Richardson error estimate in
/// [`integrate_covariance`], relative to the covariance magnitude. This is a
/// guard against grossly coarse steps (where the fixed-step method stops
/// tracking the dynamics at all), not a fine accuracy dial — tight targets
/// are reached by choosing dt well below 0.1/|max Re eigenvalue|.
const STEP_TOL: f64 = 1e-6;

/// Propagates dV/dt = A·V + V·Aᵀ + D from `v0` over `t_final` with fixed
/// step `dt` (classical 4th-order Runge-Kutta, symmetry enforced each step).
///
/// Every step is advanced with two half-steps and cross-checked against a
/// single full step; if the Richardson error estimate exceeds tolerance the
/// step size is rejected as too coarse for the requested accuracy.
pub fn integrate_covariance(
    a: &DriftMatrix,
    d: &DiffusionMatrix,
    v0: &CovarianceMatrix,
    t_final: f64,
    dt: f64,
) -> Result<CovarianceMatrix> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParams(format!("dt must be > 0, got {dt}")));
    }
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::InvalidParams(format!(
            "t_final must be >= 0, got {t_final}"
        )));
    }
    let mut v = *v0;
    let mut t = 0.0;
    while t < t_final {
        let h = dt.min(t_final - t);
        let coarse = rk4_step(a, d, &v, h);
        let fine = rk4_step(a, d, &rk4_step(a, d, &v, h / 2.0), h / 2.0);
        // Classical Richardson factor for a 4th-order method: the two-half-step
        // result is in error by (coarse − fine)/15.
        let estimate = (coarse - fine).amax() / 15.0;
        let tolerance = STEP_TOL * (1.0 + v.amax());
        if estimate > tolerance {
            return Err(Error::StepSizeRejected {
                dt: h,
                estimate,
                tolerance,
            });
        }
        v = fine;
        t += h;
    }
    Ok(v)
}

/// Full (pre-rotating-wave) description: the dimensionless rates plus the
/// three mode frequencies that the rotating-wave picture removes.
///
/// Resonant operation means `delta0 ≈ omega_m ≈ omega_d`; the approximation
/// is controlled in the sideband-resolution ratio ω_m/κ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeDependentParams {
    pub base: ModelParams,
    /// Effective cavity detuning in the drive-rotating frame.
    pub delta0: f64,
    /// Mirror mechanical frequency.
    pub omega_m: f64,
    /// Bogoliubov mode frequency.
    pub omega_d: f64,
}

impl TimeDependentParams {
    /// Checks base parameters and that all three frequencies are positive.
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        for (name, v) in [
            ("delta0", self.delta0),
            ("omega_m", self.omega_m),
            ("omega_d", self.omega_d),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(())
    }

    /// True in the resolved-sideband (good-cavity) regime ω_m/κ ≥ 10 where
    /// the rotating-wave description is expected to hold.
    pub fn good_cavity(&self) -> bool {
        self.omega_m / self.base.kappa >= 10.0
    }
}

/// Assembles the time-dependent drift of the full linearized dynamics at
/// time `t`: damping plus rotation blocks [[−rate/2, ω], [−ω, −rate/2]] on
/// each mode's diagonal, position couplings 2g, 2G on the momentum rows, and
/// parametric drive blocks λ·[[cos 2ωt, −sin 2ωt], [−sin 2ωt, −cos 2ωt]] on
/// the modulated phononic modes.
///
/// At t = 0 the drive block is λ·Diag(1, −1), the same pattern the
/// rotating-wave drift keeps for all times.
pub fn build_drift_time_dependent(tp: &TimeDependentParams, t: f64) -> DriftMatrix {
    let p = &tp.base;
    let mut a = Matrix6::zeros();
    let blocks = [
        (0, tp.delta0, p.kappa),
        (1, tp.omega_m, p.gamma_m),
        (2, tp.omega_d, p.gamma_d),
    ];
    for (m, w, rate) in blocks {
        a[(2 * m, 2 * m)] = -rate / 2.0;
        a[(2 * m, 2 * m + 1)] = w;
        a[(2 * m + 1, 2 * m)] = -w;
        a[(2 * m + 1, 2 * m + 1)] = -rate / 2.0;
    }
    // Position-position couplings act on the momentum rows only; both
    // co- and counter-rotating parts are kept.
    a[(1, 2)] = 2.0 * p.g;
    a[(1, 4)] = -2.0 * p.g_bec;
    a[(3, 0)] = 2.0 * p.g;
    a[(5, 0)] = -2.0 * p.g_bec;
    for (m, lam, w) in [(1, p.lambda_m, tp.omega_m), (2, p.lambda_d, tp.omega_d)] {
        let c = lam * (2.0 * w * t).cos();
        let s = lam * (2.0 * w * t).sin();
        a[(2 * m, 2 * m)] += c;
        a[(2 * m, 2 * m + 1)] -= s;
        a[(2 * m + 1, 2 * m)] -= s;
        a[(2 * m + 1, 2 * m + 1)] -= c;
    }
    a
}

/// Block-diagonal frame rotation exp(J·t) with per-mode generator
/// [[0, ω], [−ω, 0]]; its columns co-rotate with the free evolution.
fn frame_rotation(tp: &TimeDependentParams, t: f64) -> Matrix6<f64> {
    let mut r = Matrix6::zeros();
    for (m, w) in [(0, tp.delta0), (1, tp.omega_m), (2, tp.omega_d)] {
        let (s, c) = (w * t).sin_cos();
        r[(2 * m, 2 * m)] = c;
        r[(2 * m, 2 * m + 1)] = s;
        r[(2 * m + 1, 2 * m)] = -s;
        r[(2 * m + 1, 2 * m + 1)] = c;
    }
    r
}

/// Free-rotation generator J subtracted when passing to the co-rotating frame.
fn frame_generator(tp: &TimeDependentParams) -> Matrix6<f64> {
    let mut j = Matrix6::zeros();
    for (m, w) in [(0, tp.delta0), (1, tp.omega_m), (2, tp.omega_d)] {
        j[(2 * m, 2 * m + 1)] = w;
        j[(2 * m + 1, 2 * m)] = -w;
    }
    j
}

/// Relative occupation change between successive cycle averages below which
/// the stroboscopic cycle counts as settled.
const CYCLE_TOL: f64 = 1e-7;

/// Occupation floor below which the rotating-wave value is treated as zero
/// and the gap for that mode is measured absolutely instead of relatively.
const GAP_FLOOR: f64 = 1e-9;

/// Integrates the full time-dependent dynamics to a stroboscopic steady
/// cycle and compares period-averaged occupations against the steady
/// rotating-wave occupations.
///
/// Returns `(occ_time_avg, occ_rwa, relative_gap)` where the gap is the
/// worst relative deviation over the modes with non-negligible rotating-wave
/// occupation. Raw covariances of the two pictures differ by time-dependent
/// local rotations; occupations are invariant under those rotations, so they
/// are the quantity compared.
///
/// The integration runs in the co-rotating frame (drift Rᵀ(t)·(A(t) − J)·R(t),
/// diffusion unchanged since it is proportional to identity per mode), which
/// removes the fast frequencies from the propagated matrix and leaves the
/// 2ω drive oscillation as the fastest scale; `samples_per_cycle` fixes the
/// Runge-Kutta resolution of one drive period π/ω_m.
pub fn rwa_validate(
    tp: &TimeDependentParams,
    cycles: usize,
    samples_per_cycle: usize,
) -> Result<(Occupations, Occupations, f64)> {
    rwa_validate_with_cancel(tp, cycles, samples_per_cycle, None)
}

/// [`rwa_validate`] with a cooperative cancellation flag checked once per
/// cycle; raising the flag aborts with [`Error::Cancelled`].
pub fn rwa_validate_with_cancel(
    tp: &TimeDependentParams,
    cycles: usize,
    samples_per_cycle: usize,
    cancel: Option<&AtomicBool>,
) -> Result<(Occupations, Occupations, f64)> {
    tp.validate()?;
    if cycles < 2 || samples_per_cycle < 4 {
        return Err(Error::InvalidParams(format!(
            "need cycles >= 2 and samples_per_cycle >= 4, got {cycles} and {samples_per_cycle}"
        )));
    }
    let p = &tp.base;
    let ss = solve_steady(&build_drift(p), &build_diffusion(p))?;
    let occ_rwa = occupations(ss.covariance()?)?;

    let d = build_diffusion(p);
    let j = frame_generator(tp);
    let period = std::f64::consts::PI / tp.omega_m;
    let dt = period / samples_per_cycle as f64;
    // Co-rotating drift at time t.
    let drift = |t: f64| {
        let r = frame_rotation(tp, t);
        r.transpose() * (build_drift_time_dependent(tp, t) - j) * r
    };
    let f = |t: f64, v: &Matrix6<f64>| {
        let a = drift(t);
        a * v + v * a.transpose() + d
    };

    let mut v = Matrix6::identity() * 0.5; // vacuum initial state
    let mut t = 0.0;
    let mut prev: Option<[f64; 3]> = None;
    let mut last_residual = f64::INFINITY;
    for _ in 0..cycles {
        if let Some(flag) = cancel {
            if flag.load(Ordering::Relaxed) {
                return Err(Error::Cancelled);
            }
        }
        // One drive period, accumulating the equally-spaced occupation
        // samples (exact period average for a smooth periodic signal).
        let mut acc = [0.0_f64; 3];
        for _ in 0..samples_per_cycle {
            for m in 0..3 {
                acc[m] += (v[(2 * m, 2 * m)] + v[(2 * m + 1, 2 * m + 1)] - 1.0) / 2.0;
            }
            let k1 = f(t, &v);
            let k2 = f(t + dt / 2.0, &(v + k1 * (dt / 2.0)));
            let k3 = f(t + dt / 2.0, &(v + k2 * (dt / 2.0)));
            let k4 = f(t + dt, &(v + k3 * dt));
            v += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
            v = (v + v.transpose()) * 0.5;
            t += dt;
        }
        let avg = acc.map(|x| x / samples_per_cycle as f64);
        if let Some(prev) = prev {
            last_residual = (0..3)
                .map(|m| (avg[m] - prev[m]).abs() / avg[m].abs().max(1e-12))
                .fold(0.0, f64::max);
            if last_residual < CYCLE_TOL {
                let td = Occupations {
                    photon: avg[0].max(0.0),
                    phonon_m: avg[1].max(0.0),
                    phonon_d: avg[2].max(0.0),
                };
                let rwa = occ_rwa.as_array();
                let gap = (0..3)
                    .map(|m| {
                        let diff = (td.as_array()[m] - rwa[m]).abs();
                        if rwa[m] > GAP_FLOOR {
                            diff / rwa[m]
                        } else {
                            diff
                        }
                    })
                    .fold(0.0, f64::max);
                return Ok((td, occ_rwa, gap));
            }
        }
        prev = Some(avg);
    }
    Err(Error::NotConverged {
        cycles,
        residual: last_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Lyapunov oracle with hand-assembled vectorization: loops write the
    /// blocks of I⊗A + A⊗I directly from the index identity
    /// vec(A·V + V·Aᵀ)[6c+r] = Σ A[r,k]·V[k,c] + V[r,k]·A[c,k].
    fn lyapunov_oracle(a: &Matrix6<f64>, d: &Matrix6<f64>) -> Matrix6<f64> {
        let mut m = DMatrix::<f64>::zeros(36, 36);
        for r in 0..6 {
            for c in 0..6 {
                for k in 0..6 {
                    m[(6 * c + r, 6 * c + k)] += a[(r, k)];
                    m[(6 * c + r, 6 * k + r)] += a[(c, k)];
                }
            }
        }
        let rhs = DVector::from_iterator(36, d.as_slice().iter().map(|x| -x));
        let x = m.lu().solve(&rhs).unwrap();
        Matrix6::from_column_slice(x.as_slice())
    }

    /// Deterministic pseudo-random stable drift / PSD diffusion pairs.
    fn random_stable_system(seed: u64) -> (Matrix6<f64>, Matrix6<f64>) {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).max(1);
        let mut next = || {
            // xorshift64*; plenty for test fixtures.
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            (state.wrapping_mul(0x2545f4914f6cdd1d) >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let raw = Matrix6::from_fn(|_, _| next());
        let shift = spectral_abscissa(&raw) + 0.5;
        let a = raw - Matrix6::identity() * shift;
        let n = Matrix6::from_fn(|_, _| next());
        let d = n * n.transpose() + Matrix6::identity() * 0.1;
        (a, d)
    }

    #[test]
    fn scalar_lyapunov_balance() {
        let a = DMatrix::from_element(1, 1, -1.0);
        let d = DMatrix::from_element(1, 1, 2.0);
        let (v, mre) = solve_lyapunov_dyn(&a, &d).unwrap();
        assert_eq!(v.unwrap()[(0, 0)], 1.0);
        assert_eq!(mre, -1.0);
    }

    #[test]
    fn isotropic_damping_gives_identity_covariance() {
        let a = Matrix6::identity() * -0.5;
        let d = Matrix6::identity();
        let ss = solve_steady(&a, &d).unwrap();
        assert!(ss.stable);
        assert!((ss.v.unwrap() - Matrix6::identity()).amax() < 1e-14);
        assert!(ss.residual <= 1e-10);
    }

    #[test]
    fn random_systems_match_hand_assembled_oracle() {
        for seed in 1..=20u64 {
            let (a, d) = random_stable_system(seed);
            let ss = solve_steady(&a, &d).unwrap();
            let v = ss.v.unwrap();
            assert!(ss.stable);
            assert!(ss.residual <= 1e-10, "residual {} at seed {seed}", ss.residual);
            let oracle = lyapunov_oracle(&a, &d);
            assert!(
                (v - oracle).amax() <= 1e-12 * oracle.amax().max(1.0),
                "solver/oracle mismatch {} at seed {seed}",
                (v - oracle).amax()
            );
        }
    }

    #[test]
    fn unstable_drift_reports_without_covariance() {
        let mut a = Matrix6::identity() * -0.5;
        a[(2, 2)] = 0.25;
        let ss = solve_steady(&a, &Matrix6::identity()).unwrap();
        assert!(!ss.stable);
        assert!(ss.v.is_none());
        assert_relative_eq!(ss.max_re_eig, 0.25, max_relative = 1e-12);
        assert!(matches!(ss.covariance(), Err(Error::Unstable { .. })));
    }

    #[test]
    fn marginal_drift_is_refused() {
        let mut a = Matrix6::identity() * -0.5;
        a[(4, 4)] = 0.0;
        let err = solve_steady(&a, &Matrix6::identity()).unwrap_err();
        assert!(matches!(err, Error::MarginalStability { .. }));
    }

    #[test]
    fn steady_covariance_is_a_fixed_point_of_the_ode() {
        let (a, d) = random_stable_system(7);
        let v0 = solve_steady(&a, &d).unwrap().v.unwrap();
        let v = integrate_covariance(&a, &d, &v0, 3.0, 0.01).unwrap();
        assert!((v - v0).amax() < 1e-9);
    }

    #[test]
    fn relaxation_matches_closed_form() {
        // A = −I/2, D = I: V(t) = V_ss + e^{At}(V0 − V_ss)e^{Aᵀt} = I + e^{−t}·I.
        let a = Matrix6::identity() * -0.5;
        let d = Matrix6::identity();
        let v0 = Matrix6::identity() * 2.0;
        for t in [0.25, 1.0, 2.5] {
            let v = integrate_covariance(&a, &d, &v0, t, 1.0 / 64.0).unwrap();
            let expect = Matrix6::identity() * (1.0 + (-t).exp());
            assert!((v - expect).amax() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn long_integration_converges_to_lyapunov_solution() {
        let (a, d) = random_stable_system(11);
        let ss = solve_steady(&a, &d).unwrap();
        let t_final = 20.0 / ss.max_re_eig.abs();
        let v =
            integrate_covariance(&a, &d, &(Matrix6::identity() * 0.5), t_final, 0.005).unwrap();
        assert!((v - ss.v.unwrap()).amax() < 1e-8);
    }

    #[test]
    fn coarse_step_is_rejected() {
        let (a, d) = random_stable_system(3);
        // Eigenvalues are O(1); dt = 3 is far beyond the accuracy (and even
        // stability) limit of the fixed-step integrator.
        let err = integrate_covariance(&a, &d, &(Matrix6::identity() * 0.5), 30.0, 3.0).unwrap_err();
        assert!(matches!(err, Error::StepSizeRejected { .. }));
    }

    fn mirror_only_tp(omega_over_kappa: f64) -> TimeDependentParams {
        TimeDependentParams {
            base: ModelParams {
                gamma_m: 0.1,
                gamma_d: 0.1,
                g: 0.2,
                lambda_m: 0.025, // ξ_m = 0.5
                ..Default::default()
            },
            delta0: omega_over_kappa,
            omega_m: omega_over_kappa,
            omega_d: omega_over_kappa,
        }
    }

    #[test]
    fn time_dependent_drift_at_phase_zero_matches_static_modulation_pattern() {
        let tp = mirror_only_tp(25.0);
        let without = TimeDependentParams {
            base: ModelParams {
                lambda_m: 0.0,
                ..tp.base.clone()
            },
            ..tp.clone()
        };
        let block = build_drift_time_dependent(&tp, 0.0) - build_drift_time_dependent(&without, 0.0);
        let mut expect = Matrix6::zeros();
        expect[(2, 2)] = tp.base.lambda_m;
        expect[(3, 3)] = -tp.base.lambda_m;
        assert!((block - expect).amax() < 1e-15);
    }

    #[test]
    fn modulation_block_has_drive_period() {
        let tp = mirror_only_tp(25.0);
        let without = TimeDependentParams {
            base: ModelParams {
                lambda_m: 0.0,
                ..tp.base.clone()
            },
            ..tp.clone()
        };
        let period = std::f64::consts::PI / tp.omega_m;
        for t in [0.0, 0.013, 0.4 * period] {
            let b1 = build_drift_time_dependent(&tp, t) - build_drift_time_dependent(&without, t);
            let b2 = build_drift_time_dependent(&tp, t + period)
                - build_drift_time_dependent(&without, t + period);
            assert!((b1 - b2).amax() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn free_evolution_drift_is_constant() {
        let tp = TimeDependentParams {
            base: ModelParams {
                gamma_m: 1e-3,
                gamma_d: 1e-3,
                ..Default::default()
            },
            delta0: 30.0,
            omega_m: 30.0,
            omega_d: 30.0,
        };
        let a0 = build_drift_time_dependent(&tp, 0.0);
        for t in [0.1, 1.7, 9.3] {
            assert_eq!(build_drift_time_dependent(&tp, t), a0);
        }
        // Damping plus rotation blocks only: off-block entries vanish.
        for r in 0..6 {
            for c in 0..6 {
                if r / 2 != c / 2 {
                    assert_eq!(a0[(r, c)], 0.0);
                }
            }
        }
    }

    #[test]
    fn rwa_gap_vanishes_for_free_vacuum_evolution() {
        let tp = TimeDependentParams {
            base: ModelParams {
                gamma_m: 1e-2,
                gamma_d: 1e-2,
                ..Default::default()
            },
            delta0: 20.0,
            omega_m: 20.0,
            omega_d: 20.0,
        };
        let (td, rwa, gap) = rwa_validate(&tp, 50, 16).unwrap();
        assert_eq!(td.as_array(), [0.0, 0.0, 0.0]);
        assert_eq!(rwa.as_array(), [0.0, 0.0, 0.0]);
        assert_eq!(gap, 0.0);
    }

    #[test]
    fn rwa_gap_small_and_shrinking_with_sideband_resolution() {
        let (_, rwa25, gap25) = rwa_validate(&mirror_only_tp(25.0), 2000, 32).unwrap();
        let (_, _, gap50) = rwa_validate(&mirror_only_tp(50.0), 2000, 32).unwrap();
        // The modulated-mirror occupations are reproduced to well under 10%,
        // and the residual gap shrinks as the sideband resolution doubles.
        assert!(rwa25.phonon_m > 0.02, "phonon occupation {}", rwa25.phonon_m);
        assert!(gap25 <= 0.10, "gap at ratio 25: {gap25}");
        assert!(gap50 < gap25, "gap50 {gap50} vs gap25 {gap25}");
    }

    #[test]
    fn rwa_validate_reports_nonconvergence() {
        let err = rwa_validate(&mirror_only_tp(25.0), 5, 16).unwrap_err();
        assert!(matches!(err, Error::NotConverged { .. }));
    }

    #[test]
    fn rwa_validate_honors_cancellation() {
        let flag = AtomicBool::new(true);
        let err =
            rwa_validate_with_cancel(&mirror_only_tp(25.0), 2000, 32, Some(&flag)).unwrap_err();
        assert!(matches!(err, Error::Cancelled));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        /// Steady covariances of physical parameter sets stay physical:
        /// symplectic eigenvalues respect the vacuum bound.
        #[test]
        fn steady_state_is_physical(
            g in 0.0..0.2f64,
            gg in 0.0..0.2f64,
            xi_m in 0.0..0.9f64,
            nbar in 0.0..3.0f64,
        ) {
            let gamma = 1e-3;
            let p = ModelParams {
                gamma_m: gamma,
                gamma_d: gamma,
                g,
                g_bec: gg,
                lambda_m: xi_m * gamma / 2.0,
                nbar_m: nbar,
                ..Default::default()
            };
            let ss = steady_state_of(&p).unwrap();
            if ss.stable {
                let nu = crate::model::symplectic_eigenvalues(&ss.v.unwrap());
                prop_assert!(nu[0] >= 0.5 - 1e-9, "min symplectic {}", nu[0]);
            }
        }

        /// The integrator agrees with the matrix-exponential closed form
        /// V(t) = V_ss + e^{At}(V0 − V_ss)e^{Aᵀt} on normal drifts.
        #[test]
        fn integration_matches_exponential_form(rate in 0.2..1.5f64, t in 0.1..3.0f64) {
            let a = Matrix6::identity() * (-rate / 2.0);
            let d = Matrix6::identity();
            let v0 = Matrix6::identity() * 0.5;
            let vss = 1.0 / rate;
            let expect = Matrix6::identity() * (vss + (-rate * t).exp() * (0.5 - vss));
            let v = integrate_covariance(&a, &d, &v0, t, 0.01).unwrap();
            prop_assert!((v - expect).amax() < 1e-8);
        }
    }
}
