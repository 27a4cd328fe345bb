//! Steady-state simulator for parametric photon and phonon generation in a
//! driven optomechanical cavity hybridized with the Bogoliubov mode of an
//! intracavity Bose-Einstein condensate.
//!
//! The system is three bosonic modes — cavity field `a`, mirror phonon `b`,
//! condensate Bogoliubov phonon `d` — with beam-splitter couplings `g`
//! (mirror) and `G` (condensate) to the cavity and degenerate parametric
//! drives `lambda_m`, `lambda_d` on the two phononic channels. Everything is
//! Gaussian: the state is fully described by a 6x6 quadrature covariance
//! matrix whose steady state solves the Lyapunov equation `A V + V Aᵀ = -D`.
//!
//! Module map:
//! - [`model`] — parameters, drift/diffusion assembly, occupation observables
//! - [`lyapunov`] — steady-state solver, covariance ODE, RWA validation
//! - [`spectral`] — self-energies, induced gain, damping/cooperativity report,
//!   stability boundary search
//! - [`calibration`] — SI laboratory parameters to dimensionless rates
//! - [`sweep`] — parameter sweeps, figure presets, CSV/SVG emission
//! - [`cli`] — command-line front end used by the `dce` binary

pub mod calibration;
pub mod cli;
pub mod lyapunov;
pub mod model;
pub mod spectral;
pub mod sweep;

pub use model::{
    build_diffusion, build_drift, collective_mode_occupation, occupations, symplectic_eigenvalues,
    CovarianceMatrix, DiffusionMatrix, DriftMatrix, ModelParams, Occupations,
};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter failed its domain invariant.
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    /// The drift matrix is not Hurwitz-stable; no steady covariance exists.
    #[error("drift is unstable (max Re eigenvalue = {max_re_eig:.3e})")]
    Unstable { max_re_eig: f64 },
    /// The drift sits on the stability boundary; the Lyapunov solve is singular.
    #[error("drift is marginally stable (max Re eigenvalue = {max_re_eig:.3e})")]
    MarginalStability { max_re_eig: f64 },
    /// A covariance matrix violates the symplectic uncertainty bound.
    #[error("covariance is unphysical (min symplectic eigenvalue = {min_nu:.6e} < 1/2)")]
    NonPhysical { min_nu: f64 },
    /// A spectral kernel was evaluated at (numerically) a pole.
    #[error("pole in spectral kernel {kernel} at omega = {omega:.6e}")]
    Pole { kernel: &'static str, omega: f64 },
    /// The coherent/dissipative classification has no support on the band.
    #[error("indeterminate regime: {0}")]
    IndeterminateRegime(String),
    /// Bisection could not bracket a stability boundary.
    #[error("no stability boundary found below {limit:.6e} for channel {channel}")]
    BoundaryNotFound { channel: &'static str, limit: f64 },
    /// A requested operating point cannot be reached by any parameter value.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// Time integration rejected the step size.
    #[error("step size dt = {dt:.3e} rejected: local error estimate {estimate:.3e} exceeds {tolerance:.3e}")]
    StepSizeRejected {
        dt: f64,
        estimate: f64,
        tolerance: f64,
    },
    /// The stroboscopic cycle average did not settle.
    #[error("stroboscopic average not converged after {cycles} cycles (projected residual {residual:.3e})")]
    NotConverged { cycles: usize, residual: f64 },
    /// A long-running integration was cancelled cooperatively.
    #[error("integration cancelled")]
    Cancelled,
    /// Configuration document problems (missing/conflicting fields, bad JSON).
    #[error("config error: {0}")]
    Config(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
