//! Acceptance gate: one test per criterion, each printing its own
//! pass/fail line. Numeric tolerances are pinned next to the asserts.

mod common;

use common::{lyapunov_oracle, random_stable_system, SplitMix64};
use dce_sim::lyapunov::{rwa_validate, solve_steady, TimeDependentParams};
use dce_sim::spectral::{find_stability_boundary, regime_report, spectral_point, Channel};
use dce_sim::sweep::{preset, run_preset, SweepTable, PRESET_NAMES};
use dce_sim::{occupations, symplectic_eigenvalues, ModelParams};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

/// Preset sweeps shared between criteria; computed once per process.
fn preset_table(name: &str) -> Arc<SweepTable> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<SweepTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(t) = guard.get(name) {
        return t.clone();
    }
    let t = Arc::new(run_preset(name).expect("preset sweep should run"));
    guard.insert(name.to_string(), t.clone());
    t
}

fn column(table: &SweepTable, get: fn(&dce_sim::sweep::SweepRow) -> Option<f64>) -> Vec<f64> {
    table
        .rows
        .iter()
        .map(|r| get(r).expect("row should carry occupations"))
        .collect()
}

/// Criterion 1 — Lyapunov correctness: 1000 randomized stable systems,
/// residual ≤ 1e-10·‖D‖ and entrywise agreement ≤ 1e-12 with an
/// independently assembled and solved vectorization oracle, within 10 s.
#[test]
fn acceptance_01_lyapunov_residual_and_oracle_agreement() {
    let start = Instant::now();
    let mut rng = SplitMix64(0x0acc_e55_0001);
    for case in 0..1000 {
        let (a, d) = random_stable_system(&mut rng);
        let ss = solve_steady(&a, &d).expect("generated system is stable");
        assert!(ss.stable, "case {case}: generated system reported unstable");
        assert!(
            ss.residual <= 1e-10,
            "case {case}: residual {} exceeds 1e-10 of ‖D‖",
            ss.residual
        );
        let v = ss.covariance().unwrap();
        let gap = (v - lyapunov_oracle(&a, &d)).amax();
        assert!(gap <= 1e-12, "case {case}: oracle disagreement {gap:.3e}");
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(10),
        "1000 solves took {elapsed:?}, budget 10 s"
    );
}

/// Criterion 2 — vacuum baseline: no modulation, no thermal input, stable
/// couplings → occupations below 1e-12.
#[test]
fn acceptance_02_vacuum_baseline() {
    let p = ModelParams {
        gamma_m: 1e-4,
        gamma_d: 1e-4,
        g: 0.05,
        g_bec: 0.07,
        ..Default::default()
    };
    let ss = dce_sim::lyapunov::steady_state_of(&p).unwrap();
    let n = occupations(ss.covariance().unwrap()).unwrap();
    for (name, v) in [
        ("photon", n.photon),
        ("phonon_m", n.phonon_m),
        ("phonon_d", n.phonon_d),
    ] {
        assert!(v < 1e-12, "{name} occupation {v:.3e} above vacuum floor");
    }
}

/// Criterion 3 — decoupled parametric amplifier closed form: ξ = 0.5 →
/// n = ξ²/(2(1−ξ²)) = 1/6 within 1e-8.
#[test]
fn acceptance_03_decoupled_dpa_closed_form() {
    let p = ModelParams {
        gamma_m: 1e-4,
        gamma_d: 1e-4,
        lambda_m: 0.25e-4, // ξ_m = 0.5
        ..Default::default()
    };
    let ss = dce_sim::lyapunov::steady_state_of(&p).unwrap();
    let n = occupations(ss.covariance().unwrap()).unwrap();
    let expected = 1.0 / 6.0;
    assert!(
        (n.phonon_m - expected).abs() <= 1e-8,
        "n_phonon_m = {}, closed form {expected}",
        n.phonon_m
    );
}

/// Criterion 4 — stability boundary: cavity-stabilized mirror (C₀ = 100)
/// within 5% of (γ_m/2)(1+C₀); decoupled channel at γ/2 within 1e-10;
/// both inside 5 s.
#[test]
fn acceptance_04_stability_boundary_against_prediction() {
    let start = Instant::now();
    let weak = ModelParams {
        gamma_m: 1e-4,
        gamma_d: 1e-4,
        g: 0.05,
        ..Default::default()
    };
    let b = find_stability_boundary(&weak, Channel::Mechanical).unwrap();
    let predicted = (weak.gamma_m / 2.0) * 101.0;
    assert!(
        (b.lambda_critical - predicted).abs() / predicted <= 0.05,
        "boundary {} vs prediction {predicted}",
        b.lambda_critical
    );

    let decoupled = ModelParams {
        gamma_m: 1e-4,
        gamma_d: 1e-4,
        ..Default::default()
    };
    let b = find_stability_boundary(&decoupled, Channel::Mechanical).unwrap();
    assert!(
        (b.lambda_critical - decoupled.gamma_m / 2.0).abs() <= 1e-10,
        "decoupled boundary {} vs γ/2",
        b.lambda_critical
    );
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(5),
        "boundary searches took {elapsed:?}, budget 5 s"
    );
}

/// Criterion 5 — single-channel amplification thresholds: on the weak
/// mirror-only preset, the phonon column must cross occupation 1 at a
/// relative depth in [0.4, 0.6] and the photon column in [0.85, 0.95];
/// both columns monotone nondecreasing and beyond 10³ at the end of the
/// grid. Sweep budget 30 s.
#[test]
fn acceptance_05_single_channel_amplification_thresholds() {
    let start = Instant::now();
    let table = run_preset("fig3a_weak").expect("sweep should run");
    let elapsed = start.elapsed();

    let xs: Vec<f64> = table.rows.iter().map(|r| r.control_value).collect();
    let photons = column(&table, |r| r.n_photon);
    let phonons = column(&table, |r| r.n_phonon_m);
    let first_above = |col: &[f64]| -> Option<f64> {
        xs.iter().zip(col).find(|(_, &v)| v > 1.0).map(|(x, _)| *x)
    };

    let mut violations = Vec::new();
    for (name, col) in [("photon", &photons), ("phonon", &phonons)] {
        if let Some(w) = col.windows(2).position(|w| w[1] < w[0] * (1.0 - 1e-12)) {
            violations.push(format!("{name} column not monotone at index {w}"));
        }
    }
    match first_above(&phonons) {
        Some(x) if (0.4..=0.6).contains(&x) => {}
        Some(x) => violations.push(format!(
            "phonon column crosses 1 at relative depth {x:.4}, required in [0.4, 0.6]"
        )),
        None => violations.push(format!(
            "phonon column never exceeds 1 (max {:.4e})",
            phonons.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        )),
    }
    match first_above(&photons) {
        Some(x) if (0.85..=0.95).contains(&x) => {}
        Some(x) => violations.push(format!(
            "photon column crosses 1 at relative depth {x:.4}, required in [0.85, 0.95]"
        )),
        None => violations.push(format!(
            "photon column never exceeds 1 (max {:.4e})",
            photons.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        )),
    }
    for (name, col) in [("photon", &photons), ("phonon", &phonons)] {
        let last = *col.last().unwrap();
        if last <= 1e3 {
            violations.push(format!(
                "{name} column reaches only {last:.4e} at the end of the grid, required > 1e3"
            ));
        }
    }
    assert!(
        elapsed < Duration::from_secs(30),
        "200-point sweep took {elapsed:?}, budget 30 s"
    );
    assert!(
        violations.is_empty(),
        "fig3a_weak textual thresholds violated:\n{}",
        violations.join("\n")
    );
}

/// Criterion 6 — split couplings always win on photons: at every interior
/// grid point the strongly split preset strictly exceeds the equal one.
#[test]
fn acceptance_06_split_coupling_photon_dominance() {
    let equal = preset_table("fig5_equal");
    let split = preset_table("fig5_diff");
    let n = equal.rows.len();
    for i in 1..n - 1 {
        let (a, b) = (&equal.rows[i], &split.rows[i]);
        let (pe, ps) = (a.n_photon.unwrap(), b.n_photon.unwrap());
        assert!(
            ps > pe,
            "at relative depth {:.4}: split {ps:.6e} ≤ equal {pe:.6e}",
            a.control_value
        );
    }
}

/// Strict sign changes of a sequence, ignoring exact zeros.
fn sign_changes(diffs: &[f64]) -> usize {
    let mut count = 0;
    let mut last = 0.0f64;
    for &d in diffs {
        if d != 0.0 {
            if last != 0.0 && d.signum() != last.signum() {
                count += 1;
            }
            last = d;
        }
    }
    count
}

/// Criterion 7 — phonon crossings: the Bogoliubov columns of the equal and
/// split presets cross exactly once inside the grid, the mechanical
/// columns cross exactly once with the opposite ordering.
#[test]
fn acceptance_07_phonon_curves_cross_once_with_opposite_order() {
    let equal = preset_table("fig5_equal");
    let split = preset_table("fig5_diff");
    let d_bog: Vec<f64> = equal
        .rows
        .iter()
        .zip(split.rows.iter())
        .map(|(a, b)| b.n_phonon_d.unwrap() - a.n_phonon_d.unwrap())
        .collect();
    let d_mech: Vec<f64> = equal
        .rows
        .iter()
        .zip(split.rows.iter())
        .map(|(a, b)| b.n_phonon_m.unwrap() - a.n_phonon_m.unwrap())
        .collect();
    assert_eq!(
        sign_changes(&d_bog),
        1,
        "Bogoliubov-phonon curves should cross exactly once"
    );
    assert_eq!(
        sign_changes(&d_mech),
        1,
        "mechanical-phonon curves should cross exactly once"
    );
    let first_bog = d_bog.iter().find(|&&d| d != 0.0).unwrap();
    let first_mech = d_mech.iter().find(|&&d| d != 0.0).unwrap();
    assert!(
        first_bog.signum() != first_mech.signum(),
        "orderings should be opposite before the crossings ({first_bog:.3e}, {first_mech:.3e})"
    );
}

/// Criterion 8 — switching on the mirror drive (partner depth 0.2) must
/// not lower any occupation column at any grid point, for both coupling
/// presets.
#[test]
fn acceptance_08_partner_modulation_pointwise_enhancement() {
    let pairs = [
        ("fig6_equal_xm0", "fig6_equal_xm02"),
        ("fig6_diff_xm0", "fig6_diff_xm02"),
    ];
    let columns: [(&str, fn(&dce_sim::sweep::SweepRow) -> Option<f64>); 3] = [
        ("photon", |r| r.n_photon),
        ("phonon_m", |r| r.n_phonon_m),
        ("phonon_d", |r| r.n_phonon_d),
    ];
    let mut violations = Vec::new();
    for (off_name, on_name) in pairs {
        let off = preset_table(off_name);
        let on = preset_table(on_name);
        for (col_name, get) in columns {
            let mut worst: Option<(f64, f64, f64)> = None; // (x, on, off)
            let mut count = 0usize;
            for (a, b) in off.rows.iter().zip(on.rows.iter()) {
                match (get(a), get(b)) {
                    (Some(x_off), Some(x_on)) => {
                        if x_on < x_off {
                            count += 1;
                            let deficit = (x_off - x_on) / x_off.max(f64::MIN_POSITIVE);
                            if worst.is_none_or(|(_, o, f)| (f - o) / f < deficit) {
                                worst = Some((a.control_value, x_on, x_off));
                            }
                        }
                    }
                    (Some(_), None) => {
                        count += 1;
                        worst.get_or_insert((a.control_value, f64::NAN, get(a).unwrap()));
                    }
                    _ => {}
                }
            }
            if count > 0 {
                let (x, on_v, off_v) = worst.unwrap();
                let on_text = if on_v.is_nan() {
                    "no occupation (row unstable)".to_string()
                } else {
                    format!("{on_v:.6e}")
                };
                violations.push(format!(
                    "{on_name} vs {off_name}, {col_name}: {count} points lower with the \
                     drive on (e.g. at depth {x:.4}: {on_text} < {off_v:.6e})"
                ));
            }
        }
    }
    assert!(
        violations.is_empty(),
        "pointwise enhancement violated:\n{}",
        violations.join("\n")
    );
}

/// Criterion 9 — spectral consistency: the optimal-coupling rate and the
/// cavity-cooled mechanical linewidth from the closed-form report match
/// the zero-frequency self-energies to 1e-9 relative on 100 random stable
/// parameter sets.
#[test]
fn acceptance_09_dc_self_energies_match_effective_rates() {
    let mut rng = SplitMix64(0x0acc_e55_0009);
    for case in 0..100 {
        let gamma_m = 10f64.powf(rng.range(-4.0, -2.0));
        let gamma_d = 10f64.powf(rng.range(-4.0, -2.0));
        let p = ModelParams {
            gamma_m,
            gamma_d,
            g: rng.range(0.01, 0.2),
            g_bec: rng.range(0.01, 0.2),
            lambda_m: rng.range(0.01, 0.9) * gamma_m / 2.0,
            lambda_d: rng.range(0.01, 0.9) * gamma_d / 2.0,
            ..Default::default()
        };
        let rep = regime_report(&p).unwrap();
        let dc = spectral_point(&p, 0.0).unwrap();
        let kappa_opt_dc = -2.0 * dc.sigma_a.im;
        assert!(
            (rep.kappa_opt - kappa_opt_dc).abs() <= 1e-9 * kappa_opt_dc.abs(),
            "case {case}: κ_opt {} vs −2ImΣ_a(0) {}",
            rep.kappa_opt,
            kappa_opt_dc
        );
        let gamma_eff_dc = p.gamma_m - 2.0 * dc.sigma_b.im;
        assert!(
            (rep.gamma_eff_m - gamma_eff_dc).abs() <= 1e-9 * gamma_eff_dc.abs(),
            "case {case}: Γ_m {} vs γ_m−2ImΣ_b(0) {}",
            rep.gamma_eff_m,
            gamma_eff_dc
        );
    }
}

/// Criterion 10 — physicality: every stable steady covariance across all
/// preset sweeps respects the uncertainty principle (symplectic
/// eigenvalues ≥ 1/2 − 1e-9).
#[test]
fn acceptance_10_symplectic_physicality_across_presets() {
    let mut checked = 0usize;
    for name in PRESET_NAMES {
        let table = preset_table(name);
        let spec = preset(name).unwrap().spec;
        for row in table.rows.iter().filter(|r| r.stable) {
            let q = spec.resolve(row.control_value).unwrap();
            let ss = dce_sim::lyapunov::steady_state_of(&q).unwrap();
            let nu = symplectic_eigenvalues(ss.covariance().unwrap());
            assert!(
                nu[0] >= 0.5 - 1e-9,
                "{name} at depth {}: min symplectic eigenvalue {}",
                row.control_value,
                nu[0]
            );
            checked += 1;
        }
    }
    assert!(checked > 1000, "only {checked} stable rows checked");
}

/// Criterion 11 — rotating-wave validation: the period-averaged occupation
/// of the full time-dependent integration is within 10% of the
/// rotating-wave value at a sideband ratio of 50, and closer there than at
/// 25. Budget 2 min.
#[test]
fn acceptance_11_time_dependent_integration_validates_rwa() {
    let start = Instant::now();
    let base = ModelParams {
        gamma_m: 0.1,
        gamma_d: 0.1,
        g: 0.2,
        lambda_m: 0.025, // ξ_m = 0.5
        ..Default::default()
    };
    let gap_at = |ratio: f64| {
        let tp = TimeDependentParams {
            base: base.clone(),
            delta0: ratio,
            omega_m: ratio,
            omega_d: ratio,
        };
        let (_, _, gap) = rwa_validate(&tp, 2000, 32).expect("integration should settle");
        gap
    };
    let gap25 = gap_at(25.0);
    let gap50 = gap_at(50.0);
    assert!(gap50 <= 0.10, "gap at ω/κ = 50 is {gap50:.3e}, budget 10%");
    assert!(
        gap50 < gap25,
        "gap should shrink with the sideband ratio: {gap50:.3e} at 50 vs {gap25:.3e} at 25"
    );
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(120),
        "validation took {elapsed:?}, budget 2 min"
    );
}

/// Criterion 12 — determinism: the binary produces byte-identical CSV and
/// SVG for any worker count.
#[test]
fn acceptance_12_artifacts_identical_across_worker_counts() {
    let exe = env!("CARGO_BIN_EXE_dce");
    let dir = tempfile::tempdir().unwrap();
    let mut artifacts: Vec<(Vec<u8>, Vec<u8>)> = Vec::new();
    for (label, threads) in [("t1", "1"), ("t4", "4"), ("t4b", "4")] {
        let csv = dir.path().join(format!("{label}.csv"));
        let svg = dir.path().join(format!("{label}.svg"));
        let status = std::process::Command::new(exe)
            .args([
                "sweep",
                "--preset",
                "fig4a",
                "--out",
                csv.to_str().unwrap(),
                "--svg",
                svg.to_str().unwrap(),
            ])
            .env("DCE_THREADS", threads)
            .status()
            .expect("binary should start");
        assert!(status.success(), "run {label} exited with {status}");
        artifacts.push((std::fs::read(&csv).unwrap(), std::fs::read(&svg).unwrap()));
    }
    assert!(
        artifacts[0] == artifacts[1] && artifacts[1] == artifacts[2],
        "CSV/SVG bytes differ across worker counts or repeats"
    );
}
