//! From laboratory quantities to dimensionless model rates.
//!
//! Takes a millimeter-cavity / ultracold-gas parameter set in SI units
//! (lengths, masses, powers, frequencies), derives the linearized coupling
//! rates and modulation amplitudes the simulator consumes, and prints the
//! feasibility diagnostics — including the scattering length that would
//! bring the collective atomic mode onto resonance with the mirror.
//!
//! Run with: `cargo run --example calibrate_physical`

use dce_sim::calibration::{derive_rates, resonance_tuning, PhysicalParams};

fn main() -> dce_sim::Result<()> {
    let lab = PhysicalParams {
        cavity_length: 1.78e-4,
        mirror_mass: 1e-9,
        mirror_freq: 9.5e4,
        cavity_freq: 2.4148e15,
        laser_freq: 2.4148e15,
        laser_power: 2e-12,
        cavity_decay: 6.283e3,
        mech_damping: 0.6283,
        bogoliubov_damping: 0.6283,
        atom_number: 1e5,
        atom_mass: 1.4431606e-25, // Rb-87
        scattering_length: 5.3e-9,
        mode_waist: 2.5e-5,
        atom_detuning: -2.01e11,
        rabi_coupling: 8.86e7,
        spring_mod_depth: 1e-7,
        collision_mod_depth: 0.5,
        detuning: -1.95e9,
    };

    let rates = derive_rates(&lab)?;
    println!("zero-point spread x_zp : {:.4e} m", rates.x_zp);
    println!("recoil frequency       : {:.4e} rad/s", rates.omega_r);
    println!("collision frequency    : {:.4e} rad/s", rates.omega_sw);
    println!("Bogoliubov frequency   : {:.4e} rad/s", rates.omega_d);
    println!("mean cavity photons    : {:.4e}", rates.mean_photons);
    println!();

    let m = rates.model.normalized();
    println!("model rates (units of kappa):");
    println!("  gamma_m  = {:.4e}", m.gamma_m);
    println!("  gamma_d  = {:.4e}", m.gamma_d);
    println!("  g        = {:.4e}", m.g);
    println!("  G        = {:.4e}", m.g_bec);
    println!("  lambda_m = {:.4e}", m.lambda_m);
    println!("  lambda_d = {:.4e}", m.lambda_d);
    println!();

    if rates.diagnostics.warnings.is_empty() {
        println!("diagnostics: no warnings");
    } else {
        println!("diagnostics:");
        for w in &rates.diagnostics.warnings {
            println!("  - {w}");
        }
    }
    println!();

    // The atomic mode sits at 4*omega_r + omega_sw; tuning the scattering
    // length (via a Feshbach resonance) can park it exactly on the mirror
    // frequency so both channels share one resonance condition.
    let a_s = resonance_tuning(&lab)?;
    println!("scattering length matching the mirror resonance: {a_s:.4e} m");
    Ok(())
}
