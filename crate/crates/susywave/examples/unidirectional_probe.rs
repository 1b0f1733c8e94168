//! Scattering off a weak finite grating cut from the plane-wave family:
//! at the matched wavenumber the left reflection collapses while the
//! right reflection stays at its perturbative size (k v0 L)^2.
//!
//! ```text
//! cargo run --release --example unidirectional_probe
//! ```

use susywave::scattering::{detuning_sweep, solve_scattering, GratingSpec};
use susywave::{PlaneWaveProfile, Profile};

fn main() -> susywave::Result<()> {
    let v0 = 0.002;
    let beta = 2.0;
    let periods = 50;
    let profile = Profile::PlaneWave(PlaneWaveProfile::new(1.0, v0, beta)?);

    // sweep through the matched point k = beta / 2
    let wavenumbers: Vec<f64> = (0..11).map(|i| 0.95 + 0.01 * i as f64).collect();
    let results = detuning_sweep(&profile, &wavenumbers, periods, 512)?;

    println!("{:>6}  {:>12}  {:>12}  {:>12}", "k", "R_left", "R_right", "T");
    for r in &results {
        println!(
            "{:6.3}  {:12.4e}  {:12.4e}  {:12.6}",
            r.k,
            r.reflectance_left(),
            r.reflectance_right(),
            r.transmittance()
        );
    }

    let spec = GratingSpec::new(profile, beta / 2.0, periods, 512)?;
    let matched = solve_scattering(&spec)?;
    let born = (spec.k * v0 * spec.length()).powi(2);
    println!("\nat k = beta/2:");
    println!("  R_left  = {:.3e}", matched.reflectance_left());
    println!(
        "  R_right = {:.3e} (perturbative estimate {born:.3e})",
        matched.reflectance_right()
    );
    println!(
        "  asymmetry ratio R_right / R_left = {:.3e}",
        matched.reflectance_right() / matched.reflectance_left().max(f64::MIN_POSITIVE)
    );
    println!("  |T - 1| = {:.3e}", (matched.transmittance() - 1.0).abs());

    assert!(matched.reflectance_left() < 1e-12);
    assert!((matched.reflectance_right() / born - 1.0).abs() < 0.05);
    assert!((matched.transmittance() - 1.0).abs() < 1e-3);

    Ok(())
}
