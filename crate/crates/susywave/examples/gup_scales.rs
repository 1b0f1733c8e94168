//! Minimal-length deformation scales: split the massive dispersion
//! relation into its quadratic and quartic corrections, recover the mass
//! scale of a cut-off mode, and size the deformation parameter for an
//! electron and for a Planck-mass object.
//!
//! ```text
//! cargo run --example gup_scales
//! ```

use susywave::gup::{
    self,
    constants::{ELECTRON_MASS, PLANCK_MASS, REDUCED_PLANCK, SPEED_OF_LIGHT},
};

fn main() -> susywave::Result<()> {
    // omega(k) ~ c k (1 + a2 / k^2 - a4 / k^4 + ...) for a massive mode
    let k = 2.0e10; // 1/m, a hard-x-ray scale where the expansion is clean
    let (quadratic, quartic) = gup::dispersion_coefficients(k, SPEED_OF_LIGHT)?;
    println!("dispersion corrections at k = {k:.3e} 1/m:");
    println!("  quadratic term {quadratic:.6e}");
    println!("  quartic term   {quartic:.6e}");

    let mass = gup::consistency_mass(k, SPEED_OF_LIGHT, REDUCED_PLANCK)?;
    println!("  equivalent mass hbar k / c = {mass:.6e} kg\n");

    for name in ["electron", "planck"] {
        let m = gup::particle_mass(name)?;
        let estimate = gup::tau0_estimate(m, PLANCK_MASS)?;
        println!("{name}:");
        println!("  mass = {m:.6e} kg");
        println!("  tau  = {:.6e} (kg m/s)^-2", estimate.tau);
        println!(
            "  tau0 = {:.6e}  (floor log10 = {})",
            estimate.tau0,
            estimate.log10_floor()
        );
    }

    // the electron value is enormous; a Planck-mass object sits at the
    // prefactor itself
    let electron = gup::tau0_estimate(ELECTRON_MASS, PLANCK_MASS)?;
    assert_eq!(electron.log10_floor(), 44);
    let planck = gup::tau0_estimate(PLANCK_MASS, PLANCK_MASS)?;
    assert_eq!(planck.tau0, 0.375);

    Ok(())
}
