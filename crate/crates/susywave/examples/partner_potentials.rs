//! Derive the superpotential of each family and check the algebra that
//! ties it to the index profiles:
//!
//! ```text
//! k^2 (n/n0)^2 = epsilon - lambda - (W^2 + W')     (input side)
//! k^2 (n-/n0)^2 = epsilon - lambda - (W^2 - W')    (partner side)
//! ```
//!
//! ```text
//! cargo run --example partner_potentials
//! ```

use susywave::susy::{
    index_potential_consistency, partner_potentials, riccati_residual, PotentialSign,
};
use susywave::{Grid, PlaneWaveProfile, Profile, SinusoidalProfile, SusyParams};

fn main() -> susywave::Result<()> {
    let families = [
        (
            "plane wave",
            Profile::PlaneWave(PlaneWaveProfile::new(1.0, 1.0, 2.0)?),
        ),
        (
            "sinusoidal",
            Profile::Sinusoidal(SinusoidalProfile::new(1.0, 4.0, 2.0, 1.0)?),
        ),
    ];

    for (label, profile) in families {
        let params = SusyParams::matched(&profile, 0.0)?;
        let w = profile.superpotential(&params)?;
        let grid = Grid::new(-profile.period(), profile.period(), 801)?;

        println!("{label}:");
        println!(
            "  W(0) = {:.4}, W'(0) = {:.4}",
            w.value(0.0),
            w.derivative(0.0)
        );

        let (v_plus, v_minus) = partner_potentials(&w, &params, &grid);
        println!(
            "  V+(0) = {:.4}, V-(0) = {:.4}",
            v_plus.value(grid.count() / 2),
            v_minus.value(grid.count() / 2)
        );

        for sign in [PotentialSign::Plus, PotentialSign::Minus] {
            let report = riccati_residual(&profile, &w, &params, sign, &grid);
            println!(
                "  Riccati closure ({sign:?}): max residual {:.3e} (tolerance {:.1e})",
                report.max_abs_residual, report.tolerance
            );
            assert!(report.pass);
        }

        let consistency = index_potential_consistency(&profile, &w, &params, &grid);
        println!(
            "  potential/index consistency: max residual {:.3e}\n",
            consistency.max_abs_residual
        );
        assert!(consistency.pass);
    }
    Ok(())
}
