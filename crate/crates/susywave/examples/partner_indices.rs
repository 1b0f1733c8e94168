//! Build both analytic index families, emit a few partner samples and
//! confirm the superposition identity n+ + n- = 2 n0 pointwise.
//!
//! ```text
//! cargo run --example partner_indices
//! ```

use susywave::{Grid, PlaneWaveProfile, Profile, SinusoidalProfile, SusyParams};
use susywave::susy::{build_partner_set, partner_sum_check};

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
        let grid = Grid::new(0.0, 2.0 * profile.period(), 9)?;
        let set = build_partner_set(&profile, &params, &grid)?;

        println!("{label}: beta = {}, k = {}, epsilon = {}", profile.beta(), params.k, params.epsilon);
        println!("{:>8}  {:>22}  {:>22}", "z", "n+", "n-");
        for (i, z) in grid.nodes().enumerate() {
            let p = set.n_plus.value(i);
            let m = set.n_minus.value(i);
            println!(
                "{z:8.4}  {:>10.4} {:+8.4}i  {:>10.4} {:+8.4}i",
                p.re, p.im, m.re, m.im
            );
        }

        let sum = partner_sum_check(&set);
        println!(
            "superposition residual: max {:.3e} (tolerance {:.1e})\n",
            sum.max_abs_residual, sum.tolerance
        );
        assert!(sum.pass);
    }
    Ok(())
}
