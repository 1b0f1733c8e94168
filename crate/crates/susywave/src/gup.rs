//! Minimal-length scale estimates from the massive dispersion correction.
//!
//! A guided mode with a cut-off behaves like a relativistic particle:
//! its frequency follows the massive branch
//!
//! ```text
//! omega(k) = c sqrt(k^2 + x),   x = (m c / hbar)^2
//! omega(k) ~ c k + (c / 2k) x - (c / 8 k^3) x^2 + ...
//! ```
//!
//! Matching the quadratic correction against a deformed commutation
//! relation [X, P] = i hbar (1 + tau P^2) gives the deformation scale
//!
//! ```text
//! tau  = (3/8) / (m c)^2
//! tau0 = (3/8) (m_Planck / m)^2 = tau (m_Planck c)^2
//! ```
//!
//! where tau carries units of inverse momentum squared and tau0 is its
//! dimensionless value in Planck units. Light particles push tau0 far
//! above one, i.e. far above the Planck-scale benchmark. All constants
//! are explicit arguments (with SI defaults from [`constants`]) so the
//! estimates stay reproducible and natural-unit cross-checks stay easy.

use crate::error::{Error, Result};

/// 2018 CODATA values in SI units.
pub mod constants {
    /// Speed of light in vacuum, m/s (exact).
    pub const SPEED_OF_LIGHT: f64 = 2.99792458e8;
    /// Reduced Planck constant, J s.
    pub const REDUCED_PLANCK: f64 = 1.054571817e-34;
    /// Planck mass, kg.
    pub const PLANCK_MASS: f64 = 2.176434e-8;
    /// Electron rest mass, kg.
    pub const ELECTRON_MASS: f64 = 9.1093837015e-31;
}

/// Prefactor 3/8 of the deformation scale.
pub const DEFORMATION_PREFACTOR: f64 = 0.375;

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::NonPositiveInput { name, value });
    }
    Ok(())
}

/// Magnitudes of the first two mass-shell corrections to the massless
/// dispersion omega = c k, i.e. the coefficients of x and x^2 in the
/// expansion above: (c / 2k, c / 8k^3).
pub fn dispersion_coefficients(k: f64, light_speed: f64) -> Result<(f64, f64)> {
    require_positive("k", k)?;
    require_positive("light_speed", light_speed)?;
    Ok((
        light_speed / (2.0 * k),
        light_speed / (8.0 * k * k * k),
    ))
}

/// Mass whose rest momentum m c matches the wavenumber: m = hbar k / c.
/// This is the mass at which the quadratic dispersion coefficient
/// coincides with the free kinetic coefficient 1/2m.
pub fn consistency_mass(k: f64, light_speed: f64, hbar: f64) -> Result<f64> {
    require_positive("k", k)?;
    require_positive("light_speed", light_speed)?;
    require_positive("hbar", hbar)?;
    Ok(hbar * k / light_speed)
}

/// [`consistency_mass`] with the SI constants filled in.
pub fn consistency_mass_si(k: f64) -> Result<f64> {
    consistency_mass(k, constants::SPEED_OF_LIGHT, constants::REDUCED_PLANCK)
}

/// Deformation scales of one particle species.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GupEstimate {
    /// Rest mass in kg.
    pub mass: f64,
    /// Reference Planck mass in kg.
    pub planck_mass: f64,
    /// Dimensionful deformation scale, 1 / (kg m/s)^2.
    pub tau: f64,
    /// Dimensionless deformation scale in Planck units.
    pub tau0: f64,
}

impl GupEstimate {
    /// Order of magnitude of tau0: floor(log10 tau0).
    pub fn log10_floor(&self) -> i32 {
        self.tau0.log10().floor() as i32
    }
}

/// Deformation scales for a particle of the given rest mass, measured
/// against the given Planck mass, using the SI speed of light.
pub fn tau0_estimate(mass: f64, planck_mass: f64) -> Result<GupEstimate> {
    tau0_estimate_with_light_speed(mass, planck_mass, constants::SPEED_OF_LIGHT)
}

/// Same estimate with an explicit speed of light. tau0 is a pure mass
/// ratio and does not depend on it; tau does.
pub fn tau0_estimate_with_light_speed(
    mass: f64,
    planck_mass: f64,
    light_speed: f64,
) -> Result<GupEstimate> {
    require_positive("mass", mass)?;
    require_positive("planck_mass", planck_mass)?;
    require_positive("light_speed", light_speed)?;
    let momentum = mass * light_speed;
    let ratio = planck_mass / mass;
    Ok(GupEstimate {
        mass,
        planck_mass,
        tau: DEFORMATION_PREFACTOR / (momentum * momentum),
        tau0: DEFORMATION_PREFACTOR * ratio * ratio,
    })
}

/// Rest mass of a named particle preset.
pub fn particle_mass(name: &str) -> Result<f64> {
    match name.to_ascii_lowercase().as_str() {
        "electron" => Ok(constants::ELECTRON_MASS),
        "planck" => Ok(constants::PLANCK_MASS),
        _ => Err(Error::UnknownParticle { name: name.into() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn relative(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs())
    }

    #[test]
    fn dispersion_coefficients_known_values() {
        assert_eq!(dispersion_coefficients(1.0, 1.0).unwrap(), (0.5, 0.125));
        assert_eq!(
            dispersion_coefficients(2.0, 1.0).unwrap(),
            (0.25, 0.015625)
        );
    }

    #[test]
    fn consistency_mass_known_values() {
        assert_eq!(consistency_mass(1.0, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(consistency_mass(2.0, 1.0, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn positivity_is_enforced() {
        assert!(matches!(
            dispersion_coefficients(0.0, 1.0),
            Err(Error::NonPositiveInput { name: "k", .. })
        ));
        assert!(dispersion_coefficients(1.0, -1.0).is_err());
        assert!(consistency_mass(-2.0, 1.0, 1.0).is_err());
        assert!(consistency_mass(2.0, 1.0, 0.0).is_err());
        assert!(tau0_estimate(0.0, constants::PLANCK_MASS).is_err());
        assert!(tau0_estimate(1.0, -1.0).is_err());
        assert!(tau0_estimate_with_light_speed(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn electron_scales() {
        let estimate =
            tau0_estimate(constants::ELECTRON_MASS, constants::PLANCK_MASS).unwrap();
        assert!(relative(estimate.tau, 5.028e42) < 1e-3, "tau {}", estimate.tau);
        assert!(
            relative(estimate.tau0, 2.1406e44) < 1e-3,
            "tau0 {}",
            estimate.tau0
        );
        assert_eq!(estimate.log10_floor(), 44);
    }

    #[test]
    fn planck_mass_sits_at_the_prefactor() {
        let estimate =
            tau0_estimate(constants::PLANCK_MASS, constants::PLANCK_MASS).unwrap();
        assert_eq!(estimate.tau0, DEFORMATION_PREFACTOR);
        assert_eq!(estimate.log10_floor(), -1);
    }

    #[test]
    fn doubling_the_mass_quarters_tau0() {
        let mass = 3.7e-27;
        let light = tau0_estimate(mass, constants::PLANCK_MASS).unwrap();
        let heavy = tau0_estimate(2.0 * mass, constants::PLANCK_MASS).unwrap();
        assert_eq!(4.0 * heavy.tau0, light.tau0);
    }

    #[test]
    fn particle_presets_resolve() {
        assert_eq!(particle_mass("electron").unwrap(), constants::ELECTRON_MASS);
        assert_eq!(particle_mass("Electron").unwrap(), constants::ELECTRON_MASS);
        assert_eq!(particle_mass("planck").unwrap(), constants::PLANCK_MASS);
        assert!(matches!(
            particle_mass("muon"),
            Err(Error::UnknownParticle { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn tau_and_tau0_stay_consistent(exponent in -3.0f64..6.0) {
            let k = 10f64.powf(exponent);
            let mass = consistency_mass_si(k).unwrap();
            let estimate = tau0_estimate(mass, constants::PLANCK_MASS).unwrap();
            let planck_momentum =
                constants::PLANCK_MASS * constants::SPEED_OF_LIGHT;
            let via_tau = estimate.tau * planck_momentum * planck_momentum;
            prop_assert!(relative(estimate.tau0, via_tau) < 1e-12);
        }

        #[test]
        fn quartic_to_quadratic_ratio(k in 0.1f64..10.0) {
            let (quadratic, quartic) = dispersion_coefficients(k, 1.0).unwrap();
            prop_assert!(relative(quartic / quadratic, 1.0 / (4.0 * k * k)) < 1e-12);
        }

        #[test]
        fn consistency_mass_round_trips(
            exponent in -3.0f64..6.0,
            light_speed in 0.5f64..4e8,
            hbar in 0.5f64..2.0,
        ) {
            let k = 10f64.powf(exponent);
            let mass = consistency_mass(k, light_speed, hbar).unwrap();
            let recovered = mass * light_speed / hbar;
            prop_assert!(relative(recovered, k) < 1e-12);
        }
    }
}
