//! Transfer-matrix scattering off a finite modulated-index grating.
//!
//! The grating occupies [0, L] with L a whole number of modulation
//! periods; outside, the index equals the real background n_bg and waves
//! carry the wavenumber k. Two fundamental solutions of
//!
//! ```text
//! E''(z) + k^2 (n(z)/n_bg)^2 E(z) = 0
//! ```
//!
//! are integrated across the grating and assembled into the transfer
//! matrix M = [[E1(L), E2(L)], [E1'(L), E2'(L)]] from initial data
//! E1(0) = 1, E1'(0) = 0 and E2(0) = 0, E2'(0) = 1. The equation has no
//! first-derivative term, so det M = 1 exactly; a numerical drift beyond
//! [`DETERMINANT_TOLERANCE`] marks the solve as degenerate.
//!
//! Amplitudes are quoted against the global plane waves exp(+-ikz).
//! Left incidence reads E = exp(ikz) + r_left exp(-ikz) far left and
//! t exp(ikz) far right; right incidence reads E = exp(-ikz)
//! + r_right exp(ikz) far right and t exp(-ikz) far left, with one shared
//! transmission amplitude by reciprocity. With A = ik m11 - m21 and
//! B = -(k^2 m12 + ik m22) the matching conditions give
//!
//! ```text
//! r_left  = -(A + B) / (A - B)
//! t       =  2 i k exp(-ikL) / (A - B)
//! r_right = (t (m11 - ik m12) - exp(-ikL)) exp(-ikL)
//! ```
//!
//! where the identity det M = 1 is already folded into t, keeping the
//! reported transmission insensitive to determinant drift.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ode;
use crate::profiles::Profile;

/// Allowed drift of |det M - 1| before a solve is rejected.
pub const DETERMINANT_TOLERANCE: f64 = 1e-6;

/// Fewest integration steps per modulation period accepted.
pub const MIN_STEPS_PER_PERIOD: usize = 64;

/// A finite grating cut from a periodic index profile.
#[derive(Debug, Clone, Copy)]
pub struct GratingSpec {
    pub profile: Profile,
    pub k: f64,
    pub periods: usize,
    pub steps_per_period: usize,
}

impl GratingSpec {
    /// Positive wavenumber, at least one period, at least
    /// [`MIN_STEPS_PER_PERIOD`] integration steps per period.
    pub fn new(
        profile: Profile,
        k: f64,
        periods: usize,
        steps_per_period: usize,
    ) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::NonPositiveWavenumber { value: k });
        }
        if periods == 0 {
            return Err(Error::InvalidParameter {
                name: "periods",
                message: "grating needs at least one period".into(),
            });
        }
        if steps_per_period < MIN_STEPS_PER_PERIOD {
            return Err(Error::InvalidParameter {
                name: "steps_per_period",
                message: format!(
                    "need at least {MIN_STEPS_PER_PERIOD} steps per period, got {steps_per_period}"
                ),
            });
        }
        Ok(Self {
            profile,
            k,
            periods,
            steps_per_period,
        })
    }

    /// Physical length L = periods * period.
    pub fn length(&self) -> f64 {
        self.periods as f64 * self.profile.period()
    }

    pub fn total_steps(&self) -> usize {
        self.periods * self.steps_per_period
    }
}

/// Fundamental-solution matrix across the grating.
#[derive(Debug, Clone, Copy)]
pub struct TransferMatrix {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl TransferMatrix {
    pub fn determinant(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }
}

/// Integrate the two fundamental solutions across the grating.
pub fn transfer_matrix(spec: &GratingSpec) -> TransferMatrix {
    let k2 = spec.k * spec.k;
    let background = spec.profile.background();
    let coeff = |z: f64| {
        let ratio = spec.profile.index(z) / background;
        -k2 * ratio * ratio
    };
    let h = spec.profile.period() / spec.steps_per_period as f64;
    let steps = spec.total_steps();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::default();
    let (m11, m21) = ode::integrate_final(&coeff, 0.0, (one, zero), h, steps);
    let (m12, m22) = ode::integrate_final(&coeff, 0.0, (zero, one), h, steps);
    TransferMatrix { m11, m12, m21, m22 }
}

/// Reflection and transmission amplitudes of one grating at one
/// wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringResult {
    pub k: f64,
    pub r_left: Complex64,
    pub r_right: Complex64,
    pub t: Complex64,
}

impl ScatteringResult {
    pub fn reflectance_left(&self) -> f64 {
        self.r_left.norm_sqr()
    }

    pub fn reflectance_right(&self) -> f64 {
        self.r_right.norm_sqr()
    }

    pub fn transmittance(&self) -> f64 {
        self.t.norm_sqr()
    }
}

/// Extract the three amplitudes from a precomputed transfer matrix.
/// Rejects matrices whose determinant strayed from one, including
/// non-finite ones.
pub fn amplitudes_from_matrix(
    m: &TransferMatrix,
    k: f64,
    length: f64,
) -> Result<ScatteringResult> {
    let deviation = (m.determinant() - 1.0).norm();
    if !(deviation <= DETERMINANT_TOLERANCE) {
        return Err(Error::DegenerateTransferMatrix { deviation });
    }
    let ik = Complex64::new(0.0, k);
    let a = ik * m.m11 - m.m21;
    let b = -(k * k * m.m12 + ik * m.m22);
    let denom = a - b;
    let phase = Complex64::from_polar(1.0, -k * length);
    let r_left = -(a + b) / denom;
    let t = 2.0 * ik * phase / denom;
    let r_right = (t * (m.m11 - ik * m.m12) - phase) * phase;
    Ok(ScatteringResult {
        k,
        r_left,
        r_right,
        t,
    })
}

/// Solve the scattering problem for one grating.
pub fn solve_scattering(spec: &GratingSpec) -> Result<ScatteringResult> {
    amplitudes_from_matrix(&transfer_matrix(spec), spec.k, spec.length())
}

/// Solve the same grating across a list of wavenumbers. A failing
/// element aborts the sweep and reports its position.
pub fn detuning_sweep(
    profile: &Profile,
    wavenumbers: &[f64],
    periods: usize,
    steps_per_period: usize,
) -> Result<Vec<ScatteringResult>> {
    wavenumbers
        .iter()
        .enumerate()
        .map(|(index, &k)| {
            GratingSpec::new(*profile, k, periods, steps_per_period)
                .and_then(|spec| solve_scattering(&spec))
                .map_err(|source| Error::SweepElement {
                    index,
                    source: Box::new(source),
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{PlaneWaveProfile, SinusoidalProfile};
    use std::f64::consts::PI;

    fn plane_wave(v0: f64, beta: f64) -> Profile {
        Profile::PlaneWave(PlaneWaveProfile::new(1.0, v0, beta).unwrap())
    }

    fn sinusoidal(eta1: f64, eta2: f64, beta: f64) -> Profile {
        Profile::Sinusoidal(SinusoidalProfile::new(1.0, eta1, eta2, beta).unwrap())
    }

    // Independent route to the same amplitudes: integrate the slowly
    // varying envelopes a, b of E = a exp(ikz) + b exp(-ikz) with
    //   a' =  (iV/2k) (a + b exp(-2ikz))
    //   b' = -(iV/2k) (a exp(2ikz) + b)
    // where V = k^2 ((n/n_bg)^2 - 1), then read the amplitudes off the
    // envelope map exactly as for a transfer matrix.
    fn coupled_amplitude_oracle(
        profile: &Profile,
        k: f64,
        periods: usize,
        total_steps: usize,
    ) -> (Complex64, Complex64, Complex64) {
        let background = profile.background();
        let length = periods as f64 * profile.period();
        let h = length / total_steps as f64;
        let deriv = |z: f64, a: Complex64, b: Complex64| {
            let ratio = profile.index(z) / background;
            let v = k * k * (ratio * ratio - 1.0);
            let coupling = Complex64::new(0.0, 1.0) * v / (2.0 * k);
            let phase = Complex64::from_polar(1.0, 2.0 * k * z);
            (coupling * (a + b / phase), -coupling * (a * phase + b))
        };
        let mut columns = [
            (Complex64::new(1.0, 0.0), Complex64::default()),
            (Complex64::default(), Complex64::new(1.0, 0.0)),
        ];
        for column in columns.iter_mut() {
            let (mut a, mut b) = *column;
            for i in 0..total_steps {
                let z = i as f64 * h;
                let (k1a, k1b) = deriv(z, a, b);
                let (k2a, k2b) = deriv(z + h / 2.0, a + k1a * (h / 2.0), b + k1b * (h / 2.0));
                let (k3a, k3b) = deriv(z + h / 2.0, a + k2a * (h / 2.0), b + k2b * (h / 2.0));
                let (k4a, k4b) = deriv(z + h, a + k3a * h, b + k3b * h);
                a += (k1a + 2.0 * k2a + 2.0 * k3a + k4a) * (h / 6.0);
                b += (k1b + 2.0 * k2b + 2.0 * k3b + k4b) * (h / 6.0);
            }
            *column = (a, b);
        }
        let (a11, a21) = columns[0];
        let (a12, a22) = columns[1];
        let r_left = -a21 / a22;
        let t = Complex64::new(1.0, 0.0) / a22;
        let r_right = a12 / a22;
        let _ = a11;
        (r_left, r_right, t)
    }

    #[test]
    fn uniform_background_is_transparent() {
        let spec = GratingSpec::new(plane_wave(0.0, 2.0), 1.0, 5, 1024).unwrap();
        let result = solve_scattering(&spec).unwrap();
        assert!(result.r_left.norm() <= 1e-10, "r_left {}", result.r_left.norm());
        assert!(result.r_right.norm() <= 1e-10, "r_right {}", result.r_right.norm());
        assert!((result.t - 1.0).norm() <= 1e-10, "t {}", result.t);
    }

    #[test]
    fn determinant_stays_near_one_for_strong_gratings() {
        let spec = GratingSpec::new(sinusoidal(4.0, 2.0, 1.0), 1.0, 2, 512).unwrap();
        let m = transfer_matrix(&spec);
        assert!((m.determinant() - 1.0).norm() <= 1e-8);
        assert!(solve_scattering(&spec).is_ok());
    }

    #[test]
    fn drifted_determinant_is_rejected() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let doubled = TransferMatrix {
            m11: c(2.0, 0.0),
            m12: c(0.0, 0.0),
            m21: c(0.0, 0.0),
            m22: c(1.0, 0.0),
        };
        match amplitudes_from_matrix(&doubled, 1.0, PI) {
            Err(Error::DegenerateTransferMatrix { deviation }) => {
                assert!((deviation - 1.0).abs() < 1e-12);
            }
            other => panic!("expected degenerate transfer matrix, got {other:?}"),
        }
        let blown_up = TransferMatrix {
            m11: c(f64::NAN, 0.0),
            m12: c(0.0, 0.0),
            m21: c(0.0, 0.0),
            m22: c(1.0, 0.0),
        };
        assert!(matches!(
            amplitudes_from_matrix(&blown_up, 1.0, PI),
            Err(Error::DegenerateTransferMatrix { .. })
        ));
    }

    #[test]
    fn amplitudes_match_the_coupled_envelope_oracle() {
        let profile = sinusoidal(0.3, 0.1, 1.0);
        let k = 1.24;
        let spec = GratingSpec::new(profile, k, 3, 1024).unwrap();
        let result = solve_scattering(&spec).unwrap();
        let (r_left, r_right, t) = coupled_amplitude_oracle(&profile, k, 3, 3 * 8192);
        assert!(
            (result.r_left - r_left).norm() <= 1e-6,
            "r_left {} vs {}",
            result.r_left,
            r_left
        );
        assert!(
            (result.r_right - r_right).norm() <= 1e-6,
            "r_right {} vs {}",
            result.r_right,
            r_right
        );
        assert!((result.t - t).norm() <= 1e-6, "t {} vs {}", result.t, t);
    }

    #[test]
    fn real_grating_reflects_both_sides_equally() {
        // detuned so the reflection is appreciable; a real index keeps
        // the flux balance R + T = 1 and the two reflectances equal
        let spec = GratingSpec::new(sinusoidal(0.1, 0.0, 1.0), 1.15, 4, 1024).unwrap();
        let result = solve_scattering(&spec).unwrap();
        let r_l = result.reflectance_left();
        let r_r = result.reflectance_right();
        assert!(r_l > 1e-3, "reflection too weak to test: {r_l}");
        assert!((r_l - r_r).abs() <= 1e-8, "R_L {r_l} vs R_R {r_r}");
        assert!(
            (r_l + result.transmittance() - 1.0).abs() <= 1e-8,
            "flux defect {}",
            (r_l + result.transmittance() - 1.0).abs()
        );
    }

    #[test]
    fn balanced_plane_wave_grating_reflects_only_one_way() {
        // single-sided modulation exp(i beta z) probed at beta = 2k
        let delta = 0.002;
        let spec = GratingSpec::new(plane_wave(delta, 2.0), 1.0, 50, 512).unwrap();
        let result = solve_scattering(&spec).unwrap();
        let r_l = result.reflectance_left();
        let r_r = result.reflectance_right();
        // lowest-order reflectance (k delta L)^2 with L = 50 pi
        let born = (1.0 * delta * 50.0 * PI).powi(2);
        assert!(r_l <= 1e-8, "suppressed side leaks: {r_l}");
        assert!(
            (r_r - born).abs() <= 0.05 * born,
            "R_R {r_r} vs lowest order {born}"
        );
        assert!(r_r / r_l.max(f64::MIN_POSITIVE) >= 1e3);
        assert!((result.transmittance() - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn balanced_sinusoidal_grating_reflects_only_one_way() {
        // e1 = e2 collapses the modulation onto exp(2 i beta z); probing
        // at k = beta leaves the left side dark
        let nu = 0.002;
        let spec = GratingSpec::new(sinusoidal(nu, nu, 1.0), 1.0, 25, 512).unwrap();
        let result = solve_scattering(&spec).unwrap();
        let r_l = result.reflectance_left();
        let r_r = result.reflectance_right();
        let born = (1.0 * 2.0 * nu * 25.0 * PI / 2.0).powi(2);
        assert!(r_l <= 1e-10, "suppressed side leaks: {r_l}");
        assert!((r_r - born).abs() <= 0.05 * born);
        assert!(r_r / r_l.max(f64::MIN_POSITIVE) >= 1e3);
        assert!((result.transmittance() - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn bragg_peak_sits_at_the_matched_wavenumber() {
        let profile = sinusoidal(0.2, 0.0, 1.0);
        let ks: Vec<f64> = (0..31).map(|i| 0.85 + 0.01 * i as f64).collect();
        let sweep = detuning_sweep(&profile, &ks, 8, 256).unwrap();
        assert_eq!(sweep.len(), ks.len());
        let peak = sweep
            .iter()
            .enumerate()
            .max_by(|a, b| {
                a.1.reflectance_left()
                    .partial_cmp(&b.1.reflectance_left())
                    .unwrap()
            })
            .map(|(i, _)| i)
            .unwrap();
        assert!(
            (ks[peak] - 1.0).abs() <= 0.02,
            "peak at k = {} instead of the modulation frequency",
            ks[peak]
        );
        let edge = sweep[0].reflectance_left().max(sweep[30].reflectance_left());
        assert!(sweep[peak].reflectance_left() > 2.0 * edge);
    }

    #[test]
    fn sweep_reports_the_failing_element() {
        let profile = plane_wave(0.5, 2.0);
        let err = detuning_sweep(&profile, &[1.0, 1.1, -1.0, 1.2], 2, 128).unwrap_err();
        match err {
            Error::SweepElement { index, source } => {
                assert_eq!(index, 2);
                assert!(matches!(*source, Error::NonPositiveWavenumber { .. }));
                assert_eq!(Error::SweepElement { index, source }.exit_code(), 2);
            }
            other => panic!("expected sweep element error, got {other:?}"),
        }
    }

    #[test]
    fn sweep_matches_elementwise_solves_exactly() {
        let profile = sinusoidal(0.3, 0.2, 1.0);
        let ks = [0.9, 1.0, 1.05];
        let sweep = detuning_sweep(&profile, &ks, 2, 128).unwrap();
        for (i, &k) in ks.iter().enumerate() {
            let single =
                solve_scattering(&GratingSpec::new(profile, k, 2, 128).unwrap()).unwrap();
            assert_eq!(sweep[i], single);
        }
        assert!(detuning_sweep(&profile, &[], 2, 128).unwrap().is_empty());
    }

    #[test]
    fn repeated_solves_are_bitwise_identical() {
        let spec = GratingSpec::new(sinusoidal(0.4, 0.3, 1.0), 1.07, 3, 256).unwrap();
        let first = solve_scattering(&spec).unwrap();
        let second = solve_scattering(&spec).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn spec_validation_rejects_bad_inputs() {
        let profile = plane_wave(0.1, 2.0);
        assert!(matches!(
            GratingSpec::new(profile, 0.0, 1, 128),
            Err(Error::NonPositiveWavenumber { .. })
        ));
        assert!(matches!(
            GratingSpec::new(profile, -2.0, 1, 128),
            Err(Error::NonPositiveWavenumber { .. })
        ));
        assert!(GratingSpec::new(profile, 1.0, 0, 128).is_err());
        assert!(GratingSpec::new(profile, 1.0, 1, 32).is_err());
    }
}
