//! Superpotential construction and the Riccati partner identities.
//!
//! The complex superpotential W = f + i g factorises the wave operator.
//! Its partner potentials and the index profiles they descend from obey
//!
//! ```text
//! V+-(z) = W(z)^2 +- W'(z) + lambda
//! k^2 (n+-(z) / n_bg)^2 = epsilon - lambda - (W(z)^2 +- W'(z))
//! n+(z) + n-(z) = 2 n_bg
//! ```
//!
//! where the upper sign belongs to the input profile n+ and the lower
//! sign to its isospectral partner n-. Closure of these identities pins
//! the matching conditions per family:
//!
//! * plane wave: beta = +-2k, k^2 = epsilon - lambda, and
//!   f = -(beta v0 / 2) sin(beta z), g = (beta v0 / 2) cos(beta z);
//! * sinusoidal: beta = +-k, epsilon - lambda = k^2 (1 + nu1^2 - nu2^2),
//!   and f = -nu1 beta sin(2 beta z), g = nu2 beta cos(2 beta z),
//!   with nu1 = e1/e0, nu2 = e2/e0.
//!
//! Both superpotentials share the shape f = F sin(m beta z),
//! g = G cos(m beta z) with harmonic m = 1 (plane wave) or 2 (sinusoidal),
//! which gives closed forms for the derivative and the antiderivative.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::profiles::{ComplexField, Grid, PlaneWaveProfile, Profile, SinusoidalProfile, SusyParams};

/// Relative tolerance on the family matching conditions.
pub const MATCHING_TOLERANCE: f64 = 1e-12;

/// Max-abs tolerance on the Riccati identity residual over a grid.
pub const RICCATI_TOLERANCE: f64 = 1e-10;

/// Max-abs tolerance on the partner index sum identity.
pub const PARTNER_SUM_TOLERANCE: f64 = 1e-12;

/// Which analytic family a superpotential was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuperpotentialFamily {
    PlaneWave,
    Sinusoidal,
}

impl SuperpotentialFamily {
    /// Harmonic multiplier m in sin(m beta z) / cos(m beta z).
    pub fn harmonic(self) -> f64 {
        match self {
            SuperpotentialFamily::PlaneWave => 1.0,
            SuperpotentialFamily::Sinusoidal => 2.0,
        }
    }
}

/// W(z) = F sin(m beta z) + i G cos(m beta z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superpotential {
    pub family: SuperpotentialFamily,
    pub f_amplitude: f64,
    pub g_amplitude: f64,
    pub beta: f64,
}

impl Superpotential {
    /// Superpotential of a matched plane-wave profile.
    pub fn plane_wave(profile: &PlaneWaveProfile, params: &SusyParams) -> Result<Self> {
        check_plane_wave_matching(profile, params)?;
        let half = profile.beta * profile.v0 / 2.0;
        Ok(Self {
            family: SuperpotentialFamily::PlaneWave,
            f_amplitude: -half,
            g_amplitude: half,
            beta: profile.beta,
        })
    }

    /// Superpotential of a matched sinusoidal profile.
    pub fn sinusoidal(profile: &SinusoidalProfile, params: &SusyParams) -> Result<Self> {
        check_sinusoidal_matching(profile, params)?;
        Ok(Self {
            family: SuperpotentialFamily::Sinusoidal,
            f_amplitude: -profile.nu1() * profile.beta,
            g_amplitude: profile.nu2() * profile.beta,
            beta: profile.beta,
        })
    }

    /// Assemble from raw amplitudes without any matching validation;
    /// intended for diagnostics that probe deliberately inconsistent
    /// configurations.
    pub fn from_parts(
        family: SuperpotentialFamily,
        f_amplitude: f64,
        g_amplitude: f64,
        beta: f64,
    ) -> Self {
        Self {
            family,
            f_amplitude,
            g_amplitude,
            beta,
        }
    }

    /// Value and analytic derivative at z.
    pub fn eval(&self, z: f64) -> (Complex64, Complex64) {
        let m = self.family.harmonic();
        let (s, c) = (m * self.beta * z).sin_cos();
        let w = Complex64::new(self.f_amplitude * s, self.g_amplitude * c);
        let w_prime = m * self.beta * Complex64::new(self.f_amplitude * c, -self.g_amplitude * s);
        (w, w_prime)
    }

    pub fn value(&self, z: f64) -> Complex64 {
        self.eval(z).0
    }

    pub fn derivative(&self, z: f64) -> Complex64 {
        self.eval(z).1
    }

    /// Closed-form antiderivative of W, fixed up to a constant.
    pub fn antiderivative(&self, z: f64) -> Complex64 {
        let m = self.family.harmonic();
        let (s, c) = (m * self.beta * z).sin_cos();
        Complex64::new(-self.f_amplitude * c, self.g_amplitude * s) / (m * self.beta)
    }

    /// Sign-flipped superpotential -W, which swaps the two partners.
    pub fn negated(&self) -> Self {
        Self {
            f_amplitude: -self.f_amplitude,
            g_amplitude: -self.g_amplitude,
            ..*self
        }
    }
}

impl Profile {
    /// Family-dispatched superpotential construction; validates the
    /// matching conditions of the concrete family.
    pub fn superpotential(&self, params: &SusyParams) -> Result<Superpotential> {
        match self {
            Profile::PlaneWave(p) => Superpotential::plane_wave(p, params),
            Profile::Sinusoidal(p) => Superpotential::sinusoidal(p, params),
        }
    }
}

fn relative_deviation(actual: f64, target: f64) -> f64 {
    let scale = actual.abs().max(target.abs());
    if scale == 0.0 {
        0.0
    } else {
        (actual - target).abs() / scale
    }
}

fn check_plane_wave_matching(profile: &PlaneWaveProfile, params: &SusyParams) -> Result<()> {
    let beta_dev = relative_deviation(profile.beta.abs(), 2.0 * params.k.abs());
    if beta_dev > MATCHING_TOLERANCE {
        return Err(Error::MatchingConditionViolated {
            relation: format!(
                "|beta| = 2|k| (beta = {}, k = {})",
                profile.beta, params.k
            ),
            deviation: beta_dev,
        });
    }
    let target = params.epsilon - params.lambda;
    let energy_dev = relative_deviation(params.k * params.k, target);
    if energy_dev > MATCHING_TOLERANCE {
        return Err(Error::EnergyMismatch {
            relation: format!(
                "k^2 = epsilon - lambda (k^2 = {}, epsilon - lambda = {})",
                params.k * params.k,
                target
            ),
            deviation: energy_dev,
        });
    }
    Ok(())
}

fn check_sinusoidal_matching(profile: &SinusoidalProfile, params: &SusyParams) -> Result<()> {
    let beta_dev = relative_deviation(profile.beta.abs(), params.k.abs());
    if beta_dev > MATCHING_TOLERANCE {
        return Err(Error::MatchingConditionViolated {
            relation: format!("|beta| = |k| (beta = {}, k = {})", profile.beta, params.k),
            deviation: beta_dev,
        });
    }
    let (nu1, nu2) = (profile.nu1(), profile.nu2());
    let expected = params.k * params.k * (1.0 + nu1 * nu1 - nu2 * nu2);
    let target = params.epsilon - params.lambda;
    let energy_dev = relative_deviation(expected, target);
    if energy_dev > MATCHING_TOLERANCE {
        return Err(Error::EnergyMismatch {
            relation: format!(
                "epsilon - lambda = k^2 (1 + nu1^2 - nu2^2) ({} vs {})",
                target, expected
            ),
            deviation: energy_dev,
        });
    }
    Ok(())
}

/// Upper or lower sign in W^2 +- W'.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialSign {
    Plus,
    Minus,
}

impl PotentialSign {
    pub fn factor(self) -> f64 {
        match self {
            PotentialSign::Plus => 1.0,
            PotentialSign::Minus => -1.0,
        }
    }
}

/// Both partner potentials V+- = W^2 +- W' + lambda sampled on a grid,
/// returned as (V+, V-).
pub fn partner_potentials(
    w: &Superpotential,
    params: &SusyParams,
    grid: &Grid,
) -> (ComplexField, ComplexField) {
    let lambda = Complex64::from(params.lambda);
    let mut plus = Vec::with_capacity(grid.count());
    let mut minus = Vec::with_capacity(grid.count());
    for z in grid.nodes() {
        let (wv, wp) = w.eval(z);
        let w2 = wv * wv;
        plus.push(w2 + wp + lambda);
        minus.push(w2 - wp + lambda);
    }
    (
        ComplexField::new(*grid, plus).expect("analytic potential samples are finite"),
        ComplexField::new(*grid, minus).expect("analytic potential samples are finite"),
    )
}

/// Closed-form partner index n- sampled on a grid. Fails when the profile
/// and parameters are not a matched pair.
pub fn partner_index_minus(
    profile: &Profile,
    params: &SusyParams,
    grid: &Grid,
) -> Result<ComplexField> {
    profile.superpotential(params)?;
    Ok(profile.sample_partner(grid))
}

/// Max-abs / rms summary of a pointwise identity residual.
#[derive(Debug, Clone, Copy)]
pub struct ResidualReport {
    pub max_abs_residual: f64,
    pub rms_residual: f64,
    /// Node position where the largest residual occurred.
    pub location_of_max: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    fn from_samples(samples: impl Iterator<Item = (f64, f64)>, tolerance: f64) -> Self {
        let mut max_abs = 0.0f64;
        let mut location = 0.0f64;
        let mut sum_sq = 0.0f64;
        let mut count = 0usize;
        for (z, r) in samples {
            if r > max_abs {
                max_abs = r;
                location = z;
            }
            sum_sq += r * r;
            count += 1;
        }
        let rms = if count == 0 {
            0.0
        } else {
            (sum_sq / count as f64).sqrt()
        };
        ResidualReport {
            max_abs_residual: max_abs,
            rms_residual: rms,
            location_of_max: location,
            tolerance,
            pass: max_abs <= tolerance,
        }
    }
}

/// Residual of the index identity
/// k^2 (n/n_bg)^2 - (epsilon - lambda - (W^2 +- W')) over a grid, with
/// `Plus` checking the input profile n+ and `Minus` its partner n-.
pub fn riccati_residual(
    profile: &Profile,
    w: &Superpotential,
    params: &SusyParams,
    sign: PotentialSign,
    grid: &Grid,
) -> ResidualReport {
    let k2 = params.k * params.k;
    let background = profile.background();
    let offset = Complex64::from(params.epsilon - params.lambda);
    let samples = grid.nodes().map(|z| {
        let n = match sign {
            PotentialSign::Plus => profile.index(z),
            PotentialSign::Minus => profile.partner_index(z),
        };
        let ratio = n / background;
        let (wv, wp) = w.eval(z);
        let rhs = offset - (wv * wv + sign.factor() * wp);
        (z, (k2 * ratio * ratio - rhs).norm())
    });
    ResidualReport::from_samples(samples, RICCATI_TOLERANCE)
}

/// Residual of the equivalent potential route
/// V+ - (epsilon - k^2 (n+/n_bg)^2), which ties the sampled potential to
/// the index profile it came from.
pub fn index_potential_consistency(
    profile: &Profile,
    w: &Superpotential,
    params: &SusyParams,
    grid: &Grid,
) -> ResidualReport {
    let k2 = params.k * params.k;
    let background = profile.background();
    let epsilon = Complex64::from(params.epsilon);
    let lambda = Complex64::from(params.lambda);
    let samples = grid.nodes().map(|z| {
        let (wv, wp) = w.eval(z);
        let v_plus = wv * wv + wp + lambda;
        let ratio = profile.index(z) / background;
        (z, (v_plus - (epsilon - k2 * ratio * ratio)).norm())
    });
    ResidualReport::from_samples(samples, RICCATI_TOLERANCE)
}

/// A matched profile with its partner index and both partner potentials,
/// all sampled on one grid.
#[derive(Debug, Clone)]
pub struct PartnerSet {
    pub n_plus: ComplexField,
    pub n_minus: ComplexField,
    pub v_plus: ComplexField,
    pub v_minus: ComplexField,
    pub params: SusyParams,
    /// Background index shared by both partners.
    pub background: f64,
}

/// Build the full partner set for a matched profile.
pub fn build_partner_set(
    profile: &Profile,
    params: &SusyParams,
    grid: &Grid,
) -> Result<PartnerSet> {
    let w = profile.superpotential(params)?;
    let (v_plus, v_minus) = partner_potentials(&w, params, grid);
    Ok(PartnerSet {
        n_plus: profile.sample(grid),
        n_minus: profile.sample_partner(grid),
        v_plus,
        v_minus,
        params: *params,
        background: profile.background(),
    })
}

/// Residual of the superposition identity n+ + n- = 2 n_bg.
pub fn partner_sum_check(set: &PartnerSet) -> ResidualReport {
    let target = Complex64::from(2.0 * set.background);
    let grid = set.n_plus.grid();
    let samples = (0..set.n_plus.len()).map(|i| {
        let sum = set.n_plus.value(i) + set.n_minus.value(i);
        (grid.node(i), (sum - target).norm())
    });
    ResidualReport::from_samples(samples, PARTNER_SUM_TOLERANCE)
}
