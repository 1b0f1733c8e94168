//! Sampling grids and the two analytic refractive-index families.
//!
//! Both families describe a complex index of refraction that varies only
//! along the propagation axis z, relative to a real background:
//!
//! ```text
//! plane wave:   n(z) = n0 * (1 + v0 * exp(i b z))
//! sinusoidal:   n(z) = e0 + e1 cos(2 b z) + i e2 sin(2 b z)
//! ```
//!
//! With real parameters each family satisfies n(z) = conj(n(-z)) and is
//! periodic, with period 2 pi / |b| (plane wave) or pi / |b| (sinusoidal).
//! [`SusyParams`] carries the wavenumber, total energy and cut-off energy
//! that tie a profile to its superpotential; see [`crate::susy`] for the
//! matching conditions.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform grid on the closed interval [z_start, z_end]; both endpoints
/// are nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    z_start: f64,
    z_end: f64,
    count: usize,
}

impl Grid {
    /// At least two nodes, finite bounds, z_end strictly above z_start.
    pub fn new(z_start: f64, z_end: f64, count: usize) -> Result<Self> {
        if !z_start.is_finite() || !z_end.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "non-finite bounds [{z_start}, {z_end}]"
            )));
        }
        if z_end <= z_start {
            return Err(Error::InvalidGrid(format!(
                "z_end ({z_end}) must exceed z_start ({z_start})"
            )));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 nodes, got {count}"
            )));
        }
        Ok(Self {
            z_start,
            z_end,
            count,
        })
    }

    pub fn z_start(&self) -> f64 {
        self.z_start
    }

    pub fn z_end(&self) -> f64 {
        self.z_end
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> f64 {
        (self.z_end - self.z_start) / (self.count - 1) as f64
    }

    /// Node position; index must be below `count`.
    pub fn node(&self, index: usize) -> f64 {
        debug_assert!(index < self.count);
        self.z_start + index as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.node(i))
    }

    /// Same window with the spacing divided by `factor`.
    pub fn refined(&self, factor: usize) -> Grid {
        assert!(factor >= 1);
        Grid {
            z_start: self.z_start,
            z_end: self.z_end,
            count: (self.count - 1) * factor + 1,
        }
    }

    /// Same window keeping every `stride`-th node; requires the interval
    /// count to be divisible by `stride`.
    pub fn strided(&self, stride: usize) -> Result<Grid> {
        if stride == 0 || (self.count - 1) % stride != 0 {
            return Err(Error::InvalidGrid(format!(
                "{} intervals cannot be strided by {stride}",
                self.count - 1
            )));
        }
        Ok(Grid {
            z_start: self.z_start,
            z_end: self.z_end,
            count: (self.count - 1) / stride + 1,
        })
    }

    /// True when the window is symmetric about z = 0 (within 1e-12).
    pub fn is_symmetric(&self) -> bool {
        (self.z_start + self.z_end).abs() <= 1e-12
    }
}

/// Complex samples attached to the grid they were taken on.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    values: Vec<Complex64>,
}

impl ComplexField {
    /// Wrap existing samples; the length must match the grid and every
    /// value must be finite.
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(Error::InvalidField(format!(
                "{} values on a {}-node grid",
                values.len(),
                grid.count()
            )));
        }
        if let Some(i) = values
            .iter()
            .position(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::InvalidField(format!(
                "non-finite value at node {i}"
            )));
        }
        Ok(Self { grid, values })
    }

    /// Sample a function at every node.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes().map(f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, index: usize) -> Complex64 {
        self.values[index]
    }

    /// Keep every `stride`-th sample on the correspondingly strided grid.
    pub fn strided(&self, stride: usize) -> Result<ComplexField> {
        let grid = self.grid.strided(stride)?;
        let values = self.values.iter().copied().step_by(stride).collect();
        Ok(ComplexField { grid, values })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Plane-wave modulated index n(z) = n0 (1 + v0 exp(i b z)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveProfile {
    pub n0: f64,
    pub v0: f64,
    pub beta: f64,
}

impl PlaneWaveProfile {
    /// Positive background, nonzero spatial frequency, finite amplitude.
    pub fn new(n0: f64, v0: f64, beta: f64) -> Result<Self> {
        if !(n0.is_finite() && n0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "n0",
                message: format!("background index must be positive, got {n0}"),
            });
        }
        if !v0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "v0",
                message: format!("amplitude must be finite, got {v0}"),
            });
        }
        if !(beta.is_finite() && beta != 0.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                message: format!("spatial frequency must be nonzero, got {beta}"),
            });
        }
        Ok(Self { n0, v0, beta })
    }

    pub fn index(&self, z: f64) -> Complex64 {
        let phase = Complex64::from_polar(1.0, self.beta * z);
        self.n0 * (1.0 + self.v0 * phase)
    }

    /// Isospectral partner index n0 (1 - v0 exp(i b z)).
    pub fn partner_index(&self, z: f64) -> Complex64 {
        let phase = Complex64::from_polar(1.0, self.beta * z);
        self.n0 * (1.0 - self.v0 * phase)
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.beta.abs()
    }

    /// Largest relative modulation |n/n0 - 1| over one period.
    pub fn max_modulation(&self) -> f64 {
        self.v0.abs()
    }
}

/// Sinusoidal grating index n(z) = e0 + e1 cos(2 b z) + i e2 sin(2 b z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinusoidalProfile {
    pub eta0: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub beta: f64,
}

impl SinusoidalProfile {
    /// Positive background, nonzero spatial frequency, finite amplitudes.
    pub fn new(eta0: f64, eta1: f64, eta2: f64, beta: f64) -> Result<Self> {
        if !(eta0.is_finite() && eta0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "eta0",
                message: format!("background index must be positive, got {eta0}"),
            });
        }
        if !eta1.is_finite() || !eta2.is_finite() {
            return Err(Error::InvalidParameter {
                name: "eta1/eta2",
                message: format!("amplitudes must be finite, got {eta1}, {eta2}"),
            });
        }
        if !(beta.is_finite() && beta != 0.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                message: format!("spatial frequency must be nonzero, got {beta}"),
            });
        }
        Ok(Self {
            eta0,
            eta1,
            eta2,
            beta,
        })
    }

    pub fn index(&self, z: f64) -> Complex64 {
        let (s, c) = (2.0 * self.beta * z).sin_cos();
        Complex64::new(self.eta0 + self.eta1 * c, self.eta2 * s)
    }

    /// Isospectral partner index e0 - e1 cos(2 b z) - i e2 sin(2 b z).
    pub fn partner_index(&self, z: f64) -> Complex64 {
        let (s, c) = (2.0 * self.beta * z).sin_cos();
        Complex64::new(self.eta0 - self.eta1 * c, -self.eta2 * s)
    }

    pub fn period(&self) -> f64 {
        std::f64::consts::PI / self.beta.abs()
    }

    /// Relative cosine amplitude e1 / e0.
    pub fn nu1(&self) -> f64 {
        self.eta1 / self.eta0
    }

    /// Relative sine amplitude e2 / e0.
    pub fn nu2(&self) -> f64 {
        self.eta2 / self.eta0
    }

    /// Largest relative modulation |n/e0 - 1| over one period.
    pub fn max_modulation(&self) -> f64 {
        self.nu1().abs().max(self.nu2().abs())
    }
}

/// Either analytic family behind one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    PlaneWave(PlaneWaveProfile),
    Sinusoidal(SinusoidalProfile),
}

impl Profile {
    pub fn index(&self, z: f64) -> Complex64 {
        match self {
            Profile::PlaneWave(p) => p.index(z),
            Profile::Sinusoidal(p) => p.index(z),
        }
    }

    pub fn partner_index(&self, z: f64) -> Complex64 {
        match self {
            Profile::PlaneWave(p) => p.partner_index(z),
            Profile::Sinusoidal(p) => p.partner_index(z),
        }
    }

    /// Real background the modulation rides on (n0 or e0).
    pub fn background(&self) -> f64 {
        match self {
            Profile::PlaneWave(p) => p.n0,
            Profile::Sinusoidal(p) => p.eta0,
        }
    }

    pub fn period(&self) -> f64 {
        match self {
            Profile::PlaneWave(p) => p.period(),
            Profile::Sinusoidal(p) => p.period(),
        }
    }

    pub fn beta(&self) -> f64 {
        match self {
            Profile::PlaneWave(p) => p.beta,
            Profile::Sinusoidal(p) => p.beta,
        }
    }

    pub fn max_modulation(&self) -> f64 {
        match self {
            Profile::PlaneWave(p) => p.max_modulation(),
            Profile::Sinusoidal(p) => p.max_modulation(),
        }
    }

    pub fn sample(&self, grid: &Grid) -> ComplexField {
        ComplexField::from_fn(*grid, |z| self.index(z))
    }

    pub fn sample_partner(&self, grid: &Grid) -> ComplexField {
        ComplexField::from_fn(*grid, |z| self.partner_index(z))
    }
}

/// Wavenumber k, total energy epsilon and cut-off energy lambda of the
/// factorised wave problem. The matched combinations per family are
/// checked when a superpotential is built, not here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SusyParams {
    pub k: f64,
    pub epsilon: f64,
    pub lambda: f64,
}

impl SusyParams {
    /// k must be real, finite and nonzero; energies finite.
    pub fn new(k: f64, epsilon: f64, lambda: f64) -> Result<Self> {
        if !(k.is_finite() && k != 0.0) {
            return Err(Error::InvalidParameter {
                name: "k",
                message: format!("wavenumber must be nonzero, got {k}"),
            });
        }
        if !epsilon.is_finite() || !lambda.is_finite() {
            return Err(Error::InvalidParameter {
                name: "epsilon/lambda",
                message: format!("energies must be finite, got {epsilon}, {lambda}"),
            });
        }
        Ok(Self { k, epsilon, lambda })
    }

    /// Matched parameters for a profile: k follows the profile frequency
    /// (k = beta/2 for the plane-wave family, k = beta for the sinusoidal
    /// one) and epsilon is fixed by the family energy relation.
    pub fn matched(profile: &Profile, lambda: f64) -> Result<Self> {
        match profile {
            Profile::PlaneWave(p) => {
                let k = p.beta / 2.0;
                Self::new(k, k * k + lambda, lambda)
            }
            Profile::Sinusoidal(p) => {
                let k = p.beta;
                let (nu1, nu2) = (p.nu1(), p.nu2());
                Self::new(k, k * k * (1.0 + nu1 * nu1 - nu2 * nu2) + lambda, lambda)
            }
        }
    }
}

/// Sample an index profile on a grid.
pub fn sample(profile: &Profile, grid: &Grid) -> ComplexField {
    profile.sample(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_rejects_bad_bounds_and_counts() {
        assert!(Grid::new(0.0, 1.0, 1).is_err());
        assert!(Grid::new(1.0, 1.0, 10).is_err());
        assert!(Grid::new(2.0, 1.0, 10).is_err());
        assert!(Grid::new(f64::NAN, 1.0, 10).is_err());
        assert!(Grid::new(0.0, 1.0, 2).is_ok());
    }

    #[test]
    fn grid_nodes_cover_the_window() {
        let g = Grid::new(0.0, PI, 5).unwrap();
        assert_eq!(g.spacing(), PI / 4.0);
        assert_eq!(g.node(0), 0.0);
        assert!((g.node(4) - PI).abs() < 1e-15);
        assert_eq!(g.nodes().count(), 5);
    }

    #[test]
    fn grid_refine_and_stride_are_inverse() {
        let g = Grid::new(-1.0, 1.0, 101).unwrap();
        let fine = g.refined(4);
        assert_eq!(fine.count(), 401);
        let back = fine.strided(4).unwrap();
        assert_eq!(back, g);
        assert!(fine.strided(3).is_err());
    }

    #[test]
    fn field_checks_length_and_finiteness() {
        let g = Grid::new(0.0, 1.0, 3).unwrap();
        assert!(ComplexField::new(g, vec![c(0.0, 0.0); 2]).is_err());
        assert!(ComplexField::new(g, vec![c(0.0, 0.0), c(f64::NAN, 0.0), c(1.0, 0.0)]).is_err());
        assert!(ComplexField::new(g, vec![c(0.0, 0.0); 3]).is_ok());
    }

    #[test]
    fn plane_wave_known_values() {
        let p = PlaneWaveProfile::new(1.0, 1.0, 2.0).unwrap();
        assert!((p.index(0.0) - c(2.0, 0.0)).norm() < 1e-15);
        assert!((p.index(PI / 4.0) - c(1.0, 1.0)).norm() < 1e-15);
        let strong = PlaneWaveProfile::new(1.0, 10.0, 2.0).unwrap();
        assert!((strong.index(0.0) - c(11.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn sinusoidal_known_values() {
        let p = SinusoidalProfile::new(1.0, 4.0, 2.0, 1.0).unwrap();
        assert!((p.index(0.0) - c(5.0, 0.0)).norm() < 1e-15);
        assert!((p.index(PI / 4.0) - c(1.0, 2.0)).norm() < 1e-14);
        // constant background when both modulation amplitudes vanish
        let flat = SinusoidalProfile::new(2.0, 0.0, 0.0, 1.0).unwrap();
        assert!((flat.index(7.3) - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn partner_known_values() {
        let p = PlaneWaveProfile::new(1.0, 10.0, 2.0).unwrap();
        assert!((p.partner_index(0.0) - c(-9.0, 0.0)).norm() < 1e-14);
        let s = SinusoidalProfile::new(1.0, 4.0, 2.0, 1.0).unwrap();
        assert!((s.partner_index(0.0) - c(-3.0, 0.0)).norm() < 1e-14);
        // zero modulation collapses the partner onto the background
        let flat = PlaneWaveProfile::new(1.0, 0.0, 2.0).unwrap();
        assert!((flat.partner_index(0.3) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sampling_matches_direct_evaluation_exactly() {
        let p = Profile::PlaneWave(PlaneWaveProfile::new(1.0, 1.0, 2.0).unwrap());
        let grid = Grid::new(0.0, PI, 201).unwrap();
        let field = sample(&p, &grid);
        for (i, z) in grid.nodes().enumerate() {
            assert_eq!(field.value(i), p.index(z));
        }
        // interior zero of the modulated profile at z = pi/2
        let three = sample(&p, &Grid::new(0.0, PI, 3).unwrap());
        assert!(three.value(1).norm() < 1e-15);
    }

    #[test]
    fn profile_rejects_bad_parameters() {
        assert!(PlaneWaveProfile::new(0.0, 1.0, 2.0).is_err());
        assert!(PlaneWaveProfile::new(-1.0, 1.0, 2.0).is_err());
        assert!(PlaneWaveProfile::new(1.0, 1.0, 0.0).is_err());
        assert!(SinusoidalProfile::new(1.0, f64::INFINITY, 0.0, 1.0).is_err());
        assert!(SusyParams::new(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn matched_params_follow_the_family_energy_relations() {
        let a = Profile::PlaneWave(PlaneWaveProfile::new(1.0, 1.0, 2.0).unwrap());
        let sp = SusyParams::matched(&a, 0.0).unwrap();
        assert_eq!(sp.k, 1.0);
        assert_eq!(sp.epsilon, 1.0);

        let b = Profile::Sinusoidal(SinusoidalProfile::new(1.0, 4.0, 2.0, 1.0).unwrap());
        let sp = SusyParams::matched(&b, 0.0).unwrap();
        assert_eq!(sp.k, 1.0);
        assert!((sp.epsilon - 13.0).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn plane_wave_is_periodic(
            v0 in 0.1f64..10.0,
            beta in 0.5f64..5.0,
            z in -10.0f64..10.0,
        ) {
            let p = PlaneWaveProfile::new(1.0, v0, beta).unwrap();
            let a = p.index(z);
            let b = p.index(z + p.period());
            let scale = a.norm().max(1.0);
            prop_assert!((a - b).norm() / scale < 1e-12);
        }

        #[test]
        fn sinusoidal_is_periodic(
            eta1 in 0.1f64..10.0,
            eta2 in 0.1f64..10.0,
            beta in 0.5f64..5.0,
            z in -10.0f64..10.0,
        ) {
            let p = SinusoidalProfile::new(1.0, eta1, eta2, beta).unwrap();
            let a = p.index(z);
            let b = p.index(z + p.period());
            let scale = a.norm().max(1.0);
            prop_assert!((a - b).norm() / scale < 1e-12);
        }

        #[test]
        fn modulation_vanishes_toward_background(
            beta in 0.5f64..5.0,
            z in -10.0f64..10.0,
        ) {
            let p = PlaneWaveProfile::new(1.5, 0.0, beta).unwrap();
            prop_assert!((p.index(z) - Complex64::new(1.5, 0.0)).norm() < 1e-15);
        }
    }
}
