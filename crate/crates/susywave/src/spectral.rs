//! Finite-difference operators and the discrete factorisation checks.
//!
//! The two partner Hamiltonians and the ladder operator are discretised
//! on uniform grids:
//!
//! ```text
//! H+- psi = -D2 psi + (V+- - lambda) psi
//! O psi   = D1 psi + W psi
//! ```
//!
//! The continuum identities O psi0 = 0 (with psi0 = exp(-int W)) and
//! O H- = H+ O then hold up to discretisation error, which must shrink
//! at the order of the chosen stencil. Residual norms are taken over
//! interior nodes only, where the full centered stencil fits; the
//! convergence reports expose the observed order of that decay.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::profiles::{ComplexField, Grid};
use crate::susy::Superpotential;

/// Formal accuracy order of the centered difference stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilOrder {
    Second,
    Fourth,
}

impl StencilOrder {
    pub fn order(self) -> f64 {
        match self {
            StencilOrder::Second => 2.0,
            StencilOrder::Fourth => 4.0,
        }
    }

    /// Nodes needed on each side of the center.
    pub fn halfwidth(self) -> usize {
        match self {
            StencilOrder::Second => 1,
            StencilOrder::Fourth => 2,
        }
    }
}

/// Boundary treatment of the discrete Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Values beyond the window are taken as zero.
    Dirichlet,
    /// The window is one period; the last node is identified with the
    /// first.
    Periodic,
}

/// A discrete Hamiltonian -D2 + diag(V) - lambda.
#[derive(Debug, Clone)]
pub struct DiscreteOperatorSpec {
    pub grid: Grid,
    pub potential: ComplexField,
    pub lambda: f64,
    pub stencil_order: StencilOrder,
    pub boundary: Boundary,
}

impl DiscreteOperatorSpec {
    pub fn new(
        potential: ComplexField,
        lambda: f64,
        stencil_order: StencilOrder,
        boundary: Boundary,
    ) -> Result<Self> {
        let grid = potential.grid();
        if boundary == Boundary::Periodic {
            if grid.count() - 1 <= 2 * stencil_order.halfwidth() {
                return Err(Error::InvalidGrid(format!(
                    "{} nodes are too few for a periodic stencil of halfwidth {}",
                    grid.count(),
                    stencil_order.halfwidth()
                )));
            }
            let first = potential.value(0);
            let last = potential.value(potential.len() - 1);
            let dev = (first - last).norm();
            if dev > 1e-10 * first.norm().max(1.0) {
                return Err(Error::InvalidField(format!(
                    "potential is not periodic on the window: |V(start) - V(end)| = {dev:.3e}"
                )));
            }
        }
        Ok(Self {
            grid,
            potential,
            lambda,
            stencil_order,
            boundary,
        })
    }
}

/// First-derivative scheme used internally; `Six` backs the solution
/// mapping, where the derivative must stay more accurate than the
/// Hamiltonian stencil it is measured with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum D1Scheme {
    Two,
    Four,
    Six,
}

impl D1Scheme {
    fn halfwidth(self) -> usize {
        match self {
            D1Scheme::Two => 1,
            D1Scheme::Four => 2,
            D1Scheme::Six => 3,
        }
    }

    fn of(stencil: StencilOrder) -> Self {
        match stencil {
            StencilOrder::Second => D1Scheme::Two,
            StencilOrder::Fourth => D1Scheme::Four,
        }
    }

    /// Two orders above the given measurement stencil.
    fn above(stencil: StencilOrder) -> Self {
        match stencil {
            StencilOrder::Second => D1Scheme::Four,
            StencilOrder::Fourth => D1Scheme::Six,
        }
    }
}

/// Centered first derivative where the stencil fits, with progressively
/// narrower centered stencils toward the ends and one-sided second-order
/// formulas at the ends themselves.
fn d1(values: &[Complex64], h: f64, scheme: D1Scheme) -> Vec<Complex64> {
    let n = values.len();
    assert!(n >= 3, "derivative needs at least 3 nodes");
    let hw = scheme.halfwidth();
    let mut out = vec![Complex64::default(); n];
    for i in 0..n {
        out[i] = if i >= hw && i + hw < n {
            match scheme {
                D1Scheme::Two => (values[i + 1] - values[i - 1]) / (2.0 * h),
                D1Scheme::Four => {
                    (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2])
                        / (12.0 * h)
                }
                D1Scheme::Six => {
                    (-values[i - 3] + 9.0 * values[i - 2] - 45.0 * values[i - 1]
                        + 45.0 * values[i + 1]
                        - 9.0 * values[i + 2]
                        + values[i + 3])
                        / (60.0 * h)
                }
            }
        } else if i >= 2 && i + 2 < n {
            (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2])
                / (12.0 * h)
        } else if i >= 1 && i + 1 < n {
            (values[i + 1] - values[i - 1]) / (2.0 * h)
        } else if i == 0 {
            (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h)
        } else {
            (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h)
        };
    }
    out
}

/// Centered second derivative with one-sided fallbacks at the ends,
/// mirroring [`d1`].
fn d2_interior(values: &[Complex64], h: f64, order: StencilOrder) -> Vec<Complex64> {
    let n = values.len();
    assert!(n >= 4, "second derivative needs at least 4 nodes");
    let h2 = h * h;
    let mut out = vec![Complex64::default(); n];
    for i in 0..n {
        out[i] = if order == StencilOrder::Fourth && i >= 2 && i + 2 < n {
            (-values[i - 2] + 16.0 * values[i - 1] - 30.0 * values[i] + 16.0 * values[i + 1]
                - values[i + 2])
                / (12.0 * h2)
        } else if i >= 1 && i + 1 < n {
            (values[i - 1] - 2.0 * values[i] + values[i + 1]) / h2
        } else if i == 0 {
            (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / h2
        } else {
            (2.0 * values[n - 1] - 5.0 * values[n - 2] + 4.0 * values[n - 3] - values[n - 4]) / h2
        };
    }
    out
}

/// Second derivative under the boundary rule of a Hamiltonian spec.
fn d2_boundary(values: &[Complex64], h: f64, order: StencilOrder, boundary: Boundary) -> Vec<Complex64> {
    let n = values.len();
    let h2 = h * h;
    let fetch = |j: isize| -> Complex64 {
        match boundary {
            Boundary::Dirichlet => {
                if j < 0 || j >= n as isize {
                    Complex64::default()
                } else {
                    values[j as usize]
                }
            }
            Boundary::Periodic => {
                let m = (n - 1) as isize;
                values[j.rem_euclid(m) as usize]
            }
        }
    };
    let limit = match boundary {
        Boundary::Dirichlet => n,
        Boundary::Periodic => n - 1,
    };
    let mut out = vec![Complex64::default(); n];
    for i in 0..limit {
        let j = i as isize;
        out[i] = match order {
            StencilOrder::Second => (fetch(j - 1) - 2.0 * fetch(j) + fetch(j + 1)) / h2,
            StencilOrder::Fourth => {
                (-fetch(j - 2) + 16.0 * fetch(j - 1) - 30.0 * fetch(j) + 16.0 * fetch(j + 1)
                    - fetch(j + 2))
                    / (12.0 * h2)
            }
        };
    }
    if boundary == Boundary::Periodic {
        out[n - 1] = out[0];
    }
    out
}

fn interior_max_abs(values: &[Complex64], margin: usize) -> f64 {
    let n = values.len();
    assert!(2 * margin < n, "margin {margin} leaves no interior in {n} nodes");
    values[margin..n - margin]
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
}

/// Apply -D2 + diag(V) - lambda to a field on the same grid.
pub fn apply_hamiltonian(spec: &DiscreteOperatorSpec, psi: &ComplexField) -> Result<ComplexField> {
    if psi.grid() != spec.grid {
        return Err(Error::GridMismatch(
            "state and Hamiltonian live on different grids".into(),
        ));
    }
    let d2 = d2_boundary(
        psi.values(),
        spec.grid.spacing(),
        spec.stencil_order,
        spec.boundary,
    );
    let lambda = Complex64::from(spec.lambda);
    let values = (0..psi.len())
        .map(|i| -d2[i] + (spec.potential.value(i) - lambda) * psi.value(i))
        .collect();
    ComplexField::new(spec.grid, values)
}

/// Nodal ground state psi0(z) = exp(-int_{z_start}^{z} W dt), normalised
/// to one at the first node, from the closed-form antiderivative of W.
pub fn ground_state(w: &Superpotential, grid: &Grid) -> ComplexField {
    let start = w.antiderivative(grid.z_start());
    ComplexField::from_fn(*grid, |z| (-(w.antiderivative(z) - start)).exp())
}

/// Interior max-abs residual of (-D2 + diag(V) - lambda - E) psi, i.e.
/// how far psi is from an eigenstate at energy E. `margin` widens the
/// boundary exclusion zone beyond the stencil halfwidth; pass 0 for the
/// minimum.
pub fn eigen_residual(
    potential: &ComplexField,
    lambda: f64,
    psi: &ComplexField,
    energy: f64,
    stencil_order: StencilOrder,
    margin: usize,
) -> Result<f64> {
    if psi.grid() != potential.grid() {
        return Err(Error::GridMismatch(
            "state and potential live on different grids".into(),
        ));
    }
    let h = psi.grid().spacing();
    let d2 = d2_interior(psi.values(), h, stencil_order);
    let shift = Complex64::from(lambda + energy);
    let residual: Vec<Complex64> = (0..psi.len())
        .map(|i| -d2[i] + (potential.value(i) - shift) * psi.value(i))
        .collect();
    Ok(interior_max_abs(
        &residual,
        margin.max(stencil_order.halfwidth()),
    ))
}

/// Residual norms across a sequence of grid refinements plus the
/// least-squares slope of log(residual) against log(spacing).
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub spacings: Vec<f64>,
    pub residual_norms: Vec<f64>,
    pub estimated_order: f64,
}

impl ConvergenceReport {
    pub fn finest_residual(&self) -> f64 {
        *self.residual_norms.last().expect("at least one level")
    }

    pub fn order_within(&self, nominal: f64, window: f64) -> bool {
        (self.estimated_order - nominal).abs() <= window
    }
}

/// Least-squares slope of ln(residual) vs ln(h). Exact zeros are floored
/// at the smallest positive double, so an identically zero sequence
/// reports slope 0 rather than a non-finite value.
fn fit_order(spacings: &[f64], norms: &[f64]) -> f64 {
    assert_eq!(spacings.len(), norms.len());
    let xs: Vec<f64> = spacings.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = norms
        .iter()
        .map(|r| r.max(f64::MIN_POSITIVE).ln())
        .collect();
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    num / den
}

/// Interior residual of the annihilation identity (D1 + W) psi0 = 0 on
/// `levels` dyadic refinements of `coarse` (the given grid is the
/// coarsest level). The ground state is evaluated in closed form at
/// every level, so the residual is pure discretisation error and must
/// decay at the stencil order.
pub fn annihilation_residual(
    w: &Superpotential,
    coarse: &Grid,
    levels: usize,
    stencil_order: StencilOrder,
) -> ConvergenceReport {
    assert!(levels >= 3, "need at least three refinement levels");
    let scheme = D1Scheme::of(stencil_order);
    let margin = scheme.halfwidth();
    let mut spacings = Vec::with_capacity(levels);
    let mut norms = Vec::with_capacity(levels);
    for level in 0..levels {
        let grid = coarse.refined(1 << level);
        let psi = ground_state(w, &grid);
        let d = d1(psi.values(), grid.spacing(), scheme);
        let residual: Vec<Complex64> = grid
            .nodes()
            .enumerate()
            .map(|(i, z)| d[i] + w.value(z) * psi.value(i))
            .collect();
        spacings.push(grid.spacing());
        norms.push(interior_max_abs(&residual, margin));
    }
    let estimated_order = fit_order(&spacings, &norms);
    ConvergenceReport {
        spacings,
        residual_norms: norms,
        estimated_order,
    }
}

/// Interior residual of the intertwining identity (O H- - H+ O) psi over
/// `levels` dyadic coarsenings; the supplied fields are the finest level,
/// so their interval count must be divisible by 2^(levels-1). All three
/// fields must share one grid. For partner potentials actually built
/// from `w` the residual decays at the stencil order; for a mismatched
/// superpotential it plateaus at the size of the continuum defect.
pub fn intertwining_residual(
    v_plus: &ComplexField,
    v_minus: &ComplexField,
    w: &Superpotential,
    test_psi: &ComplexField,
    stencil_order: StencilOrder,
    levels: usize,
) -> Result<ConvergenceReport> {
    assert!(levels >= 3, "need at least three refinement levels");
    if v_plus.grid() != v_minus.grid() || v_plus.grid() != test_psi.grid() {
        return Err(Error::GridMismatch(
            "potentials and test state live on different grids".into(),
        ));
    }
    let intervals = v_plus.grid().count() - 1;
    let top_stride = 1usize << (levels - 1);
    if intervals % top_stride != 0 {
        return Err(Error::InvalidGrid(format!(
            "{intervals} intervals cannot be coarsened {levels} times"
        )));
    }
    let scheme = D1Scheme::of(stencil_order);
    let hw = stencil_order.halfwidth();
    let mut spacings = Vec::with_capacity(levels);
    let mut norms = Vec::with_capacity(levels);
    for level in 0..levels {
        let stride = 1usize << (levels - 1 - level);
        let vp = v_plus.strided(stride)?;
        let vm = v_minus.strided(stride)?;
        let psi = test_psi.strided(stride)?;
        let grid = psi.grid();
        let h = grid.spacing();
        let w_samples: Vec<Complex64> = grid.nodes().map(|z| w.value(z)).collect();

        // O (H- psi)
        let d2psi = d2_interior(psi.values(), h, stencil_order);
        let h_minus: Vec<Complex64> = (0..psi.len())
            .map(|i| -d2psi[i] + vm.value(i) * psi.value(i))
            .collect();
        let d_h_minus = d1(&h_minus, h, scheme);
        let left: Vec<Complex64> = (0..psi.len())
            .map(|i| d_h_minus[i] + w_samples[i] * h_minus[i])
            .collect();

        // H+ (O psi)
        let dpsi = d1(psi.values(), h, scheme);
        let o_psi: Vec<Complex64> = (0..psi.len())
            .map(|i| dpsi[i] + w_samples[i] * psi.value(i))
            .collect();
        let d2_o_psi = d2_interior(&o_psi, h, stencil_order);
        let right: Vec<Complex64> = (0..psi.len())
            .map(|i| -d2_o_psi[i] + vp.value(i) * o_psi[i])
            .collect();

        let residual: Vec<Complex64> = left
            .iter()
            .zip(&right)
            .map(|(l, r)| l - r)
            .collect();
        spacings.push(h);
        // composed operators touch neighbours of neighbours
        norms.push(interior_max_abs(&residual, 2 * hw));
    }
    let estimated_order = fit_order(&spacings, &norms);
    Ok(ConvergenceReport {
        spacings,
        residual_norms: norms,
        estimated_order,
    })
}

/// Map an H- solution to an H+ solution: returns O psi = D1 psi + W psi
/// on the same grid. The derivative runs two orders above
/// `stencil_order` so that, measured with that stencil, the mapped state
/// keeps a residual within a factor of ten of the input residual.
pub fn susy_map_solution(
    w: &Superpotential,
    psi_minus: &ComplexField,
    stencil_order: StencilOrder,
) -> ComplexField {
    let grid = psi_minus.grid();
    let d = d1(
        psi_minus.values(),
        grid.spacing(),
        D1Scheme::above(stencil_order),
    );
    let values = grid
        .nodes()
        .enumerate()
        .map(|(i, z)| d[i] + w.value(z) * psi_minus.value(i))
        .collect();
    ComplexField::new(grid, values).expect("mapped state stays finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode;
    use crate::profiles::{PlaneWaveProfile, Profile, SinusoidalProfile, SusyParams};
    use crate::susy::{partner_potentials, SuperpotentialFamily};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plane_wave_w(v0: f64, beta: f64) -> (Profile, SusyParams, Superpotential) {
        let profile = Profile::PlaneWave(PlaneWaveProfile::new(1.0, v0, beta).unwrap());
        let params = SusyParams::matched(&profile, 0.0).unwrap();
        let w = profile.superpotential(&params).unwrap();
        (profile, params, w)
    }

    fn sinusoidal_w(eta1: f64, eta2: f64, beta: f64) -> (Profile, SusyParams, Superpotential) {
        let profile = Profile::Sinusoidal(SinusoidalProfile::new(1.0, eta1, eta2, beta).unwrap());
        let params = SusyParams::matched(&profile, 0.0).unwrap();
        let w = profile.superpotential(&params).unwrap();
        (profile, params, w)
    }

    // Composite Simpson quadrature of W, refined until successive halvings
    // agree; an antiderivative-free route to the ground state.
    fn quadrature_ground_state(w: &Superpotential, z_start: f64, z: f64) -> Complex64 {
        let mut previous = Complex64::default();
        for level in 4..20 {
            let n = 1usize << level;
            let h = (z - z_start) / n as f64;
            let mut sum = w.value(z_start) + w.value(z);
            for i in 1..n {
                let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
                sum += weight * w.value(z_start + i as f64 * h);
            }
            let integral = sum * h / 3.0;
            if level > 4 && (integral - previous).norm() < 1e-13 {
                return (-integral).exp();
            }
            previous = integral;
        }
        (-previous).exp()
    }

    #[test]
    fn ground_state_matches_hand_value_and_quadrature() {
        let (_, _, w) = plane_wave_w(1.0, 2.0);
        let grid = Grid::new(0.0, PI, 5).unwrap();
        let psi = ground_state(&w, &grid);
        assert_eq!(psi.value(0), c(1.0, 0.0));
        // int_0^{pi/2} W dt = -1, so psi0(pi/2) = e
        assert!((psi.value(2) - c(1.0f64.exp(), 0.0)).norm() < 1e-12);

        for (i, z) in grid.nodes().enumerate().skip(1) {
            let oracle = quadrature_ground_state(&w, 0.0, z);
            assert!(
                (psi.value(i) - oracle).norm() < 1e-10,
                "node {z}: {} vs {}",
                psi.value(i),
                oracle
            );
        }
    }

    #[test]
    fn sinusoidal_ground_state_matches_quadrature() {
        let (_, _, w) = sinusoidal_w(4.0, 2.0, 1.0);
        let grid = Grid::new(0.0, PI, 7).unwrap();
        let psi = ground_state(&w, &grid);
        for (i, z) in grid.nodes().enumerate().skip(1) {
            let oracle = quadrature_ground_state(&w, 0.0, z);
            assert!((psi.value(i) - oracle).norm() < 1e-9 * oracle.norm().max(1.0));
        }
    }

    #[test]
    fn trivial_superpotential_has_constant_ground_state() {
        let w = Superpotential::from_parts(SuperpotentialFamily::PlaneWave, 0.0, 0.0, 2.0);
        let grid = Grid::new(0.0, PI, 33).unwrap();
        let psi = ground_state(&w, &grid);
        for i in 0..psi.len() {
            assert_eq!(psi.value(i), c(1.0, 0.0));
        }
        // annihilation residual is exactly zero on every level
        let report = annihilation_residual(&w, &Grid::new(0.0, PI, 101).unwrap(), 3, StencilOrder::Second);
        assert!(report.residual_norms.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn hamiltonian_reproduces_the_dirichlet_eigenpair() {
        // V = 0 on [0, L] with psi = sin(pi z / L): H psi = (pi/L)^2 psi
        let length = 2.0;
        let grid = Grid::new(0.0, length, 201).unwrap();
        let zero = ComplexField::from_fn(grid, |_| Complex64::default());
        let spec =
            DiscreteOperatorSpec::new(zero, 0.0, StencilOrder::Second, Boundary::Dirichlet)
                .unwrap();
        let psi = ComplexField::from_fn(grid, |z| c((PI * z / length).sin(), 0.0));
        let h_psi = apply_hamiltonian(&spec, &psi).unwrap();
        let e = (PI / length) * (PI / length);
        let h = grid.spacing();
        for i in 1..grid.count() - 1 {
            let expected = e * psi.value(i);
            assert!(
                (h_psi.value(i) - expected).norm() < h * h * e * e,
                "node {i}"
            );
        }
    }

    #[test]
    fn hamiltonian_on_constant_periodic_state_is_the_potential_shift() {
        let grid = Grid::new(0.0, 1.0, 33).unwrap();
        let v = ComplexField::from_fn(grid, |_| c(2.5, 0.0));
        let spec =
            DiscreteOperatorSpec::new(v, 0.5, StencilOrder::Second, Boundary::Periodic).unwrap();
        let psi = ComplexField::from_fn(grid, |_| c(1.0, 0.0));
        let h_psi = apply_hamiltonian(&spec, &psi).unwrap();
        for i in 0..grid.count() {
            assert_eq!(h_psi.value(i), c(2.0, 0.0));
        }
    }

    #[test]
    fn hamiltonian_rejects_grid_mismatch() {
        let grid = Grid::new(0.0, 1.0, 9).unwrap();
        let other = Grid::new(0.0, 1.0, 11).unwrap();
        let v = ComplexField::from_fn(grid, |_| Complex64::default());
        let spec =
            DiscreteOperatorSpec::new(v, 0.0, StencilOrder::Second, Boundary::Dirichlet).unwrap();
        let psi = ComplexField::from_fn(other, |_| Complex64::default());
        assert!(matches!(
            apply_hamiltonian(&spec, &psi),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn periodic_spec_rejects_aperiodic_potentials() {
        let grid = Grid::new(0.0, 1.0, 33).unwrap();
        let ramp = ComplexField::from_fn(grid, |z| c(z, 0.0));
        assert!(DiscreteOperatorSpec::new(ramp, 0.0, StencilOrder::Second, Boundary::Periodic)
            .is_err());
    }

    #[test]
    fn annihilation_converges_at_the_stencil_order() {
        let coarse = Grid::new(0.0, PI, 101).unwrap();
        let (_, _, w) = plane_wave_w(1.0, 2.0);
        let second = annihilation_residual(&w, &coarse, 3, StencilOrder::Second);
        assert!(
            second.order_within(2.0, 0.3),
            "observed order {}",
            second.estimated_order
        );
        let fourth = annihilation_residual(&w, &coarse, 3, StencilOrder::Fourth);
        assert!(
            fourth.order_within(4.0, 0.3),
            "observed order {}",
            fourth.estimated_order
        );

        let (_, _, wb) = sinusoidal_w(4.0, 2.0, 1.0);
        let coarse_b = Grid::new(0.0, PI, 101).unwrap();
        let report = annihilation_residual(&wb, &coarse_b, 3, StencilOrder::Second);
        assert!(
            report.order_within(2.0, 0.3),
            "observed order {}",
            report.estimated_order
        );
    }

    #[test]
    fn intertwining_converges_for_matched_potentials() {
        let (_, params, w) = plane_wave_w(1.0, 2.0);
        let fine = Grid::new(0.0, PI, 401).unwrap();
        let (vp, vm) = partner_potentials(&w, &params, &fine);
        let psi = ComplexField::from_fn(fine, |z| c(z.sin(), 0.3 * (2.0 * z).cos()));
        let report =
            intertwining_residual(&vp, &vm, &w, &psi, StencilOrder::Second, 3).unwrap();
        assert!(
            report.order_within(2.0, 0.3),
            "observed order {}",
            report.estimated_order
        );
    }

    #[test]
    fn intertwining_plateaus_for_a_mismatched_superpotential() {
        let (_, params, w) = plane_wave_w(1.0, 2.0);
        let fine = Grid::new(0.0, PI, 401).unwrap();
        let (vp, vm) = partner_potentials(&w, &params, &fine);
        // potentials stay on v0 = 1 while the ladder operator thinks v0 = 1.1
        let (_, _, wrong) = plane_wave_w(1.1, 2.0);
        let psi = ComplexField::from_fn(fine, |z| c(z.sin(), 0.0));
        let report =
            intertwining_residual(&vp, &vm, &wrong, &psi, StencilOrder::Second, 3).unwrap();
        assert!(
            report.finest_residual() > 1e-3,
            "plateau residual {}",
            report.finest_residual()
        );
        assert!(report.estimated_order < 1.0);
    }

    #[test]
    fn intertwining_rejects_mismatched_grids() {
        let (_, params, w) = plane_wave_w(1.0, 2.0);
        let fine = Grid::new(0.0, PI, 401).unwrap();
        let other = Grid::new(0.0, PI, 201).unwrap();
        let (vp, _) = partner_potentials(&w, &params, &fine);
        let (_, vm) = partner_potentials(&w, &params, &other);
        let psi = ComplexField::from_fn(fine, |z| c(z.sin(), 0.0));
        assert!(matches!(
            intertwining_residual(&vp, &vm, &w, &psi, StencilOrder::Second, 3),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn trivial_map_sends_sine_to_cosine() {
        let length = 2.0;
        let grid = Grid::new(0.0, length, 401).unwrap();
        let w = Superpotential::from_parts(SuperpotentialFamily::PlaneWave, 0.0, 0.0, 2.0);
        let psi = ComplexField::from_fn(grid, |z| c((PI * z / length).sin(), 0.0));
        let mapped = susy_map_solution(&w, &psi, StencilOrder::Second);
        let rate = PI / length;
        for (i, z) in grid.nodes().enumerate().skip(4).take(grid.count() - 8) {
            let expected = rate * (rate * z).cos();
            assert!((mapped.value(i) - c(expected, 0.0)).norm() < 1e-6);
        }
        // the mapped state is still an eigenstate of the free Hamiltonian
        let zero = ComplexField::from_fn(grid, |_| Complex64::default());
        let residual =
            eigen_residual(&zero, 0.0, &mapped, rate * rate, StencilOrder::Second, 6).unwrap();
        let h = grid.spacing();
        assert!(residual < h * h, "residual {residual}");
    }

    #[test]
    fn ground_state_maps_to_zero() {
        let (_, _, w) = plane_wave_w(1.0, 2.0);
        let grid = Grid::new(0.0, PI, 801).unwrap();
        let psi = ground_state(&w, &grid);
        let mapped = susy_map_solution(&w, &psi, StencilOrder::Fourth);
        let interior = &mapped.values()[6..mapped.len() - 6];
        let max = interior.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(max < 1e-9, "annihilation defect {max}");
    }

    #[test]
    fn integrated_solution_maps_to_a_partner_solution() {
        // integrate H- psi = E psi at E = 4, map with O, and compare the
        // residuals of both states measured with the same stencil; the
        // grid is kept coarse enough that stencil truncation, not
        // roundoff, dominates both residuals
        let (_, params, w) = plane_wave_w(1.0, 2.0);
        let energy = 4.0;
        let grid = Grid::new(0.0, PI, 401).unwrap();
        let (vp, vm) = partner_potentials(&w, &params, &grid);
        let coeff = |z: f64| {
            let (wv, wp) = w.eval(z);
            wv * wv - wp - Complex64::from(energy)
        };
        let init = (c(1.0, 0.0), c(0.0, 2.0));
        let (psi, _) = ode::integrate_on_grid(coeff, &grid, 8, init);

        let r_in = eigen_residual(&vm, 0.0, &psi, energy, StencilOrder::Fourth, 6).unwrap();
        assert!(r_in <= 1e-5, "input residual {r_in}");
        assert!(r_in >= 1e-10, "input residual suspiciously small: {r_in}");

        let mapped = susy_map_solution(&w, &psi, StencilOrder::Fourth);
        let r_out = eigen_residual(&vp, 0.0, &mapped, energy, StencilOrder::Fourth, 6).unwrap();
        assert!(
            r_out <= 10.0 * r_in,
            "amplification {} (in {r_in}, out {r_out})",
            r_out / r_in
        );
    }

    #[test]
    fn factorisation_composes_to_the_partner_hamiltonian() {
        // (-D1 + W)(D1 + W) psi approaches H- psi at the stencil order
        let (_, params, w) = plane_wave_w(1.0, 2.0);
        let mut spacings = Vec::new();
        let mut norms = Vec::new();
        for level in 0..3 {
            let grid = Grid::new(0.0, PI, 101).unwrap().refined(1 << level);
            let h = grid.spacing();
            let psi = ComplexField::from_fn(grid, |z| c(z.sin(), 0.2 * z.cos()));
            let w_samples: Vec<Complex64> = grid.nodes().map(|z| w.value(z)).collect();

            let dpsi = d1(psi.values(), h, D1Scheme::Two);
            let o_psi: Vec<Complex64> = (0..psi.len())
                .map(|i| dpsi[i] + w_samples[i] * psi.value(i))
                .collect();
            let d_o_psi = d1(&o_psi, h, D1Scheme::Two);
            let composed: Vec<Complex64> = (0..psi.len())
                .map(|i| -d_o_psi[i] + w_samples[i] * o_psi[i])
                .collect();

            let (_, vm) = partner_potentials(&w, &params, &grid);
            let d2psi = d2_interior(psi.values(), h, StencilOrder::Second);
            let direct: Vec<Complex64> = (0..psi.len())
                .map(|i| -d2psi[i] + (vm.value(i) - Complex64::from(params.lambda)) * psi.value(i))
                .collect();

            let diff: Vec<Complex64> = composed
                .iter()
                .zip(&direct)
                .map(|(a, b)| a - b)
                .collect();
            spacings.push(h);
            norms.push(interior_max_abs(&diff, 2));
        }
        let order = fit_order(&spacings, &norms);
        assert!((order - 2.0).abs() <= 0.4, "observed order {order}");
    }

    #[test]
    fn zero_margin_uses_the_stencil_halfwidth() {
        let grid = Grid::new(0.0, 1.0, 33).unwrap();
        let v = ComplexField::from_fn(grid, |_| Complex64::default());
        let psi = ComplexField::from_fn(grid, |z| c((PI * z).sin(), 0.0));
        // must not panic and must exclude the one-sided end rows
        let r = eigen_residual(&v, 0.0, &psi, PI * PI, StencilOrder::Second, 0).unwrap();
        assert!(r.is_finite());
    }
}
