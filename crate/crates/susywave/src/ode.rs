//! Fixed-step fourth-order Runge-Kutta integration of u'' = c(z) u.
//!
//! The second-order equation is integrated as the first-order system
//! (u, u')' = (u', c(z) u). Steps are placed at z_start + i h rather than
//! by accumulating z, so repeated runs are bitwise identical.

use num_complex::Complex64;

use crate::profiles::{ComplexField, Grid};

#[inline]
fn rk4_step(
    coeff: &impl Fn(f64) -> Complex64,
    z: f64,
    u: Complex64,
    v: Complex64,
    h: f64,
) -> (Complex64, Complex64) {
    let half = 0.5 * h;
    let c0 = coeff(z);
    let c1 = coeff(z + half);
    let c2 = coeff(z + h);

    let k1u = v;
    let k1v = c0 * u;
    let k2u = v + half * k1v;
    let k2v = c1 * (u + half * k1u);
    let k3u = v + half * k2v;
    let k3v = c1 * (u + half * k2u);
    let k4u = v + h * k3v;
    let k4v = c2 * (u + h * k3u);

    (
        u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
        v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )
}

/// Integrate from z_start over `steps` uniform steps of size `h`,
/// returning the final (u, u').
pub fn integrate_final(
    coeff: impl Fn(f64) -> Complex64,
    z_start: f64,
    initial: (Complex64, Complex64),
    h: f64,
    steps: usize,
) -> (Complex64, Complex64) {
    let (mut u, mut v) = initial;
    for i in 0..steps {
        let z = z_start + i as f64 * h;
        (u, v) = rk4_step(&coeff, z, u, v, h);
    }
    (u, v)
}

/// Integrate across a grid, taking `substeps` internal steps per node
/// interval, and return u and u' sampled at every node.
pub fn integrate_on_grid(
    coeff: impl Fn(f64) -> Complex64,
    grid: &Grid,
    substeps: usize,
    initial: (Complex64, Complex64),
) -> (ComplexField, ComplexField) {
    assert!(substeps >= 1);
    let mut u_samples = Vec::with_capacity(grid.count());
    let mut v_samples = Vec::with_capacity(grid.count());
    let (mut u, mut v) = initial;
    u_samples.push(u);
    v_samples.push(v);
    let h = grid.spacing() / substeps as f64;
    for i in 0..grid.count() - 1 {
        let base = grid.node(i);
        for j in 0..substeps {
            let z = base + j as f64 * h;
            (u, v) = rk4_step(&coeff, z, u, v, h);
        }
        u_samples.push(u);
        v_samples.push(v);
    }
    (
        ComplexField::new(*grid, u_samples).expect("integrator produced non-finite samples"),
        ComplexField::new(*grid, v_samples).expect("integrator produced non-finite samples"),
    )
}
