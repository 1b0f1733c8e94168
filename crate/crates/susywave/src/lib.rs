//! Factorisation toolkit for one-dimensional complex index landscapes.
//!
//! A longitudinal field component in a medium whose refractive index
//! varies along one axis obeys a Helmholtz equation that factorises, for
//! two analytic index families, through a complex superpotential W:
//!
//! ```text
//! E''(z) + k^2 (n(z)/n_bg)^2 E(z) = (epsilon - lambda) E(z) requires
//! k^2 (n(z)/n_bg)^2 = epsilon - lambda - (W^2 +- W')
//! ```
//!
//! The crate builds matched profile/superpotential pairs, produces the
//! isospectral partner profile of each input, and verifies the algebra
//! numerically: Riccati closure, partner-sum superposition, parity-time
//! symmetry, annihilation of the factorisation ground state, operator
//! intertwining at the expected discretisation order, and the one-way
//! reflection of finite gratings cut from the profiles. A separate
//! module converts the massive dispersion correction of a cut-off mode
//! into minimal-length deformation scales.
//!
//! Start from [`profiles::Profile`] and [`profiles::SusyParams::matched`],
//! then move to [`susy`] for the algebra, [`spectral`] for grid checks,
//! [`scattering`] for transfer matrices and [`symmetry`] for parity-time
//! diagnostics. The `examples/` directory walks through each capability.

pub mod cli;
pub mod error;
pub mod gup;
pub mod ode;
pub mod profiles;
pub mod scattering;
pub mod spectral;
pub mod susy;
pub mod symmetry;

pub use error::{Error, Result};
pub use profiles::{ComplexField, Grid, PlaneWaveProfile, Profile, SinusoidalProfile, SusyParams};
pub use susy::{PartnerSet, PotentialSign, ResidualReport, Superpotential};
