//! Microscopic model of molecular spectral converters in luminescent solar
//! concentrators.
//!
//! A dye-doped transparent slab absorbs sunlight at frequency ν1, re-emits
//! down-shifted light at ν2 < ν1, and waveguides the trapped fraction to
//! photovoltaic cells on the edges. This crate assembles the pieces of that
//! picture:
//!
//! - [`radiometry`]: photon fluxes and Planck spectral energy densities;
//! - [`einstein`]: transition rates and the A/B coefficient relation;
//! - [`converter`]: three-level rate equations, steady state, equilibrium
//!   populations and radiation densities, spectral concentration;
//! - [`transient`]: stiff time integration of the rate equations;
//! - [`entropy`]: von Neumann entropy of the pre-emission electronic mixture;
//! - [`transport`]: Monte Carlo photon transport in the slab, trapping
//!   efficiency, geometric and flux gain;
//! - [`config`] and [`scenario`]: the scenario file format and the pipeline
//!   that turns one into CSV spectra plus a machine-readable summary.
//!
//! All quantities are SI internally (Hz, m, J, K, s); front ends convert
//! nm/eV at the boundary.

// Validation uses `!(x > 0.0)`-style predicates throughout so that NaN
// inputs fail the same check as out-of-range ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod constants;
pub mod converter;
pub mod einstein;
pub mod entropy;
pub mod error;
pub mod quadrature;
pub mod radiometry;
pub mod scenario;
pub mod transient;
pub mod transport;

pub use error::{Error, Result};
