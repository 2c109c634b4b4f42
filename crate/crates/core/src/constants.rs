//! Physical constants (CODATA 2018, SI units).
//!
//! Every module reads these definitions; nothing redefines a constant
//! locally. Internal unit system is SI throughout: Hz, m, J, K, s.

use std::f64::consts::PI;

/// Planck constant h (J·s, exact).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant ħ = h/2π (J·s).
pub const REDUCED_PLANCK: f64 = PLANCK / (2.0 * PI);
/// Speed of light in vacuum c (m/s, exact).
pub const LIGHT_SPEED: f64 = 299_792_458.0;
/// Boltzmann constant k_B (J/K, exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Elementary charge e (C, exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Vacuum permittivity ε₀ (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Electron-volt in joules (exact).
pub const EV: f64 = ELEMENTARY_CHARGE;

/// Bundle of the fundamental constants used by the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Planck constant (J·s).
    pub h: f64,
    /// Vacuum light speed (m/s).
    pub c: f64,
    /// Boltzmann constant (J/K).
    pub k_b: f64,
    /// Elementary charge (C).
    pub e: f64,
    /// Vacuum permittivity (F/m).
    pub eps0: f64,
}

/// The authoritative CODATA 2018 set.
pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    h: PLANCK,
    c: LIGHT_SPEED,
    k_b: BOLTZMANN,
    e: ELEMENTARY_CHARGE,
    eps0: VACUUM_PERMITTIVITY,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CODATA_2018
    }
}

impl PhysicalConstants {
    /// All constants must be strictly positive.
    pub fn is_valid(&self) -> bool {
        self.h > 0.0 && self.c > 0.0 && self.k_b > 0.0 && self.e > 0.0 && self.eps0 > 0.0
    }
}
