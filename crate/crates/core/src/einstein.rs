//! Transition-rate primitives: cross-section rates, the Einstein absorption
//! coefficient B, spontaneous emission A, and photon occupation per mode.
//!
//! Kinetics use the energy-density convention W = B·ρ(ν) with ρ in
//! J/(m³·Hz); A and B for the same transition are tied by B/A = λ³/(8πh).

use crate::constants::{ELEMENTARY_CHARGE, PLANCK, VACUUM_PERMITTIVITY};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// One radiative transition of the converter molecule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionSpec {
    /// Transition frequency (Hz).
    pub nu: f64,
    /// Magnitude of the transition dipole matrix element.
    pub dipole_moment: f64,
    /// Optional effective cross-section σ(ν) (m²).
    pub cross_section: Option<f64>,
}

impl TransitionSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0) {
            return Err(Error::domain("transition frequency must be positive"));
        }
        if !(self.dipole_moment >= 0.0) {
            return Err(Error::domain("dipole moment must be non-negative"));
        }
        if let Some(s) = self.cross_section {
            if !(s >= 0.0) {
                return Err(Error::domain("cross-section must be non-negative"));
            }
        }
        Ok(())
    }

    /// Absorption coefficient of this transition in a host of index `n_refr`.
    pub fn b_coefficient(&self, n_refr: f64) -> Result<f64> {
        self.validate()?;
        einstein_b_in_medium(self.dipole_moment, n_refr)
    }

    /// Spontaneous rate of this transition in a host of index `n_refr`.
    pub fn a_coefficient(&self, n_refr: f64) -> Result<f64> {
        let b = self.b_coefficient(n_refr)?;
        einstein_a_from_b(b, crate::constants::LIGHT_SPEED / self.nu)
    }
}

/// Transition rate from a photon flux and a cross-section, W = φ·σ (1/s).
pub fn rate_from_cross_section(flux: f64, sigma: f64) -> Result<f64> {
    if !(flux >= 0.0) {
        return Err(Error::domain("photon flux must be non-negative"));
    }
    if !(sigma >= 0.0) {
        return Err(Error::domain("cross-section must be non-negative"));
    }
    Ok(flux * sigma)
}

/// Einstein absorption coefficient B = 2π²e²|μ|²/(3εh²) in vacuum (ε = ε₀).
pub fn einstein_b(dipole_moment: f64) -> Result<f64> {
    einstein_b_in_medium(dipole_moment, 1.0)
}

/// Einstein absorption coefficient in a host medium of refractive index
/// `n_refr`, with permittivity ε = ε₀·n².
pub fn einstein_b_in_medium(dipole_moment: f64, n_refr: f64) -> Result<f64> {
    if !(dipole_moment >= 0.0) {
        return Err(Error::domain("dipole moment must be non-negative"));
    }
    if !(n_refr >= 1.0) {
        return Err(Error::domain("refractive index must be at least 1"));
    }
    let eps = VACUUM_PERMITTIVITY * n_refr * n_refr;
    Ok(
        2.0 * PI * PI * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (3.0 * eps * PLANCK * PLANCK)
            * dipole_moment
            * dipole_moment,
    )
}

/// Spontaneous emission coefficient A = B·8πh/λ³ (1/s). The spontaneous
/// lifetime of the level is τ = 1/A.
pub fn einstein_a_from_b(b: f64, lambda: f64) -> Result<f64> {
    if !(b >= 0.0) {
        return Err(Error::domain("B coefficient must be non-negative"));
    }
    if !(lambda > 0.0) {
        return Err(Error::domain("wavelength must be positive"));
    }
    Ok(b * 8.0 * PI * PLANCK / lambda.powi(3))
}

/// Absorption rate in a thermal radiation field, W = B·ρ(ν) (1/s).
pub fn absorption_rate(b: f64, rho: f64) -> Result<f64> {
    if !(b >= 0.0) {
        return Err(Error::domain("B coefficient must be non-negative"));
    }
    if !(rho >= 0.0) {
        return Err(Error::domain("energy density must be non-negative"));
    }
    Ok(b * rho)
}

/// Number of photons in one mode of volume V, n = ρ·V/(hν).
pub fn photons_in_mode(rho: f64, volume: f64, nu: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::domain(
            "mode occupation requires a positive frequency",
        ));
    }
    if !(rho >= 0.0 && volume >= 0.0) {
        return Err(Error::domain("density and volume must be non-negative"));
    }
    Ok(rho * volume / (PLANCK * nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::LIGHT_SPEED;
    use crate::radiometry::planck_density_nu;
    use approx::assert_relative_eq;

    #[test]
    fn cross_section_rate_arithmetic() {
        assert_eq!(rate_from_cross_section(0.0, 1e-20).unwrap(), 0.0);
        assert_eq!(rate_from_cross_section(1e21, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            rate_from_cross_section(1e21, 1e-20).unwrap(),
            10.0,
            max_relative = 1e-15
        );
        assert!(rate_from_cross_section(-1.0, 1e-20).is_err());
    }

    #[test]
    fn b_zero_and_quadratic_scaling() {
        assert_eq!(einstein_b(0.0).unwrap(), 0.0);
        let b1 = einstein_b(1e-30).unwrap();
        let b2 = einstein_b(2e-30).unwrap();
        assert_relative_eq!(b2, 4.0 * b1, max_relative = 1e-14);
        assert!(b1 > 0.0);
    }

    #[test]
    fn b_matches_rate_coefficient_form() {
        // W = B·ρ(ν) reproduces the coefficient 2π²e²|μ|²/(3h²ε) acting on ρ.
        let mu = 3e-30;
        let nu = 5e14;
        let rho = planck_density_nu(nu, 5800.0).unwrap();
        let w = absorption_rate(einstein_b(mu).unwrap(), rho).unwrap();
        let coeff = 2.0 * PI * PI * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * mu * mu
            / (3.0 * PLANCK * PLANCK * VACUUM_PERMITTIVITY);
        assert_relative_eq!(w, coeff * rho, max_relative = 1e-13);
    }

    #[test]
    fn host_medium_reduces_b() {
        let vac = einstein_b(1e-30).unwrap();
        let host = einstein_b_in_medium(1e-30, 1.5).unwrap();
        assert_relative_eq!(host, vac / 2.25, max_relative = 1e-14);
    }

    #[test]
    fn a_from_b_cubic_scaling() {
        assert_eq!(einstein_a_from_b(0.0, 500e-9).unwrap(), 0.0);
        let b = 1e20;
        let a = einstein_a_from_b(b, 500e-9).unwrap();
        let a_half = einstein_a_from_b(b, 250e-9).unwrap();
        assert_relative_eq!(a_half, 8.0 * a, max_relative = 1e-13);
        assert!(einstein_a_from_b(b, 0.0).is_err());
        // Spontaneous lifetime is the inverse rate.
        assert_relative_eq!(
            1.0 / a,
            500e-9f64.powi(3) / (b * 8.0 * PI * PLANCK),
            max_relative = 1e-13
        );
    }

    #[test]
    fn a_b_ratio_round_trip() {
        for (mu, lambda) in [(1e-30, 400e-9), (5e-30, 633e-9), (2.5e-29, 1.06e-6)] {
            let b = einstein_b(mu).unwrap();
            let a = einstein_a_from_b(b, lambda).unwrap();
            let back = a * lambda.powi(3) / (8.0 * PI * PLANCK);
            assert_relative_eq!(back, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn b_monotone_in_dipole() {
        let mut prev = -1.0;
        for k in 1..20 {
            let b = einstein_b(k as f64 * 1e-31).unwrap();
            assert!(b > prev);
            prev = b;
        }
    }

    #[test]
    fn absorption_rate_grows_with_temperature() {
        let b = 1e20;
        for nu in [2e14, 5e14, 1e15] {
            let cold = absorption_rate(b, planck_density_nu(nu, 3000.0).unwrap()).unwrap();
            let hot = absorption_rate(b, planck_density_nu(nu, 6000.0).unwrap()).unwrap();
            assert!(hot > cold);
        }
    }

    #[test]
    fn mode_occupation_identities() {
        assert_eq!(photons_in_mode(0.0, 1e-6, 5e14).unwrap(), 0.0);
        let (rho, v, nu) = (2e-16, 1e-6, 5e14);
        let one = photons_in_mode(rho, v, nu).unwrap();
        let two = photons_in_mode(rho, 2.0 * v, nu).unwrap();
        assert_relative_eq!(two, 2.0 * one, max_relative = 1e-15);
        // Constructed identity: ρ = hν/V gives exactly one photon.
        let rho_unit = PLANCK * nu / v;
        assert_relative_eq!(
            photons_in_mode(rho_unit, v, nu).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        assert!(photons_in_mode(rho, v, 0.0).is_err());
    }

    #[test]
    fn transition_spec_coefficients_consistent() {
        let tr = TransitionSpec {
            nu: LIGHT_SPEED / 500e-9,
            dipole_moment: 2e-30,
            cross_section: None,
        };
        let b = tr.b_coefficient(1.0).unwrap();
        let a = tr.a_coefficient(1.0).unwrap();
        assert_relative_eq!(
            a,
            einstein_a_from_b(b, 500e-9).unwrap(),
            max_relative = 1e-12
        );
        let bad = TransitionSpec { nu: -1.0, ..tr };
        assert!(bad.validate().is_err());
    }
}
