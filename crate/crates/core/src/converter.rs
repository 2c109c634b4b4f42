//! The three-level spectral converter: rate equations, algebraic steady
//! state, Boltzmann equilibrium populations, equilibrium radiation densities
//! with the internal dissipation channel q, chemical potentials, and the
//! molecular temperature.
//!
//! Level scheme: ground state N0, absorption excited state N1 (pumped at
//! frequency ν1), emission excited state N2 (radiating at ν2 < ν1). The
//! non-radiative channel q transfers population from N1 to N2 and couples
//! the two radiative equilibria.
//!
//! With occupations measured against the ground state,
//! N_i/N0 = exp[−(hν_i − μ_i)/k T_m], setting the rate equations to zero
//! yields the equilibrium densities
//!
//! ```text
//! ρ(ν1) = (8πhν1³/c³ + q/B1) / (e^{(hν1−μ1)/kTm} − 1)
//! ρ(ν2) = (8πhν2³/c³ − (q/B2)·e^{−[(hν1−μ1)−(hν2−μ2)]/kTm})
//!         / (e^{(hν2−μ2)/kTm} − 1)
//! ```
//!
//! provided each transition's A and B satisfy A = B·8πhν³/c³. The q term
//! raises the incident-channel density and depletes the emitted one.

use crate::constants::{BOLTZMANN, PLANCK, REDUCED_PLANCK};
use crate::error::{Error, Result};
use crate::radiometry::{bose_factor, mode_energy_prefactor};
use std::f64::consts::PI;

/// Relative slack allowed on population conservation checks.
const CONSERVATION_TOL: f64 = 1e-9;

/// Parameters of one three-level converter molecule ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConverterSpec {
    /// Absorption transition frequency ν1 (Hz).
    pub nu1: f64,
    /// Emission transition frequency ν2 (Hz); ν2 < ν1 (down-shift).
    pub nu2: f64,
    /// Absorption coefficient of the ν1 channel (m³/(J·s²)).
    pub b1: f64,
    /// Absorption coefficient of the ν2 channel.
    pub b2: f64,
    /// Spontaneous rate of the ν1 channel (1/s).
    pub a1: f64,
    /// Spontaneous rate of the ν2 channel (1/s).
    pub a2: f64,
    /// Internal energy-transfer rate N1 → N2 (1/s).
    pub q: f64,
    /// Total molecular number density (1/m³).
    pub n_total: f64,
}

impl ConverterSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu1 > self.nu2 && self.nu2 > 0.0) {
            return Err(Error::domain(
                "converter requires nu1 > nu2 > 0 (emission below absorption)",
            ));
        }
        for (name, v) in [
            ("b1", self.b1),
            ("b2", self.b2),
            ("a1", self.a1),
            ("a2", self.a2),
            ("q", self.q),
            ("n_total", self.n_total),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::domain(format!(
                    "{name} must be finite and non-negative"
                )));
            }
        }
        Ok(())
    }

    /// Build a spec whose spontaneous rates follow A = B·8πhν³/c³, the
    /// relation that makes the radiative equilibria close exactly.
    pub fn with_einstein_rates(
        nu1: f64,
        nu2: f64,
        b1: f64,
        b2: f64,
        q: f64,
        n_total: f64,
    ) -> Result<Self> {
        let spec = ConverterSpec {
            nu1,
            nu2,
            b1,
            b2,
            a1: b1 * mode_energy_prefactor(nu1),
            a2: b2 * mode_energy_prefactor(nu2),
            q,
            n_total,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Temperatures and chemical potentials describing the converter's
/// equilibrium with ambient and incident radiation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoState {
    /// Ambient temperature T0 (K).
    pub t0: f64,
    /// Incident blackbody temperature T1 (K).
    pub t1: f64,
    /// Molecular temperature after thermalization T_m (K).
    pub t_m: f64,
    /// Chemical potential of the absorption channel (J).
    pub mu1: f64,
    /// Chemical potential of the emission channel (J).
    pub mu2: f64,
}

impl ThermoState {
    pub fn validate(&self) -> Result<()> {
        if !(self.t0 > 0.0 && self.t_m >= self.t0 && self.t1 >= self.t_m) {
            return Err(Error::domain(
                "temperatures must satisfy T1 >= Tm >= T0 > 0",
            ));
        }
        if !(self.mu1 >= 0.0 && self.mu2 >= 0.0) {
            return Err(Error::domain("chemical potentials must be non-negative"));
        }
        Ok(())
    }

    /// Derive both chemical potentials from the temperatures,
    /// μ_i = hν_i·(1 − T0/T1).
    pub fn from_temperatures(spec: &ConverterSpec, t0: f64, t1: f64, t_m: f64) -> Result<Self> {
        spec.validate()?;
        let state = ThermoState {
            t0,
            t1,
            t_m,
            mu1: chemical_potential(PLANCK * spec.nu1, t0, t1)?,
            mu2: chemical_potential(PLANCK * spec.nu2, t0, t1)?,
        };
        state.validate()?;
        Ok(state)
    }
}

/// Level occupations (1/m³). A closed ensemble keeps N0 + N1 + N2 = N_total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Populations {
    pub n0: f64,
    pub n1: f64,
    pub n2: f64,
}

impl Populations {
    pub fn total(&self) -> f64 {
        self.n0 + self.n1 + self.n2
    }

    /// Check non-negativity and conservation against `n_total`.
    pub fn validate_closed(&self, n_total: f64) -> Result<()> {
        let slack = CONSERVATION_TOL * n_total.max(f64::MIN_POSITIVE);
        if self.n0 < -slack || self.n1 < -slack || self.n2 < -slack {
            return Err(Error::domain("populations must be non-negative"));
        }
        if (self.total() - n_total).abs() > slack {
            return Err(Error::domain("populations do not sum to the total density"));
        }
        Ok(())
    }
}

/// Chemical potential of a radiation channel of photon energy E in
/// equilibrium between ambient T0 and incident-field T1: μ = E·(1 − T0/T1).
pub fn chemical_potential(energy: f64, t0: f64, t1: f64) -> Result<f64> {
    if !(energy > 0.0) {
        return Err(Error::domain(
            "chemical potential requires a positive photon energy",
        ));
    }
    if !(t0 > 0.0 && t1 >= t0) {
        return Err(Error::domain(
            "chemical potential requires T1 >= T0 > 0 (otherwise mu < 0)",
        ));
    }
    Ok(energy * (1.0 - t0 / t1))
}

/// Molecular temperature from the mean roto-vibrational energy by
/// equipartition: T_m = Ē_rv/(κ·(dof/2)·k_B), with κ an explicit
/// proportionality constant (default 1).
///
/// A result below the ambient temperature signals incomplete
/// thermalization; callers clamp to T0.
pub fn molecular_temperature(e_rv_mean: f64, dof: u32, prop_const: f64) -> Result<f64> {
    if dof == 0 {
        return Err(Error::domain(
            "equipartition requires at least one degree of freedom",
        ));
    }
    if !(e_rv_mean >= 0.0) {
        return Err(Error::domain(
            "mean roto-vibrational energy must be non-negative",
        ));
    }
    if !(prop_const > 0.0) {
        return Err(Error::domain("equipartition constant must be positive"));
    }
    Ok(e_rv_mean / (prop_const * (dof as f64 / 2.0) * BOLTZMANN))
}

/// Unit-area Lorentzian of full width at half maximum `fwhm`, centered at 0.
pub fn lorentzian(x: f64, fwhm: f64) -> f64 {
    let half = 0.5 * fwhm;
    half / (PI * (x * x + half * half))
}

/// Golden-rule prefactor 2π used by [`internal_transfer_rate`].
pub const GOLDEN_RULE_PREFACTOR: f64 = 2.0 * PI;

/// Internal N1 → N2 transfer rate from a squared coupling matrix element,
/// q = prefactor·(|M|²/ħ)·L(E2 − E1; Γ), with L a unit-area Lorentzian
/// standing in for the energy-conserving delta (prefactor 2π by default).
pub fn internal_transfer_rate(
    matrix_element_sq: f64,
    e1: f64,
    e2: f64,
    linewidth: f64,
) -> Result<f64> {
    internal_transfer_rate_with_prefactor(
        matrix_element_sq,
        e1,
        e2,
        linewidth,
        GOLDEN_RULE_PREFACTOR,
    )
}

/// [`internal_transfer_rate`] with an explicit dimensionless prefactor.
pub fn internal_transfer_rate_with_prefactor(
    matrix_element_sq: f64,
    e1: f64,
    e2: f64,
    linewidth: f64,
    prefactor: f64,
) -> Result<f64> {
    if !(matrix_element_sq >= 0.0) {
        return Err(Error::domain("squared matrix element must be non-negative"));
    }
    if !(linewidth > 0.0) {
        return Err(Error::domain("transfer linewidth must be positive"));
    }
    if !(prefactor >= 0.0) {
        return Err(Error::domain("transfer prefactor must be non-negative"));
    }
    Ok(prefactor * matrix_element_sq / REDUCED_PLANCK * lorentzian(e2 - e1, linewidth))
}

/// Raw occupation derivatives with N0 eliminated by conservation.
pub(crate) fn derivatives_raw(
    n1: f64,
    n2: f64,
    spec: &ConverterSpec,
    rho1: f64,
    rho2: f64,
) -> (f64, f64) {
    let n0 = spec.n_total - n1 - n2;
    let p1 = spec.b1 * rho1;
    let p2 = spec.b2 * rho2;
    let d1 = p1 * n0 - (p1 + spec.a1) * n1 - spec.q * n1;
    let d2 = p2 * n0 - (p2 + spec.a2) * n2 + spec.q * n1;
    (d1, d2)
}

/// Time derivatives (dN1/dt, dN2/dt) of the excited occupations under
/// radiation densities `rho1`, `rho2` at the two transition frequencies.
pub fn rate_derivatives(
    pop: &Populations,
    spec: &ConverterSpec,
    rho1: f64,
    rho2: f64,
) -> Result<(f64, f64)> {
    spec.validate()?;
    pop.validate_closed(spec.n_total)?;
    if !(rho1 >= 0.0 && rho2 >= 0.0) {
        return Err(Error::domain("radiation densities must be non-negative"));
    }
    Ok(derivatives_raw(pop.n1, pop.n2, spec, rho1, rho2))
}

/// Stationary occupations under fixed radiation densities: the exact
/// solution of the 2×2 linear system obtained by setting both derivatives
/// to zero with N0 = N_total − N1 − N2.
pub fn steady_state(spec: &ConverterSpec, rho1: f64, rho2: f64) -> Result<Populations> {
    spec.validate()?;
    if !(rho1 >= 0.0 && rho2 >= 0.0) {
        return Err(Error::domain("radiation densities must be non-negative"));
    }
    let p1 = spec.b1 * rho1;
    let p2 = spec.b2 * rho2;
    // (2p1 + a1 + q)·N1 + p1·N2 = p1·Nt
    // (p2 − q)·N1 + (2p2 + a2)·N2 = p2·Nt
    let m11 = 2.0 * p1 + spec.a1 + spec.q;
    let m12 = p1;
    let m21 = p2 - spec.q;
    let m22 = 2.0 * p2 + spec.a2;
    let det = m11 * m22 - m12 * m21;
    let scale = (m11 * m22).abs().max((m12 * m21).abs());
    if det.abs() <= 1e-14 * scale || scale == 0.0 {
        return Err(Error::domain("degenerate kinetics"));
    }
    let r1 = p1 * spec.n_total;
    let r2 = p2 * spec.n_total;
    let n1 = (r1 * m22 - m12 * r2) / det;
    let n2 = (m11 * r2 - m21 * r1) / det;
    Ok(Populations {
        n0: spec.n_total - n1 - n2,
        n1,
        n2,
    })
}

/// Boltzmann equilibrium occupations referred to the ground state,
/// N_i/N0 = exp[−(hν_i − μ_i)/k T_m], normalized to N_total.
pub fn equilibrium_populations(spec: &ConverterSpec, thermo: &ThermoState) -> Result<Populations> {
    spec.validate()?;
    thermo.validate()?;
    let kt = BOLTZMANN * thermo.t_m;
    let gap1 = PLANCK * spec.nu1 - thermo.mu1;
    let gap2 = PLANCK * spec.nu2 - thermo.mu2;
    if gap1 <= 0.0 || gap2 <= 0.0 {
        return Err(Error::domain("chemical potential exceeds photon energy"));
    }
    let x1 = (-gap1 / kt).exp();
    let x2 = (-gap2 / kt).exp();
    let n0 = spec.n_total / (1.0 + x1 + x2);
    Ok(Populations {
        n0,
        n1: x1 * n0,
        n2: x2 * n0,
    })
}

/// Equilibrium radiation densities (ρ(ν1), ρ(ν2)) of the incident and
/// emitted channels, including the dissipative shift from q.
pub fn equilibrium_densities(spec: &ConverterSpec, thermo: &ThermoState) -> Result<(f64, f64)> {
    spec.validate()?;
    thermo.validate()?;
    let kt = BOLTZMANN * thermo.t_m;
    let gap1 = PLANCK * spec.nu1 - thermo.mu1;
    let gap2 = PLANCK * spec.nu2 - thermo.mu2;
    if gap1 <= 0.0 || gap2 <= 0.0 {
        return Err(Error::domain("chemical potential exceeds photon energy"));
    }
    let q_over = |b: f64| -> Result<f64> {
        if spec.q == 0.0 {
            Ok(0.0)
        } else if b == 0.0 {
            Err(Error::domain("dissipation without radiative coupling"))
        } else {
            Ok(spec.q / b)
        }
    };
    let rho1 = (mode_energy_prefactor(spec.nu1) + q_over(spec.b1)?) * bose_factor(gap1 / kt);
    // The transfer term is weighted by the occupation ratio
    // N1/N2 = exp[−(gap1 − gap2)/kTm].
    let transfer = q_over(spec.b2)? * ((gap2 - gap1) / kt).exp();
    let num2 = mode_energy_prefactor(spec.nu2) - transfer;
    if num2 < 0.0 {
        return Err(Error::domain("dissipation exceeds radiative capacity"));
    }
    let rho2 = num2 * bose_factor(gap2 / kt);
    Ok((rho1, rho2))
}

/// Ideal spectral concentration factor C_M = ρ(ν2)/ρ(ν1).
pub fn concentration_factor(spec: &ConverterSpec, thermo: &ThermoState) -> Result<f64> {
    let (rho1, rho2) = equilibrium_densities(spec, thermo)?;
    if !(rho1 > 0.0) {
        return Err(Error::domain(
            "concentration factor requires a positive incident density",
        ));
    }
    Ok(rho2 / rho1)
}
