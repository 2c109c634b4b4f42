//! Blackbody radiometry: photon fluxes and Planck spectral energy densities.
//!
//! Spectral energy densities are per unit volume and unit bandwidth:
//! J/(m³·Hz) on the frequency axis, J/(m³·m) on the wavelength axis. The
//! two are related by ρ_λ(λ) = ρ_ν(c/λ)·c/λ².

use crate::constants::{BOLTZMANN, LIGHT_SPEED, PLANCK};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Exponent beyond which the Bose factor is replaced by its Wien limit,
/// avoiding overflow of exp(hν/kT).
const WIEN_CROSSOVER: f64 = 700.0;

/// Spectral coordinate of a sampled grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralAxis {
    /// Frequency in Hz; densities in J/(m³·Hz).
    FrequencyHz,
    /// Wavelength in m; densities in J/(m³·m).
    WavelengthM,
}

/// Mesh spacing for sampled spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshSpacing {
    Uniform,
    LogUniform,
}

/// Tabulated spectral energy density: ordered (coordinate, density) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    pub axis: SpectralAxis,
    points: Vec<(f64, f64)>,
}

impl SpectralGrid {
    /// Coordinates must be strictly increasing and positive; densities
    /// non-negative.
    pub fn new(axis: SpectralAxis, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain(
                "spectral grid must contain at least one point",
            ));
        }
        let mut prev = 0.0;
        for &(x, rho) in &points {
            if !(x > prev) {
                return Err(Error::domain(
                    "spectral grid coordinates must be strictly increasing and positive",
                ));
            }
            if !(rho >= 0.0) {
                return Err(Error::domain("spectral densities must be non-negative"));
            }
            prev = x;
        }
        Ok(SpectralGrid { axis, points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Trapezoid-rule integral of the tabulated density over the grid range.
    pub fn trapezoid_integral(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum()
    }

    /// Coordinate of the maximum tabulated density.
    pub fn peak_coordinate(&self) -> f64 {
        self.points
            .iter()
            .fold((0.0, f64::NEG_INFINITY), |best, &(x, rho)| {
                if rho > best.1 {
                    (x, rho)
                } else {
                    best
                }
            })
            .0
    }
}

/// Radiation-mode energy prefactor 8πhν³/c³ (J/(m³·Hz)).
///
/// Numerator of every Bose-occupied spectral density in the model; shared
/// so that the blackbody and converter forms agree bit for bit.
pub(crate) fn mode_energy_prefactor(nu: f64) -> f64 {
    8.0 * PI * PLANCK * nu.powi(3) / LIGHT_SPEED.powi(3)
}

/// Bose occupation denominator 1/(e^x − 1) with a Wien fallback for large x.
pub(crate) fn bose_factor(x: f64) -> f64 {
    if x > WIEN_CROSSOVER {
        (-x).exp()
    } else {
        1.0 / x.exp_m1()
    }
}

/// Mean photon-flux density φ = I/(hν) of a monochromatic source
/// (photons/(m²·s)).
pub fn photon_flux(intensity: f64, nu: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::domain("photon flux requires a positive frequency"));
    }
    if !(intensity >= 0.0) {
        return Err(Error::domain("intensity must be non-negative"));
    }
    Ok(intensity / (PLANCK * nu))
}

/// Photon-flux density from a radiation energy density, φ = (c/n)·ρ/(hν).
///
/// In a host of refractive index n the propagation speed is c/n.
pub fn photon_flux_from_density(rho: f64, nu: f64, n_refr: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::domain("photon flux requires a positive frequency"));
    }
    if !(rho >= 0.0) {
        return Err(Error::domain("energy density must be non-negative"));
    }
    if !(n_refr >= 1.0) {
        return Err(Error::domain("refractive index must be at least 1"));
    }
    Ok(LIGHT_SPEED / n_refr * rho / (PLANCK * nu))
}

/// Blackbody spectral energy density on the frequency axis,
/// ρ(ν) = (8πhν³/c³)/(e^{hν/kT} − 1) in J/(m³·Hz).
pub fn planck_density_nu(nu: f64, t: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::domain(
            "Planck density requires a positive frequency",
        ));
    }
    if !(t > 0.0) {
        return Err(Error::domain(
            "Planck density requires a positive temperature",
        ));
    }
    let x = PLANCK * nu / (BOLTZMANN * t);
    Ok(mode_energy_prefactor(nu) * bose_factor(x))
}

/// Blackbody spectral energy density on the wavelength axis,
/// ρ(λ) = (8πhc/λ⁵)/(e^{hc/λkT} − 1) in J/(m³·m).
pub fn planck_density_lambda(lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::domain(
            "Planck density requires a positive wavelength",
        ));
    }
    if !(t > 0.0) {
        return Err(Error::domain(
            "Planck density requires a positive temperature",
        ));
    }
    let x = PLANCK * LIGHT_SPEED / (lambda * BOLTZMANN * t);
    Ok(8.0 * PI * PLANCK * LIGHT_SPEED / lambda.powi(5) * bose_factor(x))
}

/// Mesh nodes spanning `range` with the requested spacing. Shared by every
/// sampled spectrum so that grids built from the same range coincide.
pub fn mesh_coordinates(range: (f64, f64), n_points: usize, mesh: MeshSpacing) -> Result<Vec<f64>> {
    let (lo, hi) = range;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::config("spectrum range must satisfy 0 < lo < hi"));
    }
    if n_points < 2 {
        return Err(Error::config("spectrum sampling needs at least 2 points"));
    }
    Ok((0..n_points)
        .map(|i| {
            let f = i as f64 / (n_points - 1) as f64;
            match mesh {
                MeshSpacing::Uniform => lo + (hi - lo) * f,
                MeshSpacing::LogUniform => lo * (hi / lo).powf(f),
            }
        })
        .collect())
}

/// Sample the blackbody spectrum at temperature `t` on `n_points` mesh
/// nodes spanning `range` on the chosen axis.
pub fn sample_spectrum(
    t: f64,
    axis: SpectralAxis,
    range: (f64, f64),
    n_points: usize,
    mesh: MeshSpacing,
) -> Result<SpectralGrid> {
    let mut points = Vec::with_capacity(n_points);
    for x in mesh_coordinates(range, n_points, mesh)? {
        let rho = match axis {
            SpectralAxis::FrequencyHz => planck_density_nu(x, t)?,
            SpectralAxis::WavelengthM => planck_density_lambda(x, t)?,
        };
        points.push((x, rho));
    }
    SpectralGrid::new(axis, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    // Radiation constant a = 8π⁵k⁴/(15h³c³): oracle for the frequency
    // integral, computed here from the constants rather than by quadrature.
    fn radiation_constant() -> f64 {
        8.0 * PI.powi(5) * BOLTZMANN.powi(4) / (15.0 * PLANCK.powi(3) * LIGHT_SPEED.powi(3))
    }

    #[test]
    fn photon_flux_zero_intensity() {
        assert_eq!(photon_flux(0.0, 1e14).unwrap(), 0.0);
    }

    #[test]
    fn photon_flux_linear_in_intensity() {
        let nu = 4.3e14;
        let one = photon_flux(1.0, nu).unwrap();
        let two = photon_flux(2.0, nu).unwrap();
        assert_relative_eq!(two, 2.0 * one, max_relative = 1e-15);
    }

    #[test]
    fn photon_flux_green_watt() {
        // 1 W/m² at λ = 500 nm: φ = λ/(hc) = 2.517058e18 photons/(m²·s),
        // frozen from hand arithmetic with CODATA h and c.
        let nu = LIGHT_SPEED / 500e-9;
        let phi = photon_flux(1.0, nu).unwrap();
        assert_relative_eq!(phi, 2.517_058_2e18, max_relative = 1e-6);
    }

    #[test]
    fn photon_flux_rejects_bad_frequency() {
        assert!(photon_flux(1.0, 0.0).is_err());
        assert!(photon_flux(1.0, -1.0).is_err());
        assert!(photon_flux(-1.0, 1e14).is_err());
    }

    #[test]
    fn flux_from_density_vacuum_and_scaling() {
        let (rho, nu) = (3e-16, 6e14);
        let vac = photon_flux_from_density(rho, nu, 1.0).unwrap();
        assert_relative_eq!(vac, LIGHT_SPEED * rho / (PLANCK * nu), max_relative = 1e-15);
        let half = photon_flux_from_density(rho, nu, 2.0).unwrap();
        assert_relative_eq!(half, 0.5 * vac, max_relative = 1e-15);
        assert_eq!(photon_flux_from_density(0.0, nu, 1.5).unwrap(), 0.0);
        assert!(photon_flux_from_density(rho, nu, 0.9).is_err());
    }

    #[test]
    fn rayleigh_jeans_limit() {
        // ρ/ρ_RJ = x/(e^x − 1) → 1 − x/2 as x → 0. At x = 1e-6 the deviation
        // is below 1e-6; at x = 1e-4 it equals x/2 to first order.
        let t = 5800.0;
        for (x, bound) in [(1e-6, 1e-6), (1e-4, 5.1e-5)] {
            let nu = x * BOLTZMANN * t / PLANCK;
            let rho = planck_density_nu(nu, t).unwrap();
            let rj = 8.0 * PI * nu * nu * BOLTZMANN * t / LIGHT_SPEED.powi(3);
            assert!(
                (rho / rj - 1.0).abs() < bound,
                "x = {x}: {}",
                rho / rj - 1.0
            );
        }
    }

    #[test]
    fn wien_tail_is_negligible() {
        let t = 5800.0;
        // Peak of ρ_ν sits at x ≈ 2.821.
        let nu_peak = 2.821 * BOLTZMANN * t / PLANCK;
        let peak = planck_density_nu(nu_peak, t).unwrap();
        let nu_tail = 50.0 * BOLTZMANN * t / PLANCK;
        let tail = planck_density_nu(nu_tail, t).unwrap();
        assert!(tail / peak < 1e-15);
    }

    #[test]
    fn wien_crossover_continuous_and_finite() {
        let t = 300.0;
        let nu = 699.9 * BOLTZMANN * t / PLANCK;
        let nu2 = 700.1 * BOLTZMANN * t / PLANCK;
        let lo = planck_density_nu(nu, t).unwrap();
        let hi = planck_density_nu(nu2, t).unwrap();
        assert!(lo.is_finite() && hi.is_finite());
        assert!(hi < lo);
    }

    #[test]
    fn stefan_boltzmann_integral() {
        // ∫ρ_ν dν = aT⁴; integrate in x = hν/kT, truncating at x = 60 where
        // the Wien tail is below 1e-20 of the total. Pure relative control:
        // in these units the integral is ~1e-18, far below any useful
        // absolute tolerance.
        let cfg = quadrature::QuadratureConfig {
            abs_tol: 0.0,
            rel_tol: 1e-9,
            max_depth: 60,
        };
        for t in [300.0, 2900.0, 5800.0] {
            let scale = BOLTZMANN * t / PLANCK;
            let integral = quadrature::integrate_with(
                |x| {
                    if x <= 0.0 {
                        0.0
                    } else {
                        planck_density_nu(x * scale, t).unwrap()
                    }
                },
                0.0,
                60.0,
                cfg,
            )
            .unwrap()
                * scale;
            assert_relative_eq!(
                integral,
                radiation_constant() * t.powi(4),
                max_relative = 1e-6
            );
        }
    }

    /// Golden-section maximization, independent of any library argmax.
    pub(crate) fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..200 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = f(d);
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn wavelength_peak_at_solar_temperature() {
        let t = 5800.0;
        let peak = golden_section_max(|l| planck_density_lambda(l, t).unwrap(), 100e-9, 3000e-9);
        assert!((peak - 499.6e-9).abs() < 0.5e-9, "peak = {peak:e}");
        // Cross-check against the displacement constant b/T.
        assert!((peak - 2.897_771_955e-3 / t).abs() < 0.05e-9);
    }

    #[test]
    fn peak_wavelength_doubles_at_half_temperature() {
        let p_hot = golden_section_max(
            |l| planck_density_lambda(l, 5800.0).unwrap(),
            100e-9,
            3000e-9,
        );
        let p_cold = golden_section_max(
            |l| planck_density_lambda(l, 2900.0).unwrap(),
            200e-9,
            6000e-9,
        );
        assert!((p_cold / p_hot - 2.0).abs() < 0.002);
    }

    #[test]
    fn axis_change_of_variables() {
        let t = 5800.0;
        for lambda in [300e-9, 500e-9, 1e-6] {
            let lhs = planck_density_lambda(lambda, t).unwrap();
            let rhs = planck_density_nu(LIGHT_SPEED / lambda, t).unwrap() * LIGHT_SPEED
                / (lambda * lambda);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn sample_spectrum_shapes() {
        let g = sample_spectrum(
            5800.0,
            SpectralAxis::WavelengthM,
            (300e-9, 2.5e-6),
            1000,
            MeshSpacing::Uniform,
        )
        .unwrap();
        assert_eq!(g.len(), 1000);
        assert!(g.points().iter().all(|&(_, rho)| rho > 0.0));

        let two = sample_spectrum(
            5800.0,
            SpectralAxis::WavelengthM,
            (300e-9, 2.5e-6),
            2,
            MeshSpacing::Uniform,
        )
        .unwrap();
        assert_eq!(two.len(), 2);
        assert_relative_eq!(two.points()[0].0, 300e-9, max_relative = 1e-15);
        assert_relative_eq!(two.points()[1].0, 2.5e-6, max_relative = 1e-15);

        assert!(sample_spectrum(
            5800.0,
            SpectralAxis::WavelengthM,
            (2.5e-6, 300e-9),
            10,
            MeshSpacing::Uniform
        )
        .is_err());
        assert!(sample_spectrum(
            5800.0,
            SpectralAxis::WavelengthM,
            (300e-9, 2.5e-6),
            1,
            MeshSpacing::Uniform
        )
        .is_err());
    }

    #[test]
    fn sampled_grid_integrates_to_stefan_boltzmann() {
        // Wavelength-axis total over (10 nm, 100 µm) also equals aT⁴.
        let t = 5800.0;
        let g = sample_spectrum(
            t,
            SpectralAxis::WavelengthM,
            (10e-9, 100e-6),
            20_000,
            MeshSpacing::LogUniform,
        )
        .unwrap();
        let total = g.trapezoid_integral();
        assert_relative_eq!(total, radiation_constant() * t.powi(4), max_relative = 5e-3);
    }

    #[test]
    fn unimodal_on_both_axes() {
        // Sign changes of first differences must number at most 2.
        for axis in [SpectralAxis::FrequencyHz, SpectralAxis::WavelengthM] {
            let range = match axis {
                SpectralAxis::FrequencyHz => (1e12, 5e15),
                SpectralAxis::WavelengthM => (50e-9, 50e-6),
            };
            let g = sample_spectrum(5800.0, axis, range, 4000, MeshSpacing::LogUniform).unwrap();
            let diffs: Vec<f64> = g.points().windows(2).map(|w| w[1].1 - w[0].1).collect();
            let mut changes = 0;
            for w in diffs.windows(2) {
                if w[0].signum() != w[1].signum() && w[0] != 0.0 && w[1] != 0.0 {
                    changes += 1;
                }
            }
            assert!(changes <= 2, "sign changes: {changes}");
        }
    }

    proptest! {
        #[test]
        fn change_of_variables_everywhere(lambda_nm in 50.0..50_000.0f64, t in 50.0..20_000.0f64) {
            let lambda = lambda_nm * 1e-9;
            let lhs = planck_density_lambda(lambda, t).unwrap();
            let rhs = planck_density_nu(LIGHT_SPEED / lambda, t).unwrap()
                * LIGHT_SPEED / (lambda * lambda);
            if lhs > 0.0 {
                prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
            }
        }

        #[test]
        fn flux_decreases_with_index(n1 in 1.0..3.0f64, dn in 0.01..2.0f64) {
            let f1 = photon_flux_from_density(1e-15, 6e14, n1).unwrap();
            let f2 = photon_flux_from_density(1e-15, 6e14, n1 + dn).unwrap();
            prop_assert!(f2 < f1);
        }
    }
}
