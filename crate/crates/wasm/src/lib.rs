//! Browser bindings for the spectral-converter model. Three interactive
//! operations back the demo page: blackbody spectrum sampling, the
//! converter equilibrium with its incident/emitted spectrum pair, and
//! Monte Carlo trapping in the slab.
//!
//! Build with `wasm-pack build crates/wasm --target web --out-dir www/pkg`
//! and serve `crates/wasm/www`.

use lsc_core::config::{
    AxisRange, ConverterConfig, QSpec, RadiometryConfig, SlabConfig, Thermalization,
};
use lsc_core::converter::{concentration_factor, equilibrium_densities, ConverterSpec};
use lsc_core::radiometry::{MeshSpacing, SpectralGrid};
use lsc_core::scenario::{build_converter, emitted_spectrum, incident_spectrum};
use lsc_core::transport::{trace_rays, trapping_efficiency_analytic, SlabSpec, TransportResult};
use lsc_core::Result;
use wasm_bindgen::prelude::*;

const EV: f64 = lsc_core::constants::EV;
const PLANCK: f64 = lsc_core::constants::PLANCK;

/// A sampled spectrum: wavelengths in nm, densities in J/(m³·m).
#[wasm_bindgen]
#[derive(Clone)]
pub struct Spectrum {
    wavelengths_nm: Vec<f64>,
    densities: Vec<f64>,
}

#[wasm_bindgen]
impl Spectrum {
    #[wasm_bindgen(getter)]
    pub fn wavelengths_nm(&self) -> Vec<f64> {
        self.wavelengths_nm.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn densities(&self) -> Vec<f64> {
        self.densities.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn peak_nm(&self) -> f64 {
        let mut best = (0.0, f64::NEG_INFINITY);
        for (&l, &d) in self.wavelengths_nm.iter().zip(&self.densities) {
            if d > best.1 {
                best = (l, d);
            }
        }
        best.0
    }
}

fn to_spectrum(grid: &SpectralGrid) -> Spectrum {
    Spectrum {
        wavelengths_nm: grid.points().iter().map(|&(x, _)| x * 1e9).collect(),
        densities: grid.points().iter().map(|&(_, rho)| rho).collect(),
    }
}

fn radiometry_config(
    t1_k: f64,
    lambda_min_nm: f64,
    lambda_max_nm: f64,
    points: usize,
) -> RadiometryConfig {
    RadiometryConfig {
        t1_k,
        range: AxisRange::Wavelength {
            min_nm: lambda_min_nm,
            max_nm: lambda_max_nm,
        },
        points,
        mesh: MeshSpacing::Uniform,
    }
}

fn compute_blackbody(
    t_k: f64,
    lambda_min_nm: f64,
    lambda_max_nm: f64,
    points: usize,
) -> Result<Spectrum> {
    let grid = incident_spectrum(&radiometry_config(
        t_k,
        lambda_min_nm,
        lambda_max_nm,
        points,
    ))?;
    Ok(to_spectrum(&grid))
}

/// Blackbody spectral energy density on a uniform wavelength grid.
#[wasm_bindgen]
pub fn blackbody_spectrum(
    t_k: f64,
    lambda_min_nm: f64,
    lambda_max_nm: f64,
    points: usize,
) -> std::result::Result<Spectrum, JsError> {
    compute_blackbody(t_k, lambda_min_nm, lambda_max_nm, points).map_err(to_js)
}

/// Converter equilibrium scalars plus the incident/emitted spectrum pair.
///
/// The loss chain uses the fixed dye efficiencies of the worked example
/// (η_a = 0.05, η_f = 0.7) with the configurable θ_q and index.
#[wasm_bindgen]
pub struct ConverterDemo {
    incident: Spectrum,
    emitted: Spectrum,
    mu1_ev: f64,
    mu2_ev: f64,
    rho1: f64,
    rho2: f64,
    c_m: f64,
    q_per_s: f64,
    a1_per_s: f64,
    eta_t: f64,
    g_phi_over_g: f64,
}

#[wasm_bindgen]
impl ConverterDemo {
    #[wasm_bindgen(getter)]
    pub fn incident(&self) -> Spectrum {
        self.incident.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn emitted(&self) -> Spectrum {
        self.emitted.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn mu1_ev(&self) -> f64 {
        self.mu1_ev
    }

    #[wasm_bindgen(getter)]
    pub fn mu2_ev(&self) -> f64 {
        self.mu2_ev
    }

    #[wasm_bindgen(getter)]
    pub fn rho1(&self) -> f64 {
        self.rho1
    }

    #[wasm_bindgen(getter)]
    pub fn rho2(&self) -> f64 {
        self.rho2
    }

    #[wasm_bindgen(getter)]
    pub fn c_m(&self) -> f64 {
        self.c_m
    }

    #[wasm_bindgen(getter)]
    pub fn q_per_s(&self) -> f64 {
        self.q_per_s
    }

    #[wasm_bindgen(getter)]
    pub fn a1_per_s(&self) -> f64 {
        self.a1_per_s
    }

    #[wasm_bindgen(getter)]
    pub fn eta_t(&self) -> f64 {
        self.eta_t
    }

    #[wasm_bindgen(getter)]
    pub fn g_phi_over_g(&self) -> f64 {
        self.g_phi_over_g
    }
}

#[allow(clippy::too_many_arguments)]
fn compute_converter_demo(
    t0_k: f64,
    t1_k: f64,
    tm_k: f64,
    e1_ev: f64,
    e2_ev: f64,
    q_over_a1: f64,
    b2_over_b1: f64,
    theta_q: f64,
    n_refr: f64,
    lambda_min_nm: f64,
    lambda_max_nm: f64,
    points: usize,
) -> Result<ConverterDemo> {
    let b1 = 1e20;
    let reference = ConverterSpec::with_einstein_rates(
        e1_ev * EV / PLANCK,
        e2_ev * EV / PLANCK,
        b1,
        b2_over_b1 * b1,
        0.0,
        1e24,
    )?;
    let converter = ConverterConfig {
        e1_ev,
        e2_ev,
        b1,
        b2: b2_over_b1 * b1,
        a1_per_s: None,
        a2_per_s: None,
        q: QSpec::PerSecond(q_over_a1 * reference.a1),
        n_total_per_m3: 1e24,
        t0_k,
        t1_k,
        thermalization: Thermalization::MolecularTemperatureK(tm_k),
        mu1_ev: None,
        mu2_ev: None,
        line_fwhm_nm: 20.0,
    };
    let slab = SlabConfig {
        length_m: 0.1,
        width_m: 0.1,
        thickness_m: 0.005,
        n_refr,
        eta_a: 0.05,
        eta_f: 0.7,
        theta_q,
    };
    let radiometry = radiometry_config(t1_k, lambda_min_nm, lambda_max_nm, points);

    let setup = build_converter(&converter)?;
    let (rho1, rho2) = equilibrium_densities(&setup.spec, &setup.thermo)?;
    let c_m = concentration_factor(&setup.spec, &setup.thermo)?;
    let eta_t = trapping_efficiency_analytic(n_refr)?;
    let incident = incident_spectrum(&radiometry)?;
    let emitted = emitted_spectrum(&radiometry, &converter, Some(&slab))?;
    Ok(ConverterDemo {
        incident: to_spectrum(&incident),
        emitted: to_spectrum(&emitted),
        mu1_ev: setup.thermo.mu1 / EV,
        mu2_ev: setup.thermo.mu2 / EV,
        rho1,
        rho2,
        c_m,
        q_per_s: setup.spec.q,
        a1_per_s: setup.spec.a1,
        eta_t,
        g_phi_over_g: slab.eta_a * slab.eta_f * eta_t * (1.0 - theta_q),
    })
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn converter_demo(
    t0_k: f64,
    t1_k: f64,
    tm_k: f64,
    e1_ev: f64,
    e2_ev: f64,
    q_over_a1: f64,
    b2_over_b1: f64,
    theta_q: f64,
    n_refr: f64,
    lambda_min_nm: f64,
    lambda_max_nm: f64,
    points: usize,
) -> std::result::Result<ConverterDemo, JsError> {
    compute_converter_demo(
        t0_k,
        t1_k,
        tm_k,
        e1_ev,
        e2_ev,
        q_over_a1,
        b2_over_b1,
        theta_q,
        n_refr,
        lambda_min_nm,
        lambda_max_nm,
        points,
    )
    .map_err(to_js)
}

/// Monte Carlo trapping run against the analytic escape-cone value.
#[wasm_bindgen]
pub struct TrappingDemo {
    analytic: f64,
    estimate: f64,
    std_error: f64,
    edge_collected: u32,
    escaped_top: u32,
    escaped_bottom: u32,
    n_rays: u32,
}

#[wasm_bindgen]
impl TrappingDemo {
    #[wasm_bindgen(getter)]
    pub fn analytic(&self) -> f64 {
        self.analytic
    }

    #[wasm_bindgen(getter)]
    pub fn estimate(&self) -> f64 {
        self.estimate
    }

    #[wasm_bindgen(getter)]
    pub fn std_error(&self) -> f64 {
        self.std_error
    }

    #[wasm_bindgen(getter)]
    pub fn edge_collected(&self) -> u32 {
        self.edge_collected
    }

    #[wasm_bindgen(getter)]
    pub fn escaped_top(&self) -> u32 {
        self.escaped_top
    }

    #[wasm_bindgen(getter)]
    pub fn escaped_bottom(&self) -> u32 {
        self.escaped_bottom
    }

    #[wasm_bindgen(getter)]
    pub fn n_rays(&self) -> u32 {
        self.n_rays
    }
}

fn compute_trapping(n_refr: f64, n_rays: u32, seed: u32) -> Result<TrappingDemo> {
    let slab = SlabSpec {
        length: 1.0,
        width: 1.0,
        thickness: 1e-4,
        n_refr,
        eta_a: 1.0,
        eta_f: 1.0,
        theta_q: 0.0,
    };
    let result: TransportResult = trace_rays(&slab, n_rays as u64, seed as u64)?;
    Ok(TrappingDemo {
        analytic: trapping_efficiency_analytic(n_refr)?,
        estimate: result.eta_t_estimate,
        std_error: result.std_error,
        edge_collected: result.counts.edge_collected as u32,
        escaped_top: result.counts.escaped_top as u32,
        escaped_bottom: result.counts.escaped_bottom as u32,
        n_rays,
    })
}

#[wasm_bindgen]
pub fn trapping_demo(
    n_refr: f64,
    n_rays: u32,
    seed: u32,
) -> std::result::Result<TrappingDemo, JsError> {
    compute_trapping(n_refr, n_rays, seed).map_err(to_js)
}

/// Analytic trapping efficiency curve point, for plotting η_t(n).
#[wasm_bindgen]
pub fn trapping_analytic(n_refr: f64) -> std::result::Result<f64, JsError> {
    trapping_efficiency_analytic(n_refr).map_err(to_js)
}

fn to_js(err: lsc_core::Error) -> JsError {
    JsError::new(&err.to_string())
}
