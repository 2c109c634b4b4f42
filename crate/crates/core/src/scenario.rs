//! Scenario execution: turns a parsed [`ScenarioConfig`] into domain
//! objects, runs the requested pipeline stages in dependency order
//! (radiometry → converter → transport → gain; entropy independent), and
//! renders CSV spectra plus human- and machine-readable summaries.
//!
//! Identical configurations (including the seed) produce byte-identical
//! output files: nothing here reads clocks, locales or ambient randomness.

use crate::config::{
    ConverterConfig, QSpec, RadiometryConfig, ScenarioConfig, SlabConfig, Thermalization,
};
use crate::constants::{EV, LIGHT_SPEED, PLANCK};
use crate::converter::{
    concentration_factor, equilibrium_densities, internal_transfer_rate_with_prefactor,
    molecular_temperature, ConverterSpec, ThermoState,
};
use crate::entropy::{emission_entropy_gain, parse_coeffs_text};
use crate::error::{Error, Result};
use crate::radiometry::{
    mesh_coordinates, planck_density_lambda, planck_density_nu, sample_spectrum, SpectralAxis,
    SpectralGrid,
};
use crate::transport::{
    flux_gain, geometric_gain, trace_rays_with, trapping_efficiency_analytic, SlabSpec,
    TraceOptions, TransportResult,
};
use std::fs;
use std::path::{Path, PathBuf};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One reported scalar with its unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Scalar {
    pub name: &'static str,
    pub value: f64,
    pub unit: &'static str,
}

/// Everything a run reports: scalar outputs with units, the input echo the
/// scalars are reproducible from, the tool version, and the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub scenario: String,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub scalars: Vec<Scalar>,
    pub input_echo: String,
}

impl RunSummary {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.scalars
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.value)
    }

    /// Human-readable form.
    pub fn render_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "scenario: {}", self.scenario).unwrap();
        writeln!(out, "tool_version: {}", self.version).unwrap();
        if let Some(seed) = self.seed {
            writeln!(out, "seed: {seed}").unwrap();
        }
        out.push('\n');
        for s in &self.scalars {
            writeln!(out, "{} = {:.12e} {}", s.name, s.value, s.unit).unwrap();
        }
        out.push('\n');
        out.push_str("[input echo]\n");
        for line in self.input_echo.lines() {
            writeln!(out, "  {line}").unwrap();
        }
        out
    }

    /// Flat machine-readable key=value form.
    pub fn render_kv(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "scenario={}", self.scenario).unwrap();
        writeln!(out, "tool_version={}", self.version).unwrap();
        if let Some(seed) = self.seed {
            writeln!(out, "seed={seed}").unwrap();
        }
        for s in &self.scalars {
            writeln!(out, "{}={:.12e}", s.name, s.value).unwrap();
        }
        out
    }
}

/// Converter stage inputs assembled in SI units.
#[derive(Debug, Clone, Copy)]
pub struct ConverterSetup {
    pub spec: ConverterSpec,
    pub thermo: ThermoState,
    /// Fluorescence line FWHM on the wavelength axis (m).
    pub line_fwhm_m: f64,
}

/// Resolve a converter section into a validated spec and thermodynamic
/// state. Spontaneous rates default to A = B·8πhν³/c³; the molecular
/// temperature comes either directly or from equipartition (clamped up to
/// T0 when the estimate falls below ambient).
pub fn build_converter(c: &ConverterConfig) -> Result<ConverterSetup> {
    let nu1 = c.e1_ev * EV / PLANCK;
    let nu2 = c.e2_ev * EV / PLANCK;
    let q = match c.q {
        QSpec::PerSecond(q) => {
            if !(q >= 0.0) {
                return Err(Error::config(
                    "key `q_per_s` in [converter] must be non-negative",
                ));
            }
            q
        }
        QSpec::MatrixElement {
            m_sq_j2,
            linewidth_ev,
            prefactor,
        } => internal_transfer_rate_with_prefactor(
            m_sq_j2,
            c.e1_ev * EV,
            c.e2_ev * EV,
            linewidth_ev * EV,
            prefactor,
        )?,
    };
    let mut spec = ConverterSpec::with_einstein_rates(nu1, nu2, c.b1, c.b2, q, c.n_total_per_m3)?;
    if let Some(a1) = c.a1_per_s {
        spec.a1 = a1;
    }
    if let Some(a2) = c.a2_per_s {
        spec.a2 = a2;
    }
    spec.validate()?;
    let t_m = match c.thermalization {
        Thermalization::MolecularTemperatureK(t) => t,
        Thermalization::Equipartition {
            erv_mean_ev,
            dof,
            kappa,
        } => molecular_temperature(erv_mean_ev * EV, dof, kappa)?.max(c.t0_k),
    };
    let mut thermo = ThermoState::from_temperatures(&spec, c.t0_k, c.t1_k, t_m)?;
    if let Some(mu1) = c.mu1_ev {
        thermo.mu1 = mu1 * EV;
    }
    if let Some(mu2) = c.mu2_ev {
        thermo.mu2 = mu2 * EV;
    }
    thermo.validate()?;
    Ok(ConverterSetup {
        spec,
        thermo,
        line_fwhm_m: c.line_fwhm_nm * 1e-9,
    })
}

pub fn build_slab(s: &SlabConfig) -> Result<SlabSpec> {
    let slab = SlabSpec {
        length: s.length_m,
        width: s.width_m,
        thickness: s.thickness_m,
        n_refr: s.n_refr,
        eta_a: s.eta_a,
        eta_f: s.eta_f,
        theta_q: s.theta_q,
    };
    slab.validate()?;
    Ok(slab)
}

/// Incident blackbody spectrum on the configured grid.
pub fn incident_spectrum(r: &RadiometryConfig) -> Result<SpectralGrid> {
    sample_spectrum(r.t1_k, r.axis(), r.range_si(), r.points, r.mesh)
}

/// Emitted spectrum on the same grid: the fluorescence line at ν2
/// (Lorentzian profile, peak fixed by the equilibrium emitted density
/// mapped onto the grid axis) superposed on the molecular blackbody at
/// T_m, the whole scaled by the slab loss chain η_a·η_f·η_t·(1 − θ_q)
/// when a slab is configured.
pub fn emitted_spectrum(
    r: &RadiometryConfig,
    c: &ConverterConfig,
    slab: Option<&SlabConfig>,
) -> Result<SpectralGrid> {
    let setup = build_converter(c)?;
    let (_, rho2) = equilibrium_densities(&setup.spec, &setup.thermo)?;
    let chain = match slab {
        Some(s) => {
            let slab = build_slab(s)?;
            slab.eta_a
                * slab.eta_f
                * trapping_efficiency_analytic(slab.n_refr)?
                * (1.0 - slab.theta_q)
        }
        None => 1.0,
    };
    let lambda2 = LIGHT_SPEED / setup.spec.nu2;
    let t_m = setup.thermo.t_m;
    let mut points = Vec::with_capacity(r.points);
    for x in mesh_coordinates(r.range_si(), r.points, r.mesh)? {
        let value = match r.axis() {
            SpectralAxis::WavelengthM => {
                let bb = planck_density_lambda(x, t_m)?;
                // Line peak in wavelength units: ρ(ν2)·c/λ2².
                let peak = rho2 * LIGHT_SPEED / (lambda2 * lambda2);
                let half = 0.5 * setup.line_fwhm_m;
                let line = peak * half * half / ((x - lambda2).powi(2) + half * half);
                chain * (bb + line)
            }
            SpectralAxis::FrequencyHz => {
                let bb = planck_density_nu(x, t_m)?;
                let half = 0.5 * setup.line_fwhm_m * LIGHT_SPEED / (lambda2 * lambda2);
                let line = rho2 * half * half / ((x - setup.spec.nu2).powi(2) + half * half);
                chain * (bb + line)
            }
        };
        points.push((x, value));
    }
    SpectralGrid::new(r.axis(), points)
}

/// RFC-style CSV: header row, dot decimals, newline-terminated rows.
/// Wavelengths are reported in nm at this boundary; frequencies in Hz.
pub fn render_spectrum_csv(grid: &SpectralGrid) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    match grid.axis {
        SpectralAxis::WavelengthM => {
            out.push_str("wavelength_nm,energy_density_J_per_m3_per_m\n");
            for &(x, rho) in grid.points() {
                writeln!(out, "{:.9e},{:.9e}", x * 1e9, rho).unwrap();
            }
        }
        SpectralAxis::FrequencyHz => {
            out.push_str("frequency_Hz,energy_density_J_per_m3_per_Hz\n");
            for &(x, rho) in grid.points() {
                writeln!(out, "{x:.9e},{rho:.9e}").unwrap();
            }
        }
    }
    out
}

/// Everything a scenario produces before any file is written.
#[derive(Debug, Clone)]
pub struct ScenarioOutputs {
    pub incident: Option<SpectralGrid>,
    pub emitted: Option<SpectralGrid>,
    pub transport: Option<TransportResult>,
    pub summary: RunSummary,
}

/// Run every configured stage. `base_dir` anchors relative input paths
/// (the entropy coefficients file).
pub fn evaluate(cfg: &ScenarioConfig, scenario: &str, base_dir: &Path) -> Result<ScenarioOutputs> {
    if cfg.radiometry.is_none()
        && cfg.converter.is_none()
        && cfg.slab.is_none()
        && cfg.entropy.is_none()
    {
        return Err(Error::config("scenario configures no executable stages"));
    }
    let mut scalars = Vec::new();
    let mut incident = None;
    let mut emitted = None;
    let mut transport_result = None;

    if let Some(r) = &cfg.radiometry {
        let grid = incident_spectrum(r)?;
        if grid.axis == SpectralAxis::WavelengthM {
            scalars.push(Scalar {
                name: "incident_peak_nm",
                value: grid.peak_coordinate() * 1e9,
                unit: "nm",
            });
        }
        incident = Some(grid);
    }

    if let Some(c) = &cfg.converter {
        let setup = build_converter(c)?;
        let pops = crate::converter::equilibrium_populations(&setup.spec, &setup.thermo)?;
        let (rho1, rho2) = equilibrium_densities(&setup.spec, &setup.thermo)?;
        let c_m = concentration_factor(&setup.spec, &setup.thermo)?;
        scalars.push(Scalar {
            name: "mu1_ev",
            value: setup.thermo.mu1 / EV,
            unit: "eV",
        });
        scalars.push(Scalar {
            name: "mu2_ev",
            value: setup.thermo.mu2 / EV,
            unit: "eV",
        });
        scalars.push(Scalar {
            name: "tm_k",
            value: setup.thermo.t_m,
            unit: "K",
        });
        scalars.push(Scalar {
            name: "q_per_s",
            value: setup.spec.q,
            unit: "1/s",
        });
        scalars.push(Scalar {
            name: "rho1_j_per_m3_per_hz",
            value: rho1,
            unit: "J/(m^3.Hz)",
        });
        scalars.push(Scalar {
            name: "rho2_j_per_m3_per_hz",
            value: rho2,
            unit: "J/(m^3.Hz)",
        });
        scalars.push(Scalar {
            name: "c_m",
            value: c_m,
            unit: "dimensionless",
        });
        scalars.push(Scalar {
            name: "n1_over_n0",
            value: pops.n1 / pops.n0,
            unit: "dimensionless",
        });
        scalars.push(Scalar {
            name: "n2_over_n0",
            value: pops.n2 / pops.n0,
            unit: "dimensionless",
        });
        if let Some(r) = &cfg.radiometry {
            let grid = emitted_spectrum(r, c, cfg.slab.as_ref())?;
            if grid.axis == SpectralAxis::WavelengthM {
                scalars.push(Scalar {
                    name: "emitted_peak_nm",
                    value: grid.peak_coordinate() * 1e9,
                    unit: "nm",
                });
            }
            emitted = Some(grid);
        }
    }

    if let Some(s) = &cfg.slab {
        let slab = build_slab(s)?;
        let eta_t = trapping_efficiency_analytic(slab.n_refr)?;
        let g = geometric_gain(&slab)?;
        let g_phi = flux_gain(&slab, eta_t)?;
        scalars.push(Scalar {
            name: "eta_t",
            value: eta_t,
            unit: "dimensionless",
        });
        scalars.push(Scalar {
            name: "g",
            value: g,
            unit: "dimensionless",
        });
        scalars.push(Scalar {
            name: "g_phi",
            value: g_phi,
            unit: "dimensionless",
        });
        scalars.push(Scalar {
            name: "g_phi_over_g",
            value: g_phi / g,
            unit: "dimensionless",
        });

        if let Some(t) = &cfg.transport {
            let result = trace_rays_with(
                &slab,
                t.n_rays,
                t.seed,
                TraceOptions {
                    survival: t.survival,
                    fresnel: t.fresnel,
                    ..TraceOptions::default()
                },
            )?;
            scalars.push(Scalar {
                name: "eta_t_mc",
                value: result.eta_t_estimate,
                unit: "dimensionless",
            });
            scalars.push(Scalar {
                name: "eta_t_mc_std_error",
                value: result.std_error,
                unit: "dimensionless",
            });
            scalars.push(Scalar {
                name: "edge_collected",
                value: result.counts.edge_collected as f64,
                unit: "rays",
            });
            scalars.push(Scalar {
                name: "escaped_top",
                value: result.counts.escaped_top as f64,
                unit: "rays",
            });
            scalars.push(Scalar {
                name: "escaped_bottom",
                value: result.counts.escaped_bottom as f64,
                unit: "rays",
            });
            scalars.push(Scalar {
                name: "reabsorbed_lost",
                value: result.counts.reabsorbed_lost as f64,
                unit: "rays",
            });
            transport_result = Some(result);
        }
    } else if cfg.transport.is_some() {
        return Err(Error::config("[transport] requires a [slab] section"));
    }

    if let Some(e) = &cfg.entropy {
        let path = resolve_input(base_dir, &e.coeffs_file);
        let text = fs::read_to_string(&path)
            .map_err(|err| Error::config(format!("cannot read {}: {err}", path.display())))?;
        let coeffs = parse_coeffs_text(&text)?;
        scalars.push(Scalar {
            name: "entropy_nats",
            value: emission_entropy_gain(&coeffs)?,
            unit: "nat",
        });
        scalars.push(Scalar {
            name: "electronic_dim",
            value: coeffs.electronic_dim() as f64,
            unit: "levels",
        });
    }

    Ok(ScenarioOutputs {
        incident,
        emitted,
        transport: transport_result,
        summary: RunSummary {
            scenario: scenario.to_string(),
            version: TOOL_VERSION,
            seed: cfg.transport.as_ref().map(|t| t.seed),
            scalars,
            input_echo: crate::config::serialize_config(cfg),
        },
    })
}

fn resolve_input(base_dir: &Path, path: &str) -> PathBuf {
    let p = Path::new(path);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base_dir.join(p)
    }
}

/// Run the scenario and write its outputs under `out_dir`: the spectra as
/// CSV (when `formats` includes csv) and the summary as both text and
/// key=value files (when it includes summary).
pub fn run_scenario(
    cfg: &ScenarioConfig,
    scenario: &str,
    base_dir: &Path,
    out_dir: &Path,
) -> Result<RunSummary> {
    let outputs = evaluate(cfg, scenario, base_dir)?;
    fs::create_dir_all(out_dir)?;
    if cfg.output.formats.csv {
        if let Some(grid) = &outputs.incident {
            fs::write(
                out_dir.join("incident_spectrum.csv"),
                render_spectrum_csv(grid),
            )?;
        }
        if let Some(grid) = &outputs.emitted {
            fs::write(
                out_dir.join("emitted_spectrum.csv"),
                render_spectrum_csv(grid),
            )?;
        }
    }
    if cfg.output.formats.summary {
        fs::write(out_dir.join("summary.txt"), outputs.summary.render_text())?;
        fs::write(out_dir.join("summary.kv"), outputs.summary.render_kv())?;
    }
    Ok(outputs.summary)
}

/// Write the incident/emitted spectrum pair; requires the radiometry and
/// converter sections. Returns the two file paths.
pub fn emit_spectra_pair(cfg: &ScenarioConfig, out_dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let Some(r) = &cfg.radiometry else {
        return Err(Error::config(
            "spectra emission requires a [radiometry] section",
        ));
    };
    let Some(c) = &cfg.converter else {
        return Err(Error::config(
            "spectra emission requires a [converter] section",
        ));
    };
    let incident = incident_spectrum(r)?;
    let emitted = emitted_spectrum(r, c, cfg.slab.as_ref())?;
    fs::create_dir_all(out_dir)?;
    let incident_path = out_dir.join("incident_spectrum.csv");
    let emitted_path = out_dir.join("emitted_spectrum.csv");
    fs::write(&incident_path, render_spectrum_csv(&incident))?;
    fs::write(&emitted_path, render_spectrum_csv(&emitted))?;
    Ok((incident_path, emitted_path))
}
