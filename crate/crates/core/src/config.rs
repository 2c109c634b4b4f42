//! Scenario configuration: an INI-style key/value format with typed
//! sections, strict diagnostics, and a canonical serializer.
//!
//! Grammar:
//!
//! ```text
//! # full-line comment (also ;)
//! [section]
//! key = value
//! ```
//!
//! Sections are `radiometry`, `converter`, `slab`, `transport`, `entropy`
//! and `output`; each may appear at most once. Unknown sections, unknown
//! keys and duplicate keys are hard errors that name the offender and its
//! line. Units sit in the key names: wavelengths in nm, energies in eV,
//! temperatures in K; values are converted to SI once, at parse time.
//!
//! Section keys (defaults in parentheses; `*` marks required keys):
//!
//! ```text
//! [radiometry] t1_k*, axis (wavelength), lambda_min_nm (300),
//!              lambda_max_nm (2500), nu_min_thz (100), nu_max_thz (1500),
//!              points (1000), mesh (uniform)
//! [converter]  e1_ev*, e2_ev*, b1*, b2*, a1_per_s, a2_per_s,
//!              q_per_s (0) | q_matrix_element_sq_j2 + q_linewidth_ev
//!              [+ q_prefactor (2π)], n_total_per_m3 (1e24), t0_k*, t1_k*,
//!              tm_k | erv_mean_ev [+ dof (6), equipartition_const (1)],
//!              mu1_ev, mu2_ev, line_fwhm_nm (20)
//! [slab]       length_m*, width_m*, thickness_m*, n_refr*, eta_a (1),
//!              eta_f (1), theta_q (0)
//! [transport]  n_rays (1000000), seed (42), survival (exponential),
//!              fresnel (false)
//! [entropy]    coeffs_file*
//! [output]     dir, formats (csv,summary)
//! ```
//!
//! `a1_per_s`/`a2_per_s` default to the spontaneous rates implied by
//! A = B·8πhν³/c³. The frequency-axis range keys apply only when
//! `axis = frequency`, the wavelength keys only when `axis = wavelength`.

use crate::error::{Error, Result};
use crate::radiometry::{MeshSpacing, SpectralAxis};
use crate::transport::SurvivalModel;
use std::collections::HashMap;
use std::f64::consts::PI;

const SECTION_ORDER: [&str; 6] = [
    "radiometry",
    "converter",
    "slab",
    "transport",
    "entropy",
    "output",
];

/// Spectral range on the configured axis (CLI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisRange {
    Wavelength { min_nm: f64, max_nm: f64 },
    Frequency { min_thz: f64, max_thz: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiometryConfig {
    /// Incident blackbody temperature (K).
    pub t1_k: f64,
    pub range: AxisRange,
    pub points: usize,
    pub mesh: MeshSpacing,
}

impl RadiometryConfig {
    pub fn axis(&self) -> SpectralAxis {
        match self.range {
            AxisRange::Wavelength { .. } => SpectralAxis::WavelengthM,
            AxisRange::Frequency { .. } => SpectralAxis::FrequencyHz,
        }
    }

    /// Range converted to SI grid coordinates (m or Hz).
    pub fn range_si(&self) -> (f64, f64) {
        match self.range {
            AxisRange::Wavelength { min_nm, max_nm } => (min_nm * 1e-9, max_nm * 1e-9),
            AxisRange::Frequency { min_thz, max_thz } => (min_thz * 1e12, max_thz * 1e12),
        }
    }
}

/// Internal transfer rate: given directly or derived from a coupling
/// matrix element through the broadened-delta rate formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QSpec {
    PerSecond(f64),
    MatrixElement {
        m_sq_j2: f64,
        linewidth_ev: f64,
        prefactor: f64,
    },
}

/// Molecular temperature: given directly or estimated by equipartition
/// from the mean roto-vibrational energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Thermalization {
    MolecularTemperatureK(f64),
    Equipartition {
        erv_mean_ev: f64,
        dof: u32,
        kappa: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConverterConfig {
    /// Absorption transition energy (eV).
    pub e1_ev: f64,
    /// Emission transition energy (eV).
    pub e2_ev: f64,
    pub b1: f64,
    pub b2: f64,
    /// Spontaneous rates; `None` uses A = B·8πhν³/c³.
    pub a1_per_s: Option<f64>,
    pub a2_per_s: Option<f64>,
    pub q: QSpec,
    pub n_total_per_m3: f64,
    pub t0_k: f64,
    pub t1_k: f64,
    pub thermalization: Thermalization,
    /// Chemical-potential overrides (eV); `None` derives μ = E·(1 − T0/T1).
    pub mu1_ev: Option<f64>,
    pub mu2_ev: Option<f64>,
    /// Fluorescence line width in the emitted spectrum (nm FWHM).
    pub line_fwhm_nm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabConfig {
    pub length_m: f64,
    pub width_m: f64,
    pub thickness_m: f64,
    pub n_refr: f64,
    pub eta_a: f64,
    pub eta_f: f64,
    pub theta_q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportConfig {
    pub n_rays: u64,
    pub seed: u64,
    pub survival: SurvivalModel,
    pub fresnel: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyConfig {
    pub coeffs_file: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Formats {
    pub csv: bool,
    pub summary: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Formats {
            csv: true,
            summary: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputConfig {
    pub dir: Option<String>,
    pub formats: Formats,
}

/// One parsed scenario: any subset of the pipeline stages.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScenarioConfig {
    pub radiometry: Option<RadiometryConfig>,
    pub converter: Option<ConverterConfig>,
    pub slab: Option<SlabConfig>,
    pub transport: Option<TransportConfig>,
    pub entropy: Option<EntropyConfig>,
    pub output: OutputConfig,
}

struct SectionReader {
    name: &'static str,
    entries: HashMap<String, (String, usize)>,
}

impl SectionReader {
    fn build(name: &'static str, raw: Vec<(String, String, usize)>) -> Result<Self> {
        let mut entries = HashMap::new();
        for (key, value, line) in raw {
            if entries.insert(key.clone(), (value, line)).is_some() {
                return Err(Error::config(format!(
                    "duplicate key `{key}` in [{name}] (line {line})"
                )));
            }
        }
        Ok(SectionReader { name, entries })
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.entries.remove(key)
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<f64>().map(Some).map_err(|_| {
                Error::config(format!(
                    "line {line}: key `{key}` expects a number, got `{v}`"
                ))
            }),
        }
    }

    fn take_positive(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take_f64(key)? {
            Some(v) if !(v > 0.0) => Err(Error::config(format!(
                "key `{key}` in [{}] must be positive",
                self.name
            ))),
            other => Ok(other),
        }
    }

    fn take_unit_interval(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take_f64(key)? {
            Some(v) if !(0.0..=1.0).contains(&v) => Err(Error::config(format!(
                "key `{key}` in [{}] must lie in [0, 1]",
                self.name
            ))),
            other => Ok(other),
        }
    }

    fn take_u64(&mut self, key: &str) -> Result<Option<u64>> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<u64>().map(Some).map_err(|_| {
                Error::config(format!(
                    "line {line}: key `{key}` expects a non-negative integer, got `{v}`"
                ))
            }),
        }
    }

    fn take_bool(&mut self, key: &str) -> Result<Option<bool>> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => match v.as_str() {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                _ => Err(Error::config(format!(
                    "line {line}: key `{key}` expects true or false, got `{v}`"
                ))),
            },
        }
    }

    fn take_string(&mut self, key: &str) -> Option<String> {
        self.take(key).map(|(v, _)| v)
    }

    fn require_f64(&mut self, key: &str) -> Result<f64> {
        self.take_f64(key)?.ok_or_else(|| {
            Error::config(format!("missing required key `{key}` in [{}]", self.name))
        })
    }

    fn require_positive(&mut self, key: &str) -> Result<f64> {
        self.take_positive(key)?.ok_or_else(|| {
            Error::config(format!("missing required key `{key}` in [{}]", self.name))
        })
    }

    /// Leftover keys are unknown: report the first in line order.
    fn finish(self) -> Result<()> {
        if let Some((key, (_, line))) = self.entries.into_iter().min_by_key(|(_, (_, line))| *line)
        {
            return Err(Error::config(format!(
                "unknown key `{key}` in [{}] (line {line})",
                self.name
            )));
        }
        Ok(())
    }
}

/// Parse a scenario from its textual form.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut sections: Vec<(String, usize)> = Vec::new();
    let mut raw: HashMap<String, Vec<(String, String, usize)>> = HashMap::new();
    let mut current: Option<String> = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| {
                Error::config_at(line_no, line.len(), "unterminated section header")
            })?;
            let name = name.trim();
            if !SECTION_ORDER.contains(&name) {
                return Err(Error::config(format!(
                    "line {line_no}: unknown section [{name}]"
                )));
            }
            if sections.iter().any(|(s, _)| s == name) {
                return Err(Error::config(format!(
                    "line {line_no}: section [{name}] appears twice"
                )));
            }
            sections.push((name.to_string(), line_no));
            current = Some(name.to_string());
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            let col = raw_line.len() - raw_line.trim_start().len() + 1;
            return Err(Error::config_at(
                line_no,
                col,
                "expected `[section]` or `key = value`",
            ));
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty()
            || !key
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        {
            let col = raw_line.find('=').map_or(1, |p| p + 1);
            return Err(Error::config_at(
                line_no,
                col,
                format!("invalid key `{key}`"),
            ));
        }
        if value.is_empty() {
            return Err(Error::config(format!(
                "line {line_no}: key `{key}` has an empty value"
            )));
        }
        let Some(section) = &current else {
            return Err(Error::config_at(
                line_no,
                1,
                format!("key `{key}` outside any section"),
            ));
        };
        raw.entry(section.clone())
            .or_default()
            .push((key.to_string(), value.to_string(), line_no));
    }

    if sections.is_empty() {
        return Err(Error::config("no scenario sections"));
    }

    let mut cfg = ScenarioConfig::default();
    for (name, _) in &sections {
        let entries = raw.remove(name.as_str()).unwrap_or_default();
        match name.as_str() {
            "radiometry" => cfg.radiometry = Some(parse_radiometry(entries)?),
            "converter" => cfg.converter = Some(parse_converter(entries)?),
            "slab" => cfg.slab = Some(parse_slab(entries)?),
            "transport" => cfg.transport = Some(parse_transport(entries)?),
            "entropy" => cfg.entropy = Some(parse_entropy(entries)?),
            "output" => cfg.output = parse_output(entries)?,
            _ => unreachable!("section names are pre-validated"),
        }
    }
    Ok(cfg)
}

fn parse_radiometry(raw: Vec<(String, String, usize)>) -> Result<RadiometryConfig> {
    let mut r = SectionReader::build("radiometry", raw)?;
    let t1_k = r.require_positive("t1_k")?;
    let axis = match r.take("axis") {
        None => SpectralAxis::WavelengthM,
        Some((v, line)) => match v.as_str() {
            "wavelength" => SpectralAxis::WavelengthM,
            "frequency" => SpectralAxis::FrequencyHz,
            _ => {
                return Err(Error::config(format!(
                    "line {line}: key `axis` expects wavelength or frequency, got `{v}`"
                )))
            }
        },
    };
    let lambda_min = r.take_positive("lambda_min_nm")?;
    let lambda_max = r.take_positive("lambda_max_nm")?;
    let nu_min = r.take_positive("nu_min_thz")?;
    let nu_max = r.take_positive("nu_max_thz")?;
    let range = match axis {
        SpectralAxis::WavelengthM => {
            if nu_min.is_some() || nu_max.is_some() {
                return Err(Error::config(
                    "keys `nu_min_thz`/`nu_max_thz` require axis = frequency",
                ));
            }
            AxisRange::Wavelength {
                min_nm: lambda_min.unwrap_or(300.0),
                max_nm: lambda_max.unwrap_or(2500.0),
            }
        }
        SpectralAxis::FrequencyHz => {
            if lambda_min.is_some() || lambda_max.is_some() {
                return Err(Error::config(
                    "keys `lambda_min_nm`/`lambda_max_nm` require axis = wavelength",
                ));
            }
            AxisRange::Frequency {
                min_thz: nu_min.unwrap_or(100.0),
                max_thz: nu_max.unwrap_or(1500.0),
            }
        }
    };
    let (lo, hi) = match range {
        AxisRange::Wavelength { min_nm, max_nm } => (min_nm, max_nm),
        AxisRange::Frequency { min_thz, max_thz } => (min_thz, max_thz),
    };
    if !(lo < hi) {
        return Err(Error::config(
            "radiometry range is empty or inverted: min must be below max",
        ));
    }
    let points = r.take_u64("points")?.unwrap_or(1000);
    if points < 2 {
        return Err(Error::config(
            "key `points` in [radiometry] must be at least 2",
        ));
    }
    let mesh = match r.take("mesh") {
        None => MeshSpacing::Uniform,
        Some((v, line)) => match v.as_str() {
            "uniform" => MeshSpacing::Uniform,
            "log" => MeshSpacing::LogUniform,
            _ => {
                return Err(Error::config(format!(
                    "line {line}: key `mesh` expects uniform or log, got `{v}`"
                )))
            }
        },
    };
    r.finish()?;
    Ok(RadiometryConfig {
        t1_k,
        range,
        points: points as usize,
        mesh,
    })
}

fn parse_converter(raw: Vec<(String, String, usize)>) -> Result<ConverterConfig> {
    let mut r = SectionReader::build("converter", raw)?;
    let e1_ev = r.require_positive("e1_ev")?;
    let e2_ev = r.require_positive("e2_ev")?;
    let b1 = r.require_f64("b1")?;
    let b2 = r.require_f64("b2")?;
    for (key, v) in [("b1", b1), ("b2", b2)] {
        if !(v >= 0.0) {
            return Err(Error::config(format!(
                "key `{key}` in [converter] must be non-negative"
            )));
        }
    }
    let a1_per_s = r.take_f64("a1_per_s")?;
    let a2_per_s = r.take_f64("a2_per_s")?;
    let q_direct = r.take_f64("q_per_s")?;
    let q_m_sq = r.take_f64("q_matrix_element_sq_j2")?;
    let q_linewidth = r.take_positive("q_linewidth_ev")?;
    let q_prefactor = r.take_f64("q_prefactor")?;
    let q = match (q_direct, q_m_sq) {
        (Some(_), Some(_)) => {
            return Err(Error::config(
                "keys `q_per_s` and `q_matrix_element_sq_j2` are mutually exclusive",
            ))
        }
        (Some(q), None) => {
            if q_linewidth.is_some() || q_prefactor.is_some() {
                return Err(Error::config(
                    "keys `q_linewidth_ev`/`q_prefactor` apply only with `q_matrix_element_sq_j2`",
                ));
            }
            QSpec::PerSecond(q)
        }
        (None, Some(m_sq_j2)) => QSpec::MatrixElement {
            m_sq_j2,
            linewidth_ev: q_linewidth.ok_or_else(|| {
                Error::config("key `q_matrix_element_sq_j2` requires `q_linewidth_ev`")
            })?,
            prefactor: q_prefactor.unwrap_or(2.0 * PI),
        },
        (None, None) => {
            if q_linewidth.is_some() || q_prefactor.is_some() {
                return Err(Error::config(
                    "keys `q_linewidth_ev`/`q_prefactor` apply only with `q_matrix_element_sq_j2`",
                ));
            }
            QSpec::PerSecond(0.0)
        }
    };
    let n_total_per_m3 = r.take_positive("n_total_per_m3")?.unwrap_or(1e24);
    let t0_k = r.require_positive("t0_k")?;
    let t1_k = r.require_positive("t1_k")?;
    let tm = r.take_positive("tm_k")?;
    let erv = r.take_f64("erv_mean_ev")?;
    let dof = r.take_u64("dof")?;
    let kappa = r.take_positive("equipartition_const")?;
    let thermalization = match (tm, erv) {
        (Some(_), Some(_)) => {
            return Err(Error::config(
                "keys `tm_k` and `erv_mean_ev` are mutually exclusive",
            ))
        }
        (Some(t), None) => {
            if dof.is_some() || kappa.is_some() {
                return Err(Error::config(
                    "keys `dof`/`equipartition_const` apply only with `erv_mean_ev`",
                ));
            }
            Thermalization::MolecularTemperatureK(t)
        }
        (None, Some(e)) => {
            if !(e >= 0.0) {
                return Err(Error::config(
                    "key `erv_mean_ev` in [converter] must be non-negative",
                ));
            }
            let dof = dof.unwrap_or(6);
            if dof == 0 {
                return Err(Error::config("key `dof` in [converter] must be at least 1"));
            }
            Thermalization::Equipartition {
                erv_mean_ev: e,
                dof: dof as u32,
                kappa: kappa.unwrap_or(1.0),
            }
        }
        (None, None) => {
            return Err(Error::config(
                "[converter] requires `tm_k` or `erv_mean_ev`",
            ))
        }
    };
    let mu1_ev = r.take_f64("mu1_ev")?;
    let mu2_ev = r.take_f64("mu2_ev")?;
    let line_fwhm_nm = r.take_positive("line_fwhm_nm")?.unwrap_or(20.0);
    r.finish()?;
    Ok(ConverterConfig {
        e1_ev,
        e2_ev,
        b1,
        b2,
        a1_per_s,
        a2_per_s,
        q,
        n_total_per_m3,
        t0_k,
        t1_k,
        thermalization,
        mu1_ev,
        mu2_ev,
        line_fwhm_nm,
    })
}

fn parse_slab(raw: Vec<(String, String, usize)>) -> Result<SlabConfig> {
    let mut r = SectionReader::build("slab", raw)?;
    let length_m = r.require_positive("length_m")?;
    let width_m = r.require_positive("width_m")?;
    let thickness_m = r.require_positive("thickness_m")?;
    let n_refr = r.require_positive("n_refr")?;
    if n_refr < 1.0 {
        return Err(Error::config("key `n_refr` in [slab] must be at least 1"));
    }
    let eta_a = r.take_unit_interval("eta_a")?.unwrap_or(1.0);
    let eta_f = r.take_unit_interval("eta_f")?.unwrap_or(1.0);
    let theta_q = r.take_unit_interval("theta_q")?.unwrap_or(0.0);
    r.finish()?;
    Ok(SlabConfig {
        length_m,
        width_m,
        thickness_m,
        n_refr,
        eta_a,
        eta_f,
        theta_q,
    })
}

fn parse_transport(raw: Vec<(String, String, usize)>) -> Result<TransportConfig> {
    let mut r = SectionReader::build("transport", raw)?;
    let n_rays = r.take_u64("n_rays")?.unwrap_or(1_000_000);
    if n_rays == 0 {
        return Err(Error::config(
            "key `n_rays` in [transport] must be at least 1",
        ));
    }
    let seed = r.take_u64("seed")?.unwrap_or(42);
    let survival = match r.take("survival") {
        None => SurvivalModel::ExponentialPath,
        Some((v, line)) => match v.as_str() {
            "exponential" => SurvivalModel::ExponentialPath,
            "per_ray" => SurvivalModel::PerRay,
            _ => {
                return Err(Error::config(format!(
                    "line {line}: key `survival` expects exponential or per_ray, got `{v}`"
                )))
            }
        },
    };
    let fresnel = r.take_bool("fresnel")?.unwrap_or(false);
    r.finish()?;
    Ok(TransportConfig {
        n_rays,
        seed,
        survival,
        fresnel,
    })
}

fn parse_entropy(raw: Vec<(String, String, usize)>) -> Result<EntropyConfig> {
    let mut r = SectionReader::build("entropy", raw)?;
    let coeffs_file = r
        .take_string("coeffs_file")
        .ok_or_else(|| Error::config("missing required key `coeffs_file` in [entropy]"))?;
    r.finish()?;
    Ok(EntropyConfig { coeffs_file })
}

fn parse_output(raw: Vec<(String, String, usize)>) -> Result<OutputConfig> {
    let mut r = SectionReader::build("output", raw)?;
    let dir = r.take_string("dir");
    let formats = match r.take("formats") {
        None => Formats::default(),
        Some((v, line)) => {
            let mut formats = Formats {
                csv: false,
                summary: false,
            };
            for item in v.split(',') {
                match item.trim() {
                    "csv" => formats.csv = true,
                    "summary" => formats.summary = true,
                    other => {
                        return Err(Error::config(format!(
                        "line {line}: key `formats` expects a list of csv,summary; got `{other}`"
                    )))
                    }
                }
            }
            formats
        }
    };
    r.finish()?;
    Ok(OutputConfig { dir, formats })
}

/// Canonical textual form; `parse_config(serialize_config(&c))` equals `c`.
pub fn serialize_config(cfg: &ScenarioConfig) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    if let Some(r) = &cfg.radiometry {
        out.push_str("[radiometry]\n");
        writeln!(out, "t1_k = {}", r.t1_k).unwrap();
        match r.range {
            AxisRange::Wavelength { min_nm, max_nm } => {
                out.push_str("axis = wavelength\n");
                writeln!(out, "lambda_min_nm = {min_nm}").unwrap();
                writeln!(out, "lambda_max_nm = {max_nm}").unwrap();
            }
            AxisRange::Frequency { min_thz, max_thz } => {
                out.push_str("axis = frequency\n");
                writeln!(out, "nu_min_thz = {min_thz}").unwrap();
                writeln!(out, "nu_max_thz = {max_thz}").unwrap();
            }
        }
        writeln!(out, "points = {}", r.points).unwrap();
        writeln!(
            out,
            "mesh = {}",
            match r.mesh {
                MeshSpacing::Uniform => "uniform",
                MeshSpacing::LogUniform => "log",
            }
        )
        .unwrap();
        out.push('\n');
    }
    if let Some(c) = &cfg.converter {
        out.push_str("[converter]\n");
        writeln!(out, "e1_ev = {}", c.e1_ev).unwrap();
        writeln!(out, "e2_ev = {}", c.e2_ev).unwrap();
        writeln!(out, "b1 = {}", c.b1).unwrap();
        writeln!(out, "b2 = {}", c.b2).unwrap();
        if let Some(a1) = c.a1_per_s {
            writeln!(out, "a1_per_s = {a1}").unwrap();
        }
        if let Some(a2) = c.a2_per_s {
            writeln!(out, "a2_per_s = {a2}").unwrap();
        }
        match c.q {
            QSpec::PerSecond(q) => writeln!(out, "q_per_s = {q}").unwrap(),
            QSpec::MatrixElement {
                m_sq_j2,
                linewidth_ev,
                prefactor,
            } => {
                writeln!(out, "q_matrix_element_sq_j2 = {m_sq_j2}").unwrap();
                writeln!(out, "q_linewidth_ev = {linewidth_ev}").unwrap();
                writeln!(out, "q_prefactor = {prefactor}").unwrap();
            }
        }
        writeln!(out, "n_total_per_m3 = {}", c.n_total_per_m3).unwrap();
        writeln!(out, "t0_k = {}", c.t0_k).unwrap();
        writeln!(out, "t1_k = {}", c.t1_k).unwrap();
        match c.thermalization {
            Thermalization::MolecularTemperatureK(t) => writeln!(out, "tm_k = {t}").unwrap(),
            Thermalization::Equipartition {
                erv_mean_ev,
                dof,
                kappa,
            } => {
                writeln!(out, "erv_mean_ev = {erv_mean_ev}").unwrap();
                writeln!(out, "dof = {dof}").unwrap();
                writeln!(out, "equipartition_const = {kappa}").unwrap();
            }
        }
        if let Some(mu1) = c.mu1_ev {
            writeln!(out, "mu1_ev = {mu1}").unwrap();
        }
        if let Some(mu2) = c.mu2_ev {
            writeln!(out, "mu2_ev = {mu2}").unwrap();
        }
        writeln!(out, "line_fwhm_nm = {}", c.line_fwhm_nm).unwrap();
        out.push('\n');
    }
    if let Some(s) = &cfg.slab {
        out.push_str("[slab]\n");
        writeln!(out, "length_m = {}", s.length_m).unwrap();
        writeln!(out, "width_m = {}", s.width_m).unwrap();
        writeln!(out, "thickness_m = {}", s.thickness_m).unwrap();
        writeln!(out, "n_refr = {}", s.n_refr).unwrap();
        writeln!(out, "eta_a = {}", s.eta_a).unwrap();
        writeln!(out, "eta_f = {}", s.eta_f).unwrap();
        writeln!(out, "theta_q = {}", s.theta_q).unwrap();
        out.push('\n');
    }
    if let Some(t) = &cfg.transport {
        out.push_str("[transport]\n");
        writeln!(out, "n_rays = {}", t.n_rays).unwrap();
        writeln!(out, "seed = {}", t.seed).unwrap();
        writeln!(
            out,
            "survival = {}",
            match t.survival {
                SurvivalModel::ExponentialPath => "exponential",
                SurvivalModel::PerRay => "per_ray",
            }
        )
        .unwrap();
        writeln!(out, "fresnel = {}", t.fresnel).unwrap();
        out.push('\n');
    }
    if let Some(e) = &cfg.entropy {
        out.push_str("[entropy]\n");
        writeln!(out, "coeffs_file = {}", e.coeffs_file).unwrap();
        out.push('\n');
    }
    out.push_str("[output]\n");
    if let Some(dir) = &cfg.output.dir {
        writeln!(out, "dir = {dir}").unwrap();
    }
    let mut formats = Vec::new();
    if cfg.output.formats.csv {
        formats.push("csv");
    }
    if cfg.output.formats.summary {
        formats.push("summary");
    }
    if formats.is_empty() {
        formats.push("summary"); // at least the scalars are always reported
    }
    writeln!(out, "formats = {}", formats.join(",")).unwrap();
    out
}
