//! `lsc`: scenario-driven front end for the spectral-converter model.
//!
//! Exit codes: 0 success, 2 configuration/usage error, 3 physics/domain
//! error. The default output directory comes from `LSC_OUT_DIR`; a
//! scenario's `[output] dir` overrides it, and `--out` overrides both.

use clap::{Parser, Subcommand};
use lsc_core::config::{parse_config, ScenarioConfig};
use lsc_core::entropy::{parse_coeffs_text, reduce_density_matrix, von_neumann_entropy};
use lsc_core::error::{Error, Result};
use lsc_core::scenario::{emit_spectra_pair, incident_spectrum, render_spectrum_csv, run_scenario};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lsc",
    version,
    about = "Molecular spectral converters in luminescent solar concentrators",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every stage configured in a scenario file and write CSV spectra
    /// plus text and key=value summaries.
    Run {
        /// Scenario configuration file.
        config: PathBuf,
        /// Output directory (overrides `[output] dir` and LSC_OUT_DIR).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the `[transport]` seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the `[radiometry]` point count.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Write the incident spectrum (and the emitted one, when a converter
    /// is configured) as CSV.
    Spectra {
        /// Scenario configuration file.
        config: PathBuf,
        /// Output directory (overrides `[output] dir` and LSC_OUT_DIR).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the von Neumann entropy of a superposition-coefficients file.
    Entropy {
        /// Coefficient matrix: one electronic row per line, `re,im` entries.
        coeffs: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run {
            config,
            out,
            seed,
            points,
        } => {
            let (mut cfg, name, base) = load_scenario(&config)?;
            if let Some(seed) = seed {
                let t = cfg.transport.as_mut().ok_or_else(|| {
                    Error::config("--seed requires a [transport] section in the scenario")
                })?;
                t.seed = seed;
            }
            if let Some(points) = points {
                let r = cfg.radiometry.as_mut().ok_or_else(|| {
                    Error::config("--points requires a [radiometry] section in the scenario")
                })?;
                if points < 2 {
                    return Err(Error::config("--points must be at least 2"));
                }
                r.points = points;
            }
            let out_dir = resolve_out_dir(out, &cfg);
            let summary = run_scenario(&cfg, &name, &base, &out_dir)?;
            print!("{}", summary.render_text());
            Ok(())
        }
        Command::Spectra { config, out } => {
            let (cfg, _, _) = load_scenario(&config)?;
            let out_dir = resolve_out_dir(out, &cfg);
            if cfg.converter.is_some() {
                let (incident, emitted) = emit_spectra_pair(&cfg, &out_dir)?;
                println!("{}", incident.display());
                println!("{}", emitted.display());
            } else {
                let r = cfg.radiometry.as_ref().ok_or_else(|| {
                    Error::config("spectra emission requires a [radiometry] section")
                })?;
                let grid = incident_spectrum(r)?;
                fs::create_dir_all(&out_dir)?;
                let path = out_dir.join("incident_spectrum.csv");
                fs::write(&path, render_spectrum_csv(&grid))?;
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Entropy { coeffs } => {
            let text = fs::read_to_string(&coeffs)
                .map_err(|e| Error::config(format!("cannot read {}: {e}", coeffs.display())))?;
            let coeffs = parse_coeffs_text(&text)?;
            let dm = reduce_density_matrix(&coeffs)?;
            let mut eigenvalues = dm.eigenvalues();
            eigenvalues.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
            println!("electronic_dim = {}", coeffs.electronic_dim());
            println!("nuclear_dim = {}", coeffs.nuclear_dim());
            println!(
                "eigenvalues = {}",
                eigenvalues
                    .iter()
                    .map(|l| format!("{l:.12e}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            println!("entropy_nats = {:.12e}", von_neumann_entropy(&dm));
            Ok(())
        }
    }
}

fn load_scenario(config: &Path) -> Result<(ScenarioConfig, String, PathBuf)> {
    let text = fs::read_to_string(config)
        .map_err(|e| Error::config(format!("cannot read {}: {e}", config.display())))?;
    let cfg = parse_config(&text)?;
    let name = config
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".to_string());
    let base = config
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    Ok((cfg, name, base))
}

fn resolve_out_dir(flag: Option<PathBuf>, cfg: &ScenarioConfig) -> PathBuf {
    flag.or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .or_else(|| std::env::var_os("LSC_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}
