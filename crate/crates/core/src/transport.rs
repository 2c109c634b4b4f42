//! Slab-level geometric optics: escape-cone trapping, Monte Carlo photon
//! transport with total internal reflection and self-absorption, geometric
//! gain, and the flux-gain loss chain.
//!
//! Rays start at uniform random points in the slab volume with isotropic
//! directions. Reflection at the top and bottom faces is specular, so the
//! vertical direction cosine never changes magnitude: a ray either leaves
//! through a face at its first hit (incidence inside the escape cone) or
//! zig-zags to one of the four edges. Both termini are found in closed
//! form, making each ray O(1) regardless of bounce count. Edge arrival
//! counts as collection; the edges host the photovoltaic cells.
//!
//! Every ray draws from its own counter-based ChaCha stream keyed by
//! (seed, ray index), so results are independent of execution order and
//! of how rays are partitioned across threads.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Doped slab geometry and lumped dye efficiencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabSpec {
    /// Slab length (m).
    pub length: f64,
    /// Slab width (m).
    pub width: f64,
    /// Slab thickness (m).
    pub thickness: f64,
    /// Refractive index of the host (≥ 1).
    pub n_refr: f64,
    /// Absorption efficiency η_a ∈ [0, 1].
    pub eta_a: f64,
    /// Fluorescence quantum efficiency η_f ∈ [0, 1].
    pub eta_f: f64,
    /// Self-absorption coefficient θ_q ∈ [0, 1].
    pub theta_q: f64,
}

impl SlabSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.width > 0.0 && self.thickness > 0.0) {
            return Err(Error::domain("slab dimensions must be positive"));
        }
        if !(self.n_refr >= 1.0) {
            return Err(Error::domain("refractive index must be at least 1"));
        }
        for (name, v) in [
            ("eta_a", self.eta_a),
            ("eta_f", self.eta_f),
            ("theta_q", self.theta_q),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(format!("{name} must lie in [0, 1]")));
            }
        }
        Ok(())
    }
}

/// How one traced ray ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeTag {
    EdgeCollected,
    EscapedTop,
    EscapedBottom,
    ReabsorbedLost,
}

/// Per-ray record of the transport process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayOutcome {
    pub tag: OutcomeTag,
    /// Total path length inside the slab (m).
    pub path_length: f64,
    /// Number of face reflections before the terminus.
    pub bounce_count: u64,
}

/// Outcome tallies; the four tags partition the rays.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OutcomeCounts {
    pub edge_collected: u64,
    pub escaped_top: u64,
    pub escaped_bottom: u64,
    pub reabsorbed_lost: u64,
}

impl OutcomeCounts {
    fn add(&mut self, tag: OutcomeTag) {
        match tag {
            OutcomeTag::EdgeCollected => self.edge_collected += 1,
            OutcomeTag::EscapedTop => self.escaped_top += 1,
            OutcomeTag::EscapedBottom => self.escaped_bottom += 1,
            OutcomeTag::ReabsorbedLost => self.reabsorbed_lost += 1,
        }
    }

    fn merge(mut self, other: OutcomeCounts) -> OutcomeCounts {
        self.edge_collected += other.edge_collected;
        self.escaped_top += other.escaped_top;
        self.escaped_bottom += other.escaped_bottom;
        self.reabsorbed_lost += other.reabsorbed_lost;
        self
    }

    pub fn total(&self) -> u64 {
        self.edge_collected + self.escaped_top + self.escaped_bottom + self.reabsorbed_lost
    }
}

/// Aggregate result of a Monte Carlo transport run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportResult {
    pub n_rays: u64,
    pub seed: u64,
    pub counts: OutcomeCounts,
    /// Collected fraction: edge_collected / n_rays.
    pub eta_t_estimate: f64,
    /// Binomial standard error of the estimate.
    pub std_error: f64,
}

/// Self-absorption survival model applied to edge-bound rays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SurvivalModel {
    /// Exponential path-length survival e^{−αs}, with α calibrated so the
    /// mean loss over the edge-bound ensemble equals θ_q.
    #[default]
    ExponentialPath,
    /// Lumped per-ray Bernoulli loss with probability θ_q, independent of
    /// path length.
    PerRay,
}

/// Knobs for [`trace_rays_with`].
#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    pub survival: SurvivalModel,
    /// Apply Fresnel partial reflection below the critical angle instead of
    /// the binary escape/trap rule.
    pub fresnel: bool,
    /// Trace ray batches on multiple threads. Counts are identical to the
    /// serial run by construction. No effect without the `parallel` feature.
    pub parallel: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            survival: SurvivalModel::default(),
            fresnel: false,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

/// Trapped solid-angle fraction of an isotropic emitter between parallel
/// faces: η_t = sqrt(1 − 1/n²), the complement of the two escape cones.
pub fn trapping_efficiency_analytic(n_refr: f64) -> Result<f64> {
    if !(n_refr >= 1.0) {
        return Err(Error::domain("refractive index must be at least 1"));
    }
    Ok((1.0 - 1.0 / (n_refr * n_refr)).sqrt())
}

/// Geometric gain G: sunlit top surface over total edge surface,
/// G = L·W / (2(L + W)·t).
pub fn geometric_gain(slab: &SlabSpec) -> Result<f64> {
    slab.validate()?;
    Ok(slab.length * slab.width / (2.0 * (slab.length + slab.width) * slab.thickness))
}

/// Total flux gain G_Φ = G·η_a·η_f·η_t·(1 − θ_q).
///
/// `eta_t` may come from [`trapping_efficiency_analytic`] or from a
/// [`TransportResult`] estimate.
pub fn flux_gain(slab: &SlabSpec, eta_t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta_t) {
        return Err(Error::domain("eta_t must lie in [0, 1]"));
    }
    let g = geometric_gain(slab)?;
    Ok(g * slab.eta_a * slab.eta_f * eta_t * (1.0 - slab.theta_q))
}

/// Geometric terminus of one ray, before self-absorption.
struct GeometricRay {
    tag: OutcomeTag,
    path_length: f64,
    bounce_count: u64,
    /// Uniform variate reserved for the survival decision.
    survival_u: f64,
}

fn ray_stream(seed: u64, ray_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(ray_index);
    rng
}

/// Distance to the lateral boundary along (dx, dy) from (x0, y0), and the
/// unsigned distance to the first top/bottom face hit along dz from z0.
fn exit_distances(slab: &SlabSpec, pos: [f64; 3], dir: [f64; 3]) -> (f64, f64) {
    let axis_exit = |p: f64, d: f64, hi: f64| -> f64 {
        if d > 0.0 {
            (hi - p) / d
        } else if d < 0.0 {
            p / -d
        } else {
            f64::INFINITY
        }
    };
    let s_lat = axis_exit(pos[0], dir[0], slab.length).min(axis_exit(pos[1], dir[1], slab.width));
    let s_face = axis_exit(pos[2], dir[2], slab.thickness);
    (s_lat, s_face)
}

/// Unpolarized Fresnel transmittance from inside the slab (index n) into
/// air, for incidence cosine `cos_i` inside the escape cone.
fn fresnel_transmittance(n: f64, cos_i: f64) -> f64 {
    let sin_i_sq = 1.0 - cos_i * cos_i;
    let sin_t_sq = n * n * sin_i_sq;
    if sin_t_sq >= 1.0 {
        return 0.0;
    }
    let cos_t = (1.0 - sin_t_sq).sqrt();
    let rs = (n * cos_i - cos_t) / (n * cos_i + cos_t);
    let rp = (cos_i - n * cos_t) / (cos_i + n * cos_t);
    1.0 - 0.5 * (rs * rs + rp * rp)
}

fn trace_geometry(slab: &SlabSpec, fresnel: bool, rng: &mut ChaCha8Rng) -> GeometricRay {
    // Fixed draw order: position, direction, survival variate.
    let pos = [
        rng.gen::<f64>() * slab.length,
        rng.gen::<f64>() * slab.width,
        rng.gen::<f64>() * slab.thickness,
    ];
    let cos_theta: f64 = 2.0 * rng.gen::<f64>() - 1.0;
    let phi = TAU * rng.gen::<f64>();
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    let dir = [sin_theta * phi.cos(), sin_theta * phi.sin(), cos_theta];
    let survival_u = rng.gen::<f64>();

    let (s_lat, s_face) = exit_distances(slab, pos, dir);
    let cos_crit = (1.0 - 1.0 / (slab.n_refr * slab.n_refr)).sqrt();
    let abs_dz = dir[2].abs();

    if abs_dz <= cos_crit {
        // Trapped: total internal reflection at every face hit; the ray
        // runs straight in (x, y) to an edge. Face hits are periodic with
        // spacing t/|dz|.
        let bounce_count = if s_face >= s_lat || abs_dz == 0.0 {
            0
        } else {
            let period = slab.thickness / abs_dz;
            1 + ((s_lat - s_face) / period).floor() as u64
        };
        return GeometricRay {
            tag: OutcomeTag::EdgeCollected,
            path_length: s_lat,
            bounce_count,
            survival_u,
        };
    }

    let escape_tag = |going_up: bool| {
        if going_up {
            OutcomeTag::EscapedTop
        } else {
            OutcomeTag::EscapedBottom
        }
    };

    if !fresnel {
        // Binary rule: the first face hit escapes, unless an edge comes first.
        return if s_lat < s_face {
            GeometricRay {
                tag: OutcomeTag::EdgeCollected,
                path_length: s_lat,
                bounce_count: 0,
                survival_u,
            }
        } else {
            GeometricRay {
                tag: escape_tag(dir[2] > 0.0),
                path_length: s_face,
                bounce_count: 0,
                survival_u,
            }
        };
    }

    // Fresnel refinement: each face hit inside the escape cone transmits
    // with probability T(θ); reflections flip the vertical sense.
    let transmit = fresnel_transmittance(slab.n_refr, abs_dz);
    let period = slab.thickness / abs_dz;
    let mut s_hit = s_face;
    let mut going_up = dir[2] > 0.0;
    let mut bounces = 0u64;
    for _ in 0..100_000 {
        if s_lat < s_hit {
            return GeometricRay {
                tag: OutcomeTag::EdgeCollected,
                path_length: s_lat,
                bounce_count: bounces,
                survival_u,
            };
        }
        if rng.gen::<f64>() < transmit {
            return GeometricRay {
                tag: escape_tag(going_up),
                path_length: s_hit,
                bounce_count: bounces,
                survival_u,
            };
        }
        bounces += 1;
        going_up = !going_up;
        s_hit += period;
    }
    GeometricRay {
        tag: escape_tag(going_up),
        path_length: s_hit,
        bounce_count: bounces,
        survival_u,
    }
}

/// Trace the geometric terminus of a single ray of the (seed, index)
/// stream, before any self-absorption is applied.
pub fn trace_single_ray(slab: &SlabSpec, seed: u64, ray_index: u64) -> Result<RayOutcome> {
    slab.validate()?;
    let mut rng = ray_stream(seed, ray_index);
    let g = trace_geometry(slab, false, &mut rng);
    Ok(RayOutcome {
        tag: g.tag,
        path_length: g.path_length,
        bounce_count: g.bounce_count,
    })
}

/// Monte Carlo transport with default options (exponential self-absorption,
/// binary escape cone, parallel batches when built with the `parallel`
/// feature). Identical (slab, n_rays, seed) give bit-identical results.
pub fn trace_rays(slab: &SlabSpec, n_rays: u64, seed: u64) -> Result<TransportResult> {
    trace_rays_with(slab, n_rays, seed, TraceOptions::default())
}

/// Monte Carlo transport with explicit options.
pub fn trace_rays_with(
    slab: &SlabSpec,
    n_rays: u64,
    seed: u64,
    opts: TraceOptions,
) -> Result<TransportResult> {
    slab.validate()?;
    if n_rays == 0 {
        return Err(Error::config("transport requires at least one ray"));
    }

    let theta_q = slab.theta_q;
    let needs_calibration =
        opts.survival == SurvivalModel::ExponentialPath && theta_q > 0.0 && theta_q < 1.0;

    let counts = if needs_calibration {
        // Pass 1 keeps per-ray records in ray order so the calibration sum
        // is independent of thread partitioning.
        let records = map_rays(slab, n_rays, seed, opts, |g| {
            (g.tag, g.path_length, g.survival_u)
        });
        let edge_paths: Vec<f64> = records
            .iter()
            .filter(|r| r.0 == OutcomeTag::EdgeCollected)
            .map(|r| r.1)
            .collect();
        let alpha = calibrate_absorption(&edge_paths, theta_q);
        let mut counts = OutcomeCounts::default();
        for (tag, path, u) in records {
            let tag = if tag == OutcomeTag::EdgeCollected && u < 1.0 - (-alpha * path).exp() {
                OutcomeTag::ReabsorbedLost
            } else {
                tag
            };
            counts.add(tag);
        }
        counts
    } else {
        fold_rays(slab, n_rays, seed, opts, move |g| match g.tag {
            OutcomeTag::EdgeCollected if theta_q >= 1.0 => OutcomeTag::ReabsorbedLost,
            OutcomeTag::EdgeCollected
                if opts.survival == SurvivalModel::PerRay && g.survival_u < theta_q =>
            {
                OutcomeTag::ReabsorbedLost
            }
            tag => tag,
        })
    };

    debug_assert_eq!(counts.total(), n_rays);
    let p = counts.edge_collected as f64 / n_rays as f64;
    Ok(TransportResult {
        n_rays,
        seed,
        counts,
        eta_t_estimate: p,
        std_error: (p * (1.0 - p) / n_rays as f64).sqrt(),
    })
}

/// Solve mean(e^{−α·s}) = 1 − θ_q over the edge-bound path lengths by
/// bisection; the left side is monotone decreasing in α.
fn calibrate_absorption(paths: &[f64], theta_q: f64) -> f64 {
    if paths.is_empty() {
        return 0.0;
    }
    let target = 1.0 - theta_q;
    let mean_survival = |alpha: f64| -> f64 {
        paths.iter().map(|&s| (-alpha * s).exp()).sum::<f64>() / paths.len() as f64
    };
    let mean_path: f64 = paths.iter().sum::<f64>() / paths.len() as f64;
    let mut lo = 0.0;
    let mut hi = 1.0 / mean_path.max(f64::MIN_POSITIVE);
    let mut guard = 0;
    while mean_survival(hi) > target {
        hi *= 2.0;
        guard += 1;
        if guard > 600 {
            // Zero-length paths keep the mean above the target; every
            // positive path is absorbed at this point.
            return hi;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean_survival(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(feature = "parallel")]
fn fold_rays<F>(
    slab: &SlabSpec,
    n_rays: u64,
    seed: u64,
    opts: TraceOptions,
    classify: F,
) -> OutcomeCounts
where
    F: Fn(GeometricRay) -> OutcomeTag + Sync,
{
    let trace = |i: u64| trace_geometry(slab, opts.fresnel, &mut ray_stream(seed, i));
    if opts.parallel {
        (0..n_rays)
            .into_par_iter()
            .fold(OutcomeCounts::default, |mut c, i| {
                c.add(classify(trace(i)));
                c
            })
            .reduce(OutcomeCounts::default, OutcomeCounts::merge)
    } else {
        let mut c = OutcomeCounts::default();
        for i in 0..n_rays {
            c.add(classify(trace(i)));
        }
        c
    }
}

#[cfg(not(feature = "parallel"))]
fn fold_rays<F>(
    slab: &SlabSpec,
    n_rays: u64,
    seed: u64,
    opts: TraceOptions,
    classify: F,
) -> OutcomeCounts
where
    F: Fn(GeometricRay) -> OutcomeTag,
{
    let mut c = OutcomeCounts::default();
    for i in 0..n_rays {
        c.add(classify(trace_geometry(
            slab,
            opts.fresnel,
            &mut ray_stream(seed, i),
        )));
    }
    c
}

#[cfg(feature = "parallel")]
fn map_rays<T, F>(slab: &SlabSpec, n_rays: u64, seed: u64, opts: TraceOptions, project: F) -> Vec<T>
where
    T: Send,
    F: Fn(GeometricRay) -> T + Sync,
{
    let trace = |i: u64| project(trace_geometry(slab, opts.fresnel, &mut ray_stream(seed, i)));
    if opts.parallel {
        (0..n_rays).into_par_iter().map(trace).collect()
    } else {
        (0..n_rays).map(trace).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn map_rays<T, F>(slab: &SlabSpec, n_rays: u64, seed: u64, opts: TraceOptions, project: F) -> Vec<T>
where
    F: Fn(GeometricRay) -> T,
{
    (0..n_rays)
        .map(|i| project(trace_geometry(slab, opts.fresnel, &mut ray_stream(seed, i))))
        .collect()
}
