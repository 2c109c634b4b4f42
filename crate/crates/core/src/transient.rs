//! Time integration of the three-level rate equations.
//!
//! The occupations obey a linear system dN/dt = M·N + b in (N1, N2), stiff
//! whenever pumping and spontaneous rates differ by orders of magnitude.
//! Steps use the implicit trapezoidal rule (A-stable), with step doubling
//! for error control. The algebraic solve in [`crate::converter`] is the
//! production path; this integrator cross-validates it and serves
//! transient studies.

use crate::converter::{ConverterSpec, Populations};
use crate::error::{Error, Result};

/// Step-size control for the trapezoidal integrator.
#[derive(Debug, Clone, Copy)]
pub struct IntegrationOptions {
    /// Per-step absolute tolerance as a fraction of N_total.
    pub tol_fraction: f64,
    /// Hard cap on accepted steps.
    pub max_steps: usize,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        IntegrationOptions {
            tol_fraction: 1e-12,
            max_steps: 200_000,
        }
    }
}

struct LinearSystem {
    m: [[f64; 2]; 2],
    b: [f64; 2],
}

impl LinearSystem {
    fn build(spec: &ConverterSpec, rho1: f64, rho2: f64) -> Self {
        let p1 = spec.b1 * rho1;
        let p2 = spec.b2 * rho2;
        LinearSystem {
            m: [
                [-(2.0 * p1 + spec.a1 + spec.q), -p1],
                [spec.q - p2, -(2.0 * p2 + spec.a2)],
            ],
            b: [p1 * spec.n_total, p2 * spec.n_total],
        }
    }

    /// One implicit trapezoidal step: (I − h/2·M)·n⁺ = (I + h/2·M)·n + h·b.
    fn trapezoid_step(&self, n: [f64; 2], h: f64) -> Result<[f64; 2]> {
        let hm = 0.5 * h;
        let a11 = 1.0 - hm * self.m[0][0];
        let a12 = -hm * self.m[0][1];
        let a21 = -hm * self.m[1][0];
        let a22 = 1.0 - hm * self.m[1][1];
        let e = [
            n[0] + hm * (self.m[0][0] * n[0] + self.m[0][1] * n[1]) + h * self.b[0],
            n[1] + hm * (self.m[1][0] * n[0] + self.m[1][1] * n[1]) + h * self.b[1],
        ];
        let det = a11 * a22 - a12 * a21;
        if det.abs() <= f64::MIN_POSITIVE {
            return Err(Error::domain("trapezoidal step matrix is singular"));
        }
        Ok([
            (e[0] * a22 - a12 * e[1]) / det,
            (a11 * e[1] - a21 * e[0]) / det,
        ])
    }

    /// Slowest decay time of the homogeneous system, 1/|max Re λ|.
    fn slowest_timescale(&self) -> Option<f64> {
        let tr = self.m[0][0] + self.m[1][1];
        let det = self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0];
        let disc = tr * tr - 4.0 * det;
        let slowest = if disc >= 0.0 {
            let s = disc.sqrt();
            let l1 = 0.5 * (tr + s);
            let l2 = 0.5 * (tr - s);
            l1.max(l2)
        } else {
            0.5 * tr
        };
        if slowest < 0.0 {
            Some(1.0 / -slowest)
        } else {
            None
        }
    }
}

/// Integrate the occupations from `(n1_0, n2_0)` for a duration `t_end`,
/// recording every accepted step as `(t, populations)`.
pub fn trajectory(
    spec: &ConverterSpec,
    rho1: f64,
    rho2: f64,
    n1_0: f64,
    n2_0: f64,
    t_end: f64,
    opts: IntegrationOptions,
) -> Result<Vec<(f64, Populations)>> {
    spec.validate()?;
    if !(rho1 >= 0.0 && rho2 >= 0.0) {
        return Err(Error::domain("radiation densities must be non-negative"));
    }
    if !(t_end > 0.0) {
        return Err(Error::domain("integration horizon must be positive"));
    }
    let sys = LinearSystem::build(spec, rho1, rho2);
    let tol = opts.tol_fraction * spec.n_total;
    let mut n = [n1_0, n2_0];
    let mut t = 0.0;
    // Initial step from the fastest rate present.
    let rate_scale = sys.m[0][0].abs().max(sys.m[1][1].abs()).max(1.0 / t_end);
    let mut h = (0.01 / rate_scale).min(t_end);
    let mut out = vec![(
        0.0,
        Populations {
            n0: spec.n_total - n[0] - n[1],
            n1: n[0],
            n2: n[1],
        },
    )];
    let mut steps = 0;
    while t < t_end {
        if steps >= opts.max_steps {
            return Err(Error::domain("integration exceeded the step budget"));
        }
        let h_try = h.min(t_end - t);
        let full = sys.trapezoid_step(n, h_try)?;
        let half = sys.trapezoid_step(n, 0.5 * h_try)?;
        let two = sys.trapezoid_step(half, 0.5 * h_try)?;
        // Trapezoid is second order: Richardson error of the halved pair.
        let err = ((two[0] - full[0]).abs()).max((two[1] - full[1]).abs()) / 3.0;
        if err <= tol {
            t += h_try;
            n = two;
            out.push((
                t,
                Populations {
                    n0: spec.n_total - n[0] - n[1],
                    n1: n[0],
                    n2: n[1],
                },
            ));
            let grow = if err == 0.0 {
                5.0
            } else {
                0.9 * (tol / err).powf(1.0 / 3.0)
            };
            h = h_try * grow.clamp(1.0, 5.0);
        } else {
            h = h_try * (0.9 * (tol / err).powf(1.0 / 3.0)).clamp(0.1, 0.9);
        }
        steps += 1;
    }
    Ok(out)
}

/// Integrate from `(n1_0, n2_0)` until the transient has fully decayed and
/// return the settled occupations.
///
/// The horizon is 60 slowest decay times, so the remaining transient is
/// below e⁻⁶⁰ of its initial amplitude.
pub fn settle(
    spec: &ConverterSpec,
    rho1: f64,
    rho2: f64,
    n1_0: f64,
    n2_0: f64,
    opts: IntegrationOptions,
) -> Result<Populations> {
    spec.validate()?;
    let sys = LinearSystem::build(spec, rho1, rho2);
    let tau = sys
        .slowest_timescale()
        .ok_or_else(|| Error::domain("kinetics do not relax: no decaying mode"))?;
    let traj = trajectory(spec, rho1, rho2, n1_0, n2_0, 60.0 * tau, opts)?;
    Ok(traj.last().expect("trajectory is never empty").1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::converter::{steady_state, ConverterSpec};
    use crate::radiometry::planck_density_nu;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pumped_case(seed: u64) -> (ConverterSpec, f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambda1 = rng.gen_range(350e-9..550e-9);
        let lambda2 = rng.gen_range(lambda1 + 30e-9..850e-9);
        let spec = ConverterSpec::with_einstein_rates(
            crate::constants::LIGHT_SPEED / lambda1,
            crate::constants::LIGHT_SPEED / lambda2,
            10f64.powf(rng.gen_range(19.0..21.0)),
            10f64.powf(rng.gen_range(19.0..21.0)),
            0.0,
            1e24,
        )
        .unwrap();
        let mut spec = spec;
        spec.q = spec.a1 * rng.gen_range(0.0..2.0);
        let rho1 = planck_density_nu(spec.nu1, 5800.0).unwrap();
        let rho2 = planck_density_nu(spec.nu2, 350.0).unwrap();
        (spec, rho1, rho2)
    }

    #[test]
    fn settles_to_algebraic_steady_state() {
        for seed in 0..5 {
            let (spec, rho1, rho2) = pumped_case(seed);
            let target = steady_state(&spec, rho1, rho2).unwrap();
            let settled =
                settle(&spec, rho1, rho2, 0.0, 0.0, IntegrationOptions::default()).unwrap();
            let scale = target.n1.abs().max(target.n2.abs());
            assert!((settled.n1 - target.n1).abs() <= 1e-8 * scale);
            assert!((settled.n2 - target.n2).abs() <= 1e-8 * scale);
        }
    }

    #[test]
    fn conserves_population_along_trajectory() {
        let (spec, rho1, rho2) = pumped_case(42);
        let traj = trajectory(
            &spec,
            rho1,
            rho2,
            0.0,
            0.0,
            1e-3,
            IntegrationOptions::default(),
        )
        .unwrap();
        assert!(traj.len() > 2);
        for (_, pop) in &traj {
            assert!((pop.total() - spec.n_total).abs() <= 1e-9 * spec.n_total);
            assert!(pop.n1 >= -1e-9 * spec.n_total && pop.n2 >= -1e-9 * spec.n_total);
        }
    }

    #[test]
    fn trajectory_monotone_rise_from_dark_start() {
        let (spec, rho1, rho2) = pumped_case(7);
        let traj = trajectory(
            &spec,
            rho1,
            rho2,
            0.0,
            0.0,
            1e-5,
            IntegrationOptions::default(),
        )
        .unwrap();
        let first = traj[1].1;
        let last = traj.last().unwrap().1;
        assert!(first.n1 > 0.0);
        assert!(last.n1 >= first.n1);
    }

    #[test]
    fn dark_system_stays_dark() {
        let (spec, _, _) = pumped_case(3);
        let settled = settle(&spec, 0.0, 0.0, 0.0, 0.0, IntegrationOptions::default()).unwrap();
        assert_relative_eq!(settled.n0, spec.n_total, max_relative = 1e-12);
        assert!(settled.n1.abs() <= 1e-12 * spec.n_total);
    }

    #[test]
    fn rejects_bad_horizon() {
        let (spec, rho1, rho2) = pumped_case(5);
        assert!(trajectory(
            &spec,
            rho1,
            rho2,
            0.0,
            0.0,
            0.0,
            IntegrationOptions::default()
        )
        .is_err());
    }
}
