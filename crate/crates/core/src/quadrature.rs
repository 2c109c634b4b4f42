//! Adaptive quadrature for spectral integrals.
//!
//! Recursive Simpson subdivision with combined absolute and relative
//! tolerances (both default 1e-9). Integrands spanning the whole real
//! line go through the rational substitution x = s·t/(1 − t²), which
//! maps (−1, 1) onto ℝ and keeps 1/x²-tailed integrands regular.

use crate::error::{Error, Result};

/// Tolerances and recursion limit for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_depth: 60,
        }
    }
}

/// Integrate `f` over `[a, b]` with default tolerances.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    integrate_with(f, a, b, QuadratureConfig::default())
}

/// Integrate `f` over `[a, b]` with explicit tolerances.
pub fn integrate_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: QuadratureConfig,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration bounds must be finite"));
    }
    if a >= b {
        return Err(Error::domain("integration requires a < b"));
    }
    let fa = eval(&f, a)?;
    let fb = eval(&f, b)?;
    let m = 0.5 * (a + b);
    let fm = eval(&f, m)?;
    let whole = simpson(fa, fm, fb, b - a);
    adaptive(
        &f,
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        cfg.abs_tol,
        &cfg,
        cfg.max_depth,
    )
}

/// Integrate `f` over the whole real line.
///
/// `scale` sets the width of the region resolved around the origin and must
/// be positive; choose it comparable to the integrand's characteristic width.
pub fn integrate_real_line<F: Fn(f64) -> f64>(f: F, scale: f64) -> Result<f64> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::domain(
            "real-line integration scale must be positive and finite",
        ));
    }
    // Endpoint inset keeps the Jacobian finite; the untransformed tails
    // beyond |x| ~ scale/(2e-10) are dropped.
    let eps = 1e-10;
    let g = |t: f64| {
        let d = 1.0 - t * t;
        let x = scale * t / d;
        let jac = scale * (1.0 + t * t) / (d * d);
        f(x) * jac
    };
    integrate(g, -1.0 + eps, 1.0 - eps)
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_nan() {
        return Err(Error::domain(format!(
            "integrand returned NaN at x = {x:e}"
        )));
    }
    Ok(v)
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h * (fa + 4.0 * fm + fb) / 6.0
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    abs_tol: f64,
    cfg: &QuadratureConfig,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(f, lm)?;
    let frm = eval(f, rm)?;
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let refined = left + right;
    let err = (refined - whole) / 15.0;
    let tol = abs_tol.max(cfg.rel_tol * refined.abs());
    if depth == 0 || err.abs() <= tol {
        return Ok(refined + err);
    }
    let l = adaptive(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, cfg, depth - 1)?;
    let r = adaptive(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, cfg, depth - 1)?;
    Ok(l + r)
}
