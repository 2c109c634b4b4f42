//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Run with `cargo test -p lsc-core --test acceptance -- --nocapture
//! --test-threads=1` to see the lines and the single-threaded timings.

use lsc_core::config::parse_config;
use lsc_core::constants::{BOLTZMANN, LIGHT_SPEED, PLANCK};
use lsc_core::converter::{
    concentration_factor, equilibrium_densities, equilibrium_populations, rate_derivatives,
    steady_state, ConverterSpec, ThermoState,
};
use lsc_core::entropy::{
    reduce_density_matrix, von_neumann_entropy, DensityMatrix, SuperpositionCoeffs,
};
use lsc_core::quadrature;
use lsc_core::radiometry::{planck_density_lambda, planck_density_nu};
use lsc_core::scenario::{emit_spectra_pair, evaluate, run_scenario};
use lsc_core::transient::{settle, IntegrationOptions};
use lsc_core::transport::{trace_rays_with, trapping_efficiency_analytic, SlabSpec, TraceOptions};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

fn report(n: u32, ok: bool, what: &str, started: Instant) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!(
        "[{verdict}] criterion {n}: {what} ({:.2} s)",
        started.elapsed().as_secs_f64()
    );
    assert!(ok, "criterion {n} failed: {what}");
}

/// Random converter with Einstein-consistent rates (A = B·8πhν³/c³), the
/// relation under which the radiative equilibria close.
fn sample_spec(rng: &mut ChaCha8Rng) -> ConverterSpec {
    let lambda1 = rng.gen_range(350e-9..550e-9);
    let lambda2 = rng.gen_range(lambda1 + 30e-9..850e-9);
    ConverterSpec::with_einstein_rates(
        LIGHT_SPEED / lambda1,
        LIGHT_SPEED / lambda2,
        10f64.powf(rng.gen_range(18.0..22.0)),
        10f64.powf(rng.gen_range(18.0..22.0)),
        0.0,
        10f64.powf(rng.gen_range(20.0..26.0)),
    )
    .unwrap()
}

fn sample_state(spec: &ConverterSpec, rng: &mut ChaCha8Rng) -> ThermoState {
    let t0 = rng.gen_range(250.0..350.0);
    let t1 = rng.gen_range(4000.0..6500.0);
    let t_m = rng.gen_range(t0..1000.0f64.min(t1));
    ThermoState::from_temperatures(spec, t0, t1, t_m).unwrap()
}

/// Largest q keeping the emitted channel physical, scaled by `fraction`.
fn attach_q(spec: &mut ConverterSpec, thermo: &ThermoState, fraction: f64) {
    let kt = BOLTZMANN * thermo.t_m;
    let gap1 = PLANCK * spec.nu1 - thermo.mu1;
    let gap2 = PLANCK * spec.nu2 - thermo.mu2;
    spec.q = fraction * spec.a2 * ((gap1 - gap2) / kt).exp();
}

#[test]
fn criterion_01_planck_consistency() {
    let t0 = Instant::now();
    // Route one: adaptive quadrature of the implemented spectral density in
    // x = hν/kT. Route two: the closed-form radiation constant
    // a = 8π⁵k⁴/(15h³c³), assembled here independently.
    let radiation_constant =
        8.0 * PI.powi(5) * BOLTZMANN.powi(4) / (15.0 * PLANCK.powi(3) * LIGHT_SPEED.powi(3));
    let cfg = quadrature::QuadratureConfig {
        abs_tol: 0.0,
        rel_tol: 1e-9,
        max_depth: 60,
    };
    let mut ok = true;
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
        let exact = radiation_constant * t.powi(4);
        ok &= ((integral - exact) / exact).abs() < 1e-6;
    }
    // Change-of-variables identity at 100 random (λ, T).
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..100 {
        let lambda = rng.gen_range(100e-9..20e-6);
        let t = rng.gen_range(100.0..10_000.0);
        let lhs = planck_density_lambda(lambda, t).unwrap();
        let rhs =
            planck_density_nu(LIGHT_SPEED / lambda, t).unwrap() * LIGHT_SPEED / (lambda * lambda);
        ok &= (lhs - rhs).abs() <= 1e-12 * lhs.max(rhs);
    }
    report(
        1,
        ok,
        "Stefan-Boltzmann integral and axis change of variables",
        t0,
    );
}

#[test]
fn criterion_02_wien_peak() {
    let t0 = Instant::now();
    // Independent golden-section maximizer over the implemented ρ_λ.
    let f = |l: f64| planck_density_lambda(l, 5800.0).unwrap();
    let (mut a, mut b) = (100e-9, 3000e-9);
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
    let peak = 0.5 * (a + b);
    let ok = (peak - 499.6e-9).abs() < 0.5e-9;
    report(
        2,
        ok,
        "wavelength-axis peak at 5800 K equals 499.6 nm +/- 0.5 nm",
        t0,
    );
}

#[test]
fn criterion_03_detailed_balance_closure() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut ok = true;
    for _ in 0..100 {
        let mut spec = sample_spec(&mut rng);
        let thermo = sample_state(&spec, &mut rng);
        attach_q(&mut spec, &thermo, rng.gen_range(0.0..0.8));
        let (rho1, rho2) = equilibrium_densities(&spec, &thermo).unwrap();
        let pop = equilibrium_populations(&spec, &thermo).unwrap();
        let (d1, d2) = rate_derivatives(&pop, &spec, rho1, rho2).unwrap();
        let s1 = spec.b1 * rho1 * pop.n0 + (spec.b1 * rho1 + spec.a1 + spec.q) * pop.n1;
        let s2 = spec.b2 * rho2 * pop.n0 + (spec.b2 * rho2 + spec.a2) * pop.n2 + spec.q * pop.n1;
        ok &= d1.abs() <= 1e-9 * s1 && d2.abs() <= 1e-9 * s2;
    }
    report(
        3,
        ok,
        "equilibrium populations and densities zero the rate equations",
        t0,
    );
}

#[test]
fn criterion_04_zero_q_planck_reduction() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut ok = true;
    for _ in 0..50 {
        // mu = 0 forces T0 = T1, which pins Tm to the same temperature.
        let t_m = rng.gen_range(250.0..1500.0);
        let lambda1 = rng.gen_range(350e-9..550e-9);
        let lambda2 = rng.gen_range(lambda1 + 30e-9..850e-9);
        let spec = ConverterSpec::with_einstein_rates(
            LIGHT_SPEED / lambda1,
            LIGHT_SPEED / lambda2,
            10f64.powf(rng.gen_range(18.0..22.0)),
            10f64.powf(rng.gen_range(18.0..22.0)),
            0.0,
            1e24,
        )
        .unwrap();
        let thermo = ThermoState::from_temperatures(&spec, t_m, t_m, t_m).unwrap();
        let (rho1, rho2) = equilibrium_densities(&spec, &thermo).unwrap();
        let p1 = planck_density_nu(spec.nu1, t_m).unwrap();
        let p2 = planck_density_nu(spec.nu2, t_m).unwrap();
        ok &= (rho1 - p1).abs() <= 1e-12 * p1 && (rho2 - p2).abs() <= 1e-12 * p2;
    }
    report(
        4,
        ok,
        "q = 0, mu = 0 equilibrium densities reduce to the Planck law",
        t0,
    );
}

#[test]
fn criterion_05_steady_state_equivalence() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut ok = true;
    for _ in 0..20 {
        let mut spec = sample_spec(&mut rng);
        spec.q = spec.a1 * rng.gen_range(0.0..2.0);
        let rho1 = planck_density_nu(spec.nu1, rng.gen_range(4000.0..6500.0)).unwrap();
        let rho2 = planck_density_nu(spec.nu2, rng.gen_range(300.0..600.0)).unwrap();
        let target = steady_state(&spec, rho1, rho2).unwrap();
        let scale = target.n1.abs().max(target.n2.abs());
        for _ in 0..5 {
            let n1 = rng.gen_range(0.0..spec.n_total);
            let n2 = rng.gen_range(0.0..(spec.n_total - n1));
            let settled = settle(&spec, rho1, rho2, n1, n2, IntegrationOptions::default()).unwrap();
            ok &= (settled.n1 - target.n1).abs() <= 1e-8 * scale
                && (settled.n2 - target.n2).abs() <= 1e-8 * scale;
        }
    }
    report(
        5,
        ok,
        "algebraic steady state matches stiff time integration",
        t0,
    );
}

#[test]
fn criterion_06_monte_carlo_trapping() {
    let t0 = Instant::now();
    let slab = |n: f64| SlabSpec {
        length: 1.0,
        width: 1.0,
        thickness: 1e-4,
        n_refr: n,
        eta_a: 1.0,
        eta_f: 1.0,
        theta_q: 0.0,
    };
    let serial = TraceOptions {
        parallel: false,
        ..TraceOptions::default()
    };
    let mut ok = true;

    let big = trace_rays_with(&slab(1.5), 10_000_000, 2024, serial).unwrap();
    let analytic = trapping_efficiency_analytic(1.5).unwrap();
    ok &= (big.eta_t_estimate - analytic).abs() < 3.0 * big.std_error;
    ok &= t0.elapsed().as_secs_f64() < 60.0;

    for n in [1.3, 1.7, 2.0] {
        let r = trace_rays_with(&slab(n), 1_000_000, 2025, serial).unwrap();
        let a = trapping_efficiency_analytic(n).unwrap();
        ok &= (r.eta_t_estimate - a).abs() < 4.0 * r.std_error;
    }

    let parallel = trace_rays_with(
        &slab(1.5),
        10_000_000,
        2024,
        TraceOptions {
            parallel: true,
            ..TraceOptions::default()
        },
    )
    .unwrap();
    ok &= parallel.counts == big.counts;
    report(
        6,
        ok,
        "MC trapping matches the escape-cone model; parallel counts identical",
        t0,
    );
}

#[test]
fn criterion_07_worked_loss_chain() {
    let t0 = Instant::now();
    let cfg = parse_config(
        "[slab]\nlength_m = 0.1\nwidth_m = 0.1\nthickness_m = 0.005\nn_refr = 1.5\n\
         eta_a = 0.05\neta_f = 0.7\ntheta_q = 0\n",
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let summary = run_scenario(&cfg, "loss-chain", dir.path(), dir.path()).unwrap();
    let ratio = summary.get("g_phi_over_g").unwrap();
    let ok = (ratio - 0.026_087).abs() <= 1e-5;
    report(
        7,
        ok,
        "eta_a = 0.05, eta_f = 0.7, theta_q = 0, n = 1.5 gives G_phi/G = 0.026087",
        t0,
    );
}

#[test]
fn criterion_08_entropy() {
    let t0 = Instant::now();
    let mut ok = true;

    // Pure state: one electronic row.
    let mut c = DMatrix::zeros(3, 4);
    c[(2, 1)] = Complex64::new(0.6, 0.0);
    c[(2, 3)] = Complex64::new(0.0, 0.8);
    let pure = SuperpositionCoeffs::new(c).unwrap();
    ok &= von_neumann_entropy(&reduce_density_matrix(&pure).unwrap()).abs() <= 1e-12;

    // Maximally mixed qubit.
    let half = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(0.5, 0.0),
        Complex64::new(0.5, 0.0),
    ]));
    let s = von_neumann_entropy(&DensityMatrix::new(half).unwrap());
    ok &= (s - 2f64.ln()).abs() <= 1e-12;

    // Brute-force partial trace of the full projector on 50 random draws.
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    for _ in 0..50 {
        let d_e = rng.gen_range(1..=4);
        let d_n = rng.gen_range(1..=6);
        let mut c = DMatrix::from_fn(d_e, d_n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        c /= Complex64::new(norm, 0.0);
        let coeffs = SuperpositionCoeffs::new(c.clone()).unwrap();
        let dm = reduce_density_matrix(&coeffs).unwrap();

        let dim = d_e * d_n;
        let mut psi = DMatrix::zeros(dim, 1);
        for l in 0..d_e {
            for m in 0..d_n {
                psi[(l * d_n + m, 0)] = c[(l, m)];
            }
        }
        let proj = &psi * psi.adjoint();
        let mut oracle = DMatrix::zeros(d_e, d_e);
        for l in 0..d_e {
            for lp in 0..d_e {
                for m in 0..d_n {
                    oracle[(l, lp)] += proj[(l * d_n + m, lp * d_n + m)];
                }
            }
        }
        let diff = (dm.matrix() - &oracle).map(|z| z.norm()).max();
        ok &= diff <= 1e-12;
    }
    report(
        8,
        ok,
        "pure state, mixed qubit, and brute-force partial trace agree",
        t0,
    );
}

#[test]
fn criterion_09_spectra_pair() {
    let t0 = Instant::now();
    let text = "\
[radiometry]
t1_k = 5800
lambda_min_nm = 300
lambda_max_nm = 1200
points = 800

[converter]
e1_ev = 2.48
e2_ev = 2.07
b1 = 1e20
b2 = 2e21
q_per_s = 0
t0_k = 300
t1_k = 5800
tm_k = 350

[slab]
length_m = 0.1
width_m = 0.1
thickness_m = 0.005
n_refr = 1.5
eta_a = 0.05
eta_f = 0.7
";
    let cfg = parse_config(text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = evaluate(&cfg, "pair", dir.path()).unwrap();
    let incident = out.incident.unwrap();
    let emitted = out.emitted.unwrap();
    let mut ok = emitted.peak_coordinate() > incident.peak_coordinate();

    let (i1, e1) = emit_spectra_pair(&cfg, &dir.path().join("a")).unwrap();
    let (i2, e2) = emit_spectra_pair(&cfg, &dir.path().join("b")).unwrap();
    ok &= std::fs::read(i1).unwrap() == std::fs::read(i2).unwrap();
    ok &= std::fs::read(e1).unwrap() == std::fs::read(e2).unwrap();
    report(
        9,
        ok,
        "emitted peak red-shifted; CSV pair byte-identical across runs",
        t0,
    );
}

#[test]
fn criterion_10_concentration_monotonicity() {
    let t0 = Instant::now();
    // Fixed scenario with B2 >> B1 so the emitted channel stays physical
    // up to q = 10·A1.
    let spec0 = ConverterSpec::with_einstein_rates(
        LIGHT_SPEED / 500e-9,
        LIGHT_SPEED / 600e-9,
        1e20,
        2e21,
        0.0,
        1e24,
    )
    .unwrap();
    let thermo = ThermoState::from_temperatures(&spec0, 300.0, 5800.0, 350.0).unwrap();
    let mut ok = true;
    let mut prev = f64::INFINITY;
    for factor in [0.0, 0.1, 1.0, 10.0] {
        let spec = ConverterSpec {
            q: factor * spec0.a1,
            ..spec0
        };
        let cm = concentration_factor(&spec, &thermo).unwrap();
        ok &= cm < prev;
        prev = cm;
    }
    report(
        10,
        ok,
        "C_M strictly decreases over q in {0, 0.1, 1, 10}*A1",
        t0,
    );
}
