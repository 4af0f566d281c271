use std::f64::consts::PI;

use fkdv_core::reference::{
    bo_soliton, break_point, elliptic_asymptotic_u, elliptic_asymptotic_u_with_step, elliptic_ke, jacobi_theta3,
    kdv_one_soliton, q_phase, q_phase_with_nodes, weak_limit, BetaTriple, BoSoliton, HopfSolver, ReferenceError,
};
use fkdv_core::solver::{semi_discrete_rhs, ModelParams};
use fkdv_core::spectral::{derivative_x, project, PeriodicGrid};
use fkdv_core::Complex;
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

/// Derivative of order `k` (1 or 3) by centred second-order stencils,
/// Richardson-extrapolated over `levels` halvings of `h`.
fn richardson(f: &impl Fn(f64) -> f64, x: f64, k: u32, h: f64, levels: usize) -> f64 {
    let stencil = |h: f64| match k {
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        3 => (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h),
        _ => unreachable!(),
    };
    let mut table: Vec<f64> = (0..levels).map(|i| stencil(h / 2f64.powi(i as i32))).collect();
    for j in 1..levels {
        let factor = 4f64.powi(j as i32);
        for i in (j..levels).rev() {
            table[i] = (factor * table[i] - table[i - 1]) / (factor - 1.0);
        }
    }
    table[levels - 1]
}

#[test]
fn kdv_soliton_pde_residual() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..50 {
        let x: f64 = rng.gen_range(-8.0..8.0);
        let t: f64 = rng.gen_range(0.0..2.0);
        let ut = richardson(&|s| kdv_one_soliton(x, s), t, 1, 0.05, 4);
        let ux = richardson(&|y| kdv_one_soliton(y, t), x, 1, 0.05, 4);
        let uxxx = richardson(&|y| kdv_one_soliton(y, t), x, 3, 0.08, 4);
        let r = ut + kdv_one_soliton(x, t) * ux + uxxx;
        assert!(r.abs() <= 1e-8, "residual {r:e} at ({x}, {t})");
    }
}

#[test]
fn bo_wave_solves_benjamin_ono() {
    // u_t = −c u_x for a travelling wave; compare with the α = 1, ε = λ = 1 rhs.
    let (c, l) = (0.25, 15.0);
    let w = BoSoliton::new(c, l).unwrap();
    let grid = PeriodicGrid::new(256, l).unwrap();
    let u = project(|x| w.eval(x, 0.0), &grid);
    let p = ModelParams::new(1.0, 1.0, 1.0, l).unwrap();
    let rhs = semi_discrete_rhs(&u, &p);
    let ut = &derivative_x(&u) * (-c);
    let gap = rhs.l2_distance(&ut).unwrap();
    assert!(gap <= 1e-6 * ut.l2_norm().max(1.0), "gap {gap:e}");
}

#[test]
fn bo_mean_matches_quadrature() {
    let w = BoSoliton::new(0.25, 15.0).unwrap();
    let m = 4000;
    let h = 30.0 / m as f64;
    let mean = (0..m).map(|j| w.eval(-15.0 + j as f64 * h, 0.0)).sum::<f64>() * h / 30.0;
    assert!((mean - w.mean()).abs() < 1e-12, "{mean} vs {}", w.mean());
    assert!(bo_soliton(0.0, 0.0, 0.2, 15.0).is_err());
}

#[test]
fn half_sine_break_point_matches_dense_scan() {
    let bp = break_point(|x: f64| 0.5 * x.sin(), 1.0, [-PI, PI]).unwrap();
    let n = 1_000_000;
    let best = (0..=n)
        .map(|i| -PI + 2.0 * PI * i as f64 / n as f64)
        .map(|x| -0.5 * x.cos())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((bp.t_c - 1.0 / best).abs() < 1e-8);
    assert!((bp.t_c - 2.0).abs() < 1e-8);
    assert!((bp.xi.abs() - PI).abs() < 1e-6);
}

fn sech2(x: f64) -> f64 {
    -x.cosh().powi(-2)
}

#[test]
fn hopf_forward_characteristics() {
    let h = HopfSolver::new(sech2, 6.0, [-6.0, 6.0]).unwrap();
    let t = 0.2;
    for i in 0..400 {
        let xi = -5.0 + 10.0 * i as f64 / 399.0;
        let x = xi + 6.0 * t * sech2(xi);
        let u = h.solve(x, t).unwrap();
        assert!((u - sech2(xi)).abs() < 1e-10, "ξ = {xi}");
    }
}

#[test]
fn hopf_pde_residual() {
    let h = HopfSolver::new(sech2, 6.0, [-6.0, 6.0]).unwrap();
    for &t in &[0.05, 0.15, 0.2] {
        for i in 0..60 {
            let x = -4.0 + 8.0 * i as f64 / 59.0;
            let ut = richardson(&|s| h.solve(x, s).unwrap(), t, 1, 1e-3, 3);
            let ux = richardson(&|y| h.solve(y, t).unwrap(), x, 1, 1e-3, 3);
            let r = ut + 6.0 * h.solve(x, t).unwrap() * ux;
            assert!(r.abs() < 1e-5 * (1.0 + ux.abs()), "residual {r:e} at ({x}, {t})");
        }
    }
}

/// First-order upwind (Rusanov) finite volumes for `u_t + (3u²)_x = 0`.
fn upwind_hopf(n: usize, l: f64, t_end: f64) -> (Vec<f64>, Vec<f64>) {
    let dx = 2.0 * l / n as f64;
    let xs: Vec<f64> = (0..n).map(|j| -l + (j as f64 + 0.5) * dx).collect();
    let mut u: Vec<f64> = xs.iter().map(|&x| sech2(x)).collect();
    let flux = |v: f64| 3.0 * v * v;
    let mut t = 0.0;
    while t < t_end {
        let smax = u.iter().fold(0.0f64, |m, v| m.max(6.0 * v.abs()));
        let dt = (0.4 * dx / smax).min(t_end - t);
        let f: Vec<f64> = (0..n)
            .map(|j| {
                let (a, b) = (u[j], u[(j + 1) % n]);
                let s = 6.0 * a.abs().max(b.abs());
                0.5 * (flux(a) + flux(b)) - 0.5 * s * (b - a)
            })
            .collect();
        let next: Vec<f64> = (0..n).map(|j| u[j] - dt / dx * (f[j] - f[(j + n - 1) % n])).collect();
        u = next;
        t += dt;
    }
    (xs, u)
}

#[test]
fn hopf_agrees_with_finite_volumes() {
    let t = 0.15;
    let h = HopfSolver::new(sech2, 6.0, [-6.0, 6.0]).unwrap();
    let (xs, u) = upwind_hopf(6000, 6.0, t);
    let err = xs.iter().zip(&u).map(|(&x, &v)| (h.solve(x, t).unwrap() - v).abs()).fold(0.0, f64::max);
    assert!(err < 1e-2, "max gap {err:e}");
}

#[test]
fn hopf_refuses_after_break() {
    let h = HopfSolver::new(sech2, 6.0, [-6.0, 6.0]).unwrap();
    match h.solve(-1.5, 0.3) {
        Err(ReferenceError::Multivalued { t_c, .. }) => assert!((t_c - 3f64.sqrt() / 8.0).abs() < 1e-8),
        other => panic!("{other:?}"),
    }
}

/// Adaptive Simpson quadrature.
fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

fn quad_ke(s: f64) -> (f64, f64) {
    let k = simpson(&|p: f64| 1.0 / (1.0 - s * s * p.sin().powi(2)).sqrt(), 0.0, PI / 2.0, 1e-14);
    let e = simpson(&|p: f64| (1.0 - s * s * p.sin().powi(2)).sqrt(), 0.0, PI / 2.0, 1e-14);
    (k, e)
}

#[test]
fn elliptic_integrals_match_quadrature() {
    let d = elliptic_ke(0.5).unwrap();
    let (k, e) = quad_ke(0.5);
    assert!((d.k - k).abs() < 1e-10 && (d.e - e).abs() < 1e-10);
    let (kp, _) = quad_ke(0.75f64.sqrt());
    assert!((d.tau.im - kp / k).abs() < 1e-10);
}

#[test]
fn legendre_relation() {
    for i in 1..=9 {
        let s = i as f64 / 10.0;
        let sp = (1.0 - s * s).sqrt();
        let (a, b) = (elliptic_ke(s).unwrap(), elliptic_ke(sp).unwrap());
        let r = a.e * b.k + b.e * a.k - a.k * b.k - PI / 2.0;
        assert!(r.abs() <= 1e-12, "s = {s}: {r:e}");
    }
}

#[test]
fn theta_matches_wide_window_sum() {
    let tau = Complex::new(0.0, 1.0);
    let xi = 0.3;
    let brute: Complex = (-50i32..=50)
        .map(|n| {
            let n = n as f64;
            (Complex::new(0.0, PI) * n * n * tau + Complex::new(0.0, 2.0 * PI * n * xi)).exp()
        })
        .sum();
    let mu = jacobi_theta3(xi, tau).unwrap();
    assert!((mu - brute.re).abs() < 1e-14 && brute.im.abs() < 1e-14);
}

#[test]
fn theta_tends_to_one() {
    for b in [20.0, 50.0] {
        assert!((jacobi_theta3(0.17, Complex::new(0.0, b)).unwrap() - 1.0).abs() < 1e-16 + 3.0 * (-PI * b).exp());
    }
    assert!(jacobi_theta3(0.1, Complex::new(0.0, -1.0)).is_err());
}

#[test]
fn weak_limit_against_quadrature() {
    let b = BetaTriple::new(1.0, 0.5, 0.0).unwrap();
    let (k, e) = quad_ke(0.5f64.sqrt());
    let expect = 1.5 + 2.0 * (-1.0 + e / k);
    assert!((weak_limit(&b).unwrap() - expect).abs() < 1e-10);

    // s = 1: E/K → 0, so ũ = β₂ + β₃ − β₁.
    let b = BetaTriple::new(1.0, 1.0, 0.0).unwrap();
    assert!(weak_limit(&b).unwrap().abs() < 1e-15);

    // β₂ = β₃: ũ = β₁ + β₂ − β₃.
    let b = BetaTriple::new(0.8, -0.1, -0.1).unwrap();
    assert!((weak_limit(&b).unwrap() - 0.8).abs() < 1e-14);
}

#[test]
fn asymptotic_difference_is_second_order() {
    let b = BetaTriple::new(1.0, 0.6, -0.2).unwrap();
    let (x, t, eps, q) = (0.37, 0.1, 0.5, 0.2);
    let u = |h: f64| elliptic_asymptotic_u_with_step(x, t, eps, &b, q, h).unwrap();
    let (u1, u2, u3) = (u(0.08), u(0.04), u(0.02));
    let ratio = (u1 - u2) / (u2 - u3);
    assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
}

#[test]
fn asymptotic_is_periodic_in_phase() {
    let b = BetaTriple::new(1.0, 0.6, -0.2).unwrap();
    let eps = 0.05;
    let d = elliptic_ke((0.8f64 / 1.2).sqrt()).unwrap();
    let period = 2.0 * eps * d.k / 1.2f64.sqrt();
    for x in [-0.3, 0.0, 0.41] {
        let a = elliptic_asymptotic_u(x, 0.3, eps, &b, 0.1).unwrap();
        let c = elliptic_asymptotic_u(x + period, 0.3, eps, &b, 0.1).unwrap();
        assert!((a - c).abs() < 1e-10, "{a} vs {c}");
    }
}

#[test]
fn asymptotic_degenerates_to_weak_limit() {
    let b = BetaTriple::new(1.0, 1e-9, 0.0).unwrap();
    let ub = weak_limit(&b).unwrap();
    let d = elliptic_ke((1e-9f64).sqrt()).unwrap();
    let u = elliptic_asymptotic_u(0.2, 0.1, 0.1, &b, 0.0).unwrap();
    let bound = 0.1 * 0.1 * 2.0 * 1e3 * (-PI * d.tau.im).exp() + 1e-8;
    assert!((u - ub).abs() < bound, "{u} vs {ub}");
}

#[test]
fn q_phase_linear_closed_form() {
    let b = BetaTriple::new(1.3, 0.4, -0.9).unwrap();
    let q = q_phase(&b, |a| 2.0 * a - 1.0).unwrap();
    let mean_a = (b.beta1 + b.beta2 + b.beta3) / 3.0;
    assert!((q - (2.0 * mean_a - 1.0)).abs() < 1e-10, "{q}");
}

#[test]
fn q_phase_node_convergence() {
    let b = BetaTriple::new(0.9, 0.2, -0.5).unwrap();
    let f = |a: f64| (0.7 * a).exp() + a.sin();
    let q64 = q_phase_with_nodes(&b, f, 64).unwrap();
    let q128 = q_phase_with_nodes(&b, f, 128).unwrap();
    assert!((q64 - q128).abs() <= 1e-10);
}

proptest! {
    #[test]
    fn theta_even_and_periodic(xi in -3.0f64..3.0, b in 0.05f64..5.0) {
        let tau = Complex::new(0.0, b);
        let m = jacobi_theta3(xi, tau).unwrap();
        prop_assert!((m - jacobi_theta3(-xi, tau).unwrap()).abs() <= 1e-13 * m.abs().max(1.0));
        prop_assert!((m - jacobi_theta3(xi + 1.0, tau).unwrap()).abs() <= 1e-13 * m.abs().max(1.0));
    }

    #[test]
    fn q_phase_constant(c in -10.0f64..10.0, b1 in 0.0f64..2.0, d2 in 0.0f64..1.0, d3 in 0.0f64..1.0) {
        let b = BetaTriple::new(b1, b1 - d2, b1 - d2 - d3).unwrap();
        prop_assert!((q_phase(&b, |_| c).unwrap() - c).abs() <= 1e-12 * c.abs().max(1.0));
    }

    #[test]
    fn hopf_characteristic_residual(x in -6.0f64..6.0, t in 0.0f64..0.21) {
        let h = HopfSolver::new(sech2, 6.0, [-6.0, 6.0]).unwrap();
        let xi = h.foot(x, t).unwrap();
        prop_assert!((x - 6.0 * t * sech2(xi) - xi).abs() <= 1e-12);
    }
}
