use std::f64::consts::PI;

use fkdv_core::solver::{cfl_max_dt, cn_step, rk4_integrate, run_field, CrankNicolson, ModelParams, SolverConfig};
use fkdv_core::spectral::{project, PeriodicGrid, SpectralField};
use fkdv_core::Complex;
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn frac_sine_params() -> ModelParams {
    ModelParams::new(1.5, 1.0, 1.0, PI).unwrap()
}

fn frac_sine(n: usize) -> SpectralField {
    project(|x| 0.5 * x.sin(), &PeriodicGrid::new(n, PI).unwrap())
}

fn random_field(n: usize, l: f64, seed: u64, amp: f64) -> SpectralField {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(PeriodicGrid::new(n, l).unwrap());
    f.set(0, Complex::new(amp * rng.gen_range(-1.0..1.0), 0.0));
    for k in 1..=n as i64 {
        let w = amp / (k * k) as f64;
        f.set_pair(k, Complex::new(rng.gen_range(-w..w), rng.gen_range(-w..w)));
    }
    f
}

fn run_to(u0: &SpectralField, p: &ModelParams, dt: f64, t: f64) -> SpectralField {
    let c = SolverConfig::new(u0.n_modes(), dt, t);
    run_field(u0.clone(), p, &c, &[]).unwrap().last().field.clone()
}

#[test]
fn norm_preserved_every_step_of_a_long_run() {
    let p = frac_sine_params();
    let n = 64;
    let c = SolverConfig::new(n, 1.0 / 32.0, 2.0);
    let traj = run_field(frac_sine(n), &p, &c, &[]).unwrap();
    let n0 = traj.initial().field.l2_norm();
    let mut prev = n0;
    for s in &traj.steps {
        assert!((s.l2_norm - prev).abs() <= 10.0 * c.fp_tolerance * n0, "t = {}", s.time);
        prev = s.l2_norm;
    }
}

#[test]
fn cfl_sized_steps_contract_by_zeta() {
    let p = frac_sine_params();
    let u = frac_sine(32);
    let mut c = SolverConfig::new(32, 1.0, 0.0);
    c.enforce_cfl = true;
    c.dt = cfl_max_dt(&u, &p, &c) / 2.0;
    let (_, diag) = cn_step(&u, &p, &c).unwrap();
    assert!(diag.iterations >= 2);
    for r in diag.contraction_ratios() {
        assert!(r <= c.zeta, "ratio {r}");
    }
}

#[test]
fn second_order_in_time() {
    let p = frac_sine_params();
    let u0 = frac_sine(64);
    let h = 2.5e-4;
    let t = 0.1;
    let [a, b, c] = [4.0 * h, 2.0 * h, h].map(|dt| run_to(&u0, &p, dt, t));
    let order = (a.l2_distance(&b).unwrap() / b.l2_distance(&c).unwrap()).log2();
    assert!((1.8..=2.2).contains(&order), "order {order}");
}

#[test]
fn single_step_agrees_with_rk4() {
    let p = frac_sine_params();
    let u0 = frac_sine(32);
    let c = SolverConfig::new(32, 1e-3, 1e-3);
    let (cn, _) = cn_step(&u0, &p, &c).unwrap();
    let rk = rk4_integrate(&u0, &p, 1e-4, 1e-3).unwrap();
    let gap = cn.l2_distance(&rk).unwrap();
    assert!(gap <= 1e-7, "gap {gap:e}");
}

#[test]
fn cn_and_rk4_trajectories_converge_together() {
    let p = frac_sine_params();
    let u0 = frac_sine(32);
    let h = 2e-4;
    let gap = |dt: f64| run_to(&u0, &p, dt, 0.1).l2_distance(&rk4_integrate(&u0, &p, dt, 0.1).unwrap()).unwrap();
    let ratio = gap(2.0 * h) / gap(h);
    assert!(ratio >= 3.5, "ratio {ratio}");
}

#[test]
fn rk4_self_convergence_is_fourth_order() {
    let p = frac_sine_params();
    let u0 = frac_sine(16);
    let h = 5e-4;
    let [a, b, c] = [4.0 * h, 2.0 * h, h].map(|dt| rk4_integrate(&u0, &p, dt, 0.1).unwrap());
    let order = (a.l2_distance(&b).unwrap() / b.l2_distance(&c).unwrap()).log2();
    assert!((3.7..=4.2).contains(&order), "order {order}");
}

/// With `Δt = 1/(N‖u₀‖_∞)` the run at N = 128 is spatially resolved to round-off,
/// but its Crank-Nicolson time error at T = 2 is about 5e-4.
#[test]
#[ignore = "unattainable with the prescribed time step: the temporal error is ~5e-4"]
fn reference_refinement_at_128_modes() {
    let p = frac_sine_params();
    let solve = |n: usize| run_to(&frac_sine(n), &p, 1.0 / (0.5 * n as f64), 2.0);
    let (coarse, fine) = (solve(128), solve(4096));
    let diff = coarse.l2_distance(&fine).unwrap();
    assert!(diff < 1e-5, "{diff:e}");
}

#[test]
fn prescribed_step_error_is_temporal() {
    let p = frac_sine_params();
    let u0 = frac_sine(128);
    let fine = run_to(&u0, &p, 1.0 / 4096.0, 2.0);
    let table_step = run_to(&u0, &p, 1.0 / 64.0, 2.0);
    let err = table_step.l2_distance(&fine).unwrap();
    assert!((1e-4..1e-3).contains(&err), "{err:e}");
    assert!(fine.coeff(16).norm() < 1e-15);
    let small_step = run_to(&u0, &p, 1.0 / 1024.0, 2.0);
    assert!(small_step.l2_distance(&fine).unwrap() < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_step_preserves_norm(seed in any::<u64>(), alpha in 1.0f64..2.0, n in 4usize..24) {
        let p = ModelParams::new(alpha, 0.7, 1.0, 3.0).unwrap();
        let u = random_field(n, 3.0, seed, 0.5);
        let mut c = SolverConfig::new(n, 1.0, 0.0);
        c.dt = cfl_max_dt(&u, &p, &c).min(1e-2);
        let (v, _) = cn_step(&u, &p, &c).unwrap();
        prop_assert!((v.l2_norm() - u.l2_norm()).abs() <= 10.0 * c.fp_tolerance * u.l2_norm());
    }

    #[test]
    fn linear_flow_is_reversible(seed in any::<u64>(), alpha in 1.0f64..2.0, dt in 1e-4f64..1e-1) {
        let p = ModelParams::new(alpha, 0.3, 0.0, 2.0).unwrap();
        let u = random_field(16, 2.0, seed, 1.0);
        let c = SolverConfig::new(16, dt, dt);
        let stepper = CrankNicolson::new(p, &c);
        let (forward, _) = stepper.step(&u, dt).unwrap();
        let (back, _) = stepper.step(&forward, -dt).unwrap();
        prop_assert!(back.max_coeff_diff(&u) <= 1e-11);
    }
}
