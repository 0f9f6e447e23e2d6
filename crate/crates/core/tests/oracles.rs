//! Independent oracles for the special functions, forces and integrators.

use erkn::verify::{drift_series, drift_stats};
use erkn::*;
use num::rational::BigRational;
use num::ToPrimitive;
use rand::{Rng, SeedableRng};

/// φ_j at `ν = tenths / 10`, summed in exact rational arithmetic.
fn exact_phi(j: u8, tenths: i64, terms: usize) -> f64 {
    let nu = BigRational::new(tenths.into(), 10.into());
    phi_series(j, nu.clone() * nu, terms).to_f64().unwrap()
}

#[test]
fn phi_series_in_exact_arithmetic_matches_closed_forms() {
    for k in 0..=200 {
        let nu = 0.1 * k as f64;
        // 30 terms converge to 1e-12 up to ν = 10; the tail beyond needs more terms
        let terms = if nu <= 10.0 { 30 } else { 60 };
        assert!((exact_phi(0, k, terms) - nu.cos()).abs() <= 1e-12, "cos at {nu}");
        assert!((exact_phi(1, k, terms) - sinc(nu)).abs() <= 1e-12, "sinc at {nu}");
    }
    // the frozen reference values
    assert!((exact_phi(0, 50, 30) - 0.283_662_185_5).abs() < 1e-10);
    assert!((exact_phi(1, 50, 30) + 0.191_784_854_9).abs() < 1e-10);
}

#[test]
fn fpu_force_matches_central_differences() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let eps = 1e-5;
    for m in 1..=3 {
        let sys = fpu_system(m, 50.0).unwrap();
        for _ in 0..100 {
            let x: Vec<f64> = (0..2 * m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let g = sys.force(&x).unwrap();
            for i in 0..2 * m {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += eps;
                xm[i] -= eps;
                let fd = (sys.potential(&xp).unwrap() - sys.potential(&xm).unwrap()) / (2.0 * eps);
                assert!((g[i] + fd).abs() <= 1e-6, "m={m} i={i}: g={} fd={fd}", g[i]);
            }
        }
    }
}

/// Classical RK4 on `q' = p, p' = -Ω²q + g(q)`, independent of the ERKN machinery.
fn rk4_reference(sys: &System64, s0: &State64, t: f64, steps: usize) -> State64 {
    let part = *sys.partition();
    let w2 = part.omega() * part.omega();
    let rhs = |x: &[f64]| -> Vec<f64> {
        let n = x.len() / 2;
        let (q, p) = x.split_at(n);
        let g = sys.force(q).unwrap();
        let mut dx = p.to_vec();
        dx.extend((0..n).map(|i| g[i] - if i >= part.d1() { w2 * q[i] } else { 0.0 }));
        dx
    };
    let h = t / steps as f64;
    let mut x = s0.to_flat();
    let axpy = |x: &[f64], a: f64, k: &[f64]| x.iter().zip(k).map(|(xi, ki)| xi + a * ki).collect::<Vec<_>>();
    for _ in 0..steps {
        let k1 = rhs(&x);
        let k2 = rhs(&axpy(&x, h / 2.0, &k1));
        let k3 = rhs(&axpy(&x, h / 2.0, &k2));
        let k4 = rhs(&axpy(&x, h, &k3));
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    State::from_flat(&x).unwrap()
}

fn global_error(m: &ErknMethod64, sys: &System64, s0: &State64, reference: &State64, h: f64) -> f64 {
    let steps = (1.0 / h).round() as usize;
    let mut s = s0.clone();
    for _ in 0..steps {
        s = m.step(sys, h, &s).unwrap();
    }
    s.max_abs_diff(reference)
}

#[test]
fn convergence_order_in_the_non_stiff_regime() {
    let sys = fpu_system(3, 1.0).unwrap();
    // quarter-amplitude data: at full amplitude ERKN5/6 are still pre-asymptotic for h ≥ 0.025
    let mut s0 = fpu_initial(3, 1.0);
    for x in s0.q.iter_mut().chain(s0.p.iter_mut()) {
        *x *= 0.25;
    }
    let reference = rk4_reference(&sys, &s0, 1.0, 4_000);
    for (name, lo, hi) in [("ERKN2", 3.4, 4.6), ("ERKN5", 1.7, 4.6), ("ERKN6", 1.7, 4.6)] {
        let m = ErknMethod::by_name(name).unwrap();
        let errs: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&h| global_error(&m, &sys, &s0, &reference, h))
            .collect();
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((lo..=hi).contains(&ratio), "{name}: errors {errs:?}, ratio {ratio}");
        }
    }
}

#[test]
fn every_method_reproduces_the_linear_flow_over_long_runs() {
    let part = Partition::new(3, 3, 50.0).unwrap();
    let sys = linear_system(part);
    let s0 = fpu_initial(3, 50.0);
    for m in registry::<f64>() {
        let mut s = s0.clone();
        for n in 1..=2000 {
            s = m.step(&sys, 0.1, &s).unwrap();
            let exact = flow_linear(&part, n as f64 * 0.1, &s0).unwrap();
            for (a, b) in s.to_flat().iter().zip(exact.to_flat()) {
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{} at step {n}", m.name());
            }
        }
    }
}

#[test]
fn trig_integrators_conserve_energy_on_fpu() {
    let sys = fpu_system(3, 50.0).unwrap();
    let s0 = fpu_initial(3, 50.0);
    for name in ["ERKN2", "ERKN3", "ERKN4"] {
        let tm = TrigMethod::from_erkn(&ErknMethod::by_name(name).unwrap()).unwrap();
        let series = drift_series(&tm, &sys, &s0, 0.1, 200.0, 1).unwrap();
        let stats = drift_stats(&series.records);
        assert!(series.completed());
        assert!(stats.max_dh < 1.0, "{name}: {stats:?}");
        assert!((0.3..=3.0).contains(&stats.window_ratio_h), "{name}: {stats:?}");
    }
}

#[test]
fn single_precision_drift_run() {
    let sys = fpu_system::<f32>(3, 50.0).unwrap();
    let s0 = fpu_initial(3, 50.0f32);
    let m = ErknMethod32::by_name("ERKN2").unwrap();
    let series = drift_series(&m, &sys, &s0, 0.1, 100.0, 10).unwrap();
    let stats = drift_stats(&series.records);
    assert!(stats.max_dh < 1.0);
}
