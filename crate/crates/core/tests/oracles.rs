//! Comparisons against independently computed reference values.

use shockscope::merger::{
    check_long_bounds, check_short_bounds, inter_asymptotic, vm_dx_eval, vm_eval, MergerSchedule, MergerSolution,
};
use shockscope::solver::{run_scl, Grid, SolverConfig};
use shockscope::conservation::Flux;

/// Composite three-point Gauss rule on `n` panels; never samples the ends.
fn gauss3<F: Fn(f64) -> f64>(a: f64, b: f64, n: usize, f: F) -> f64 {
    let h = (b - a) / n as f64;
    let r = 0.5 * (0.6f64).sqrt();
    let mut s = 0.0;
    for i in 0..n {
        let c = a + h * (i as f64 + 0.5);
        s += 5.0 * f(c - r * h) + 8.0 * f(c) + 5.0 * f(c + r * h);
    }
    s * h / 18.0
}

/// Gauss on each smooth piece between the breakpoints.
fn piecewise<F: Fn(f64) -> f64>(a: f64, b: f64, breaks: &[f64], f: F) -> f64 {
    let mut cuts = vec![a];
    cuts.extend(breaks.iter().copied().filter(|&c| c > a && c < b));
    cuts.push(b);
    cuts.windows(2).map(|w| gauss3(w[0], w[1], 20_000, &f)).sum()
}

/// Heat evolution of `cosh(min(|y|, m))` by direct convolution.
fn vm_convolution(m: f64, t: f64, x: f64) -> (f64, f64) {
    let width = 12.0 * t.sqrt() + 2.0 * t;
    let (a, b) = (x - width, x + width);
    let g = |y: f64| (-(x - y) * (x - y) / (4.0 * t)).exp() / (4.0 * std::f64::consts::PI * t).sqrt();
    let v = piecewise(a, b, &[-m, m], |y| g(y) * y.abs().min(m).cosh());
    let dv = piecewise(a, b, &[-m, m], |y| if y.abs() < m { g(y) * y.sinh() } else { 0.0 });
    (v, dv)
}

#[test]
fn vm_matches_convolution() {
    let (v, _) = vm_convolution(2.0, 1.0, 0.0);
    assert!((vm_eval(2.0, 1.0, 0.0).unwrap().to_f64() - v).abs() < 1e-10);
    for (m, t, x) in [(3.0, 2.0, 1.7), (1.0, 0.3, -0.4), (5.0, 4.0, 6.0), (0.5, 10.0, 2.0)] {
        let (v, dv) = vm_convolution(m, t, x);
        let got = vm_eval(m, t, x).unwrap().to_f64();
        let dgot = vm_dx_eval(m, t, x).unwrap().to_f64();
        assert!((got - v).abs() < 1e-10 * v, "V {m} {t} {x}: {got} vs {v}");
        assert!((dgot - dv).abs() < 1e-10 * v, "dV {m} {t} {x}: {dgot} vs {dv}");
    }
}

#[test]
fn vm_short_time_tends_to_data() {
    for x in [0.0, 1.5, -3.0] {
        let v = vm_eval(40.0, 1e-8, x).unwrap().to_f64();
        assert!((v - f64::cosh(x)).abs() < 1e-6 * f64::cosh(x));
    }
}

#[test]
fn long_bound_examples() {
    assert!(check_long_bounds(2.0, 100.0, 0.0).unwrap().all());
    assert!(check_long_bounds(2.0, 2.0, 0.0).unwrap().all());
    assert!(1.0 - 2.0 / std::f64::consts::PI.sqrt() < 0.0);
    assert!(check_long_bounds(2.0, 1.0, 0.0).unwrap().lower_ok);
    assert!(check_long_bounds(10.0, 1e4, 5.0).unwrap().all());
}

#[test]
fn short_bound_examples() {
    assert!(check_short_bounds(40.0, 5.0, 2.0).unwrap().all());
    assert!(check_short_bounds(1000.0, 100.0, 50.0).unwrap().all());
    assert!(check_short_bounds(10.0, 2.0, 2.0).is_err());
}

#[test]
fn inter_asymptotic_examples() {
    let m = 1e4;
    let v = vm_eval(m, m, 0.0).unwrap();
    assert!((v.ratio(inter_asymptotic(m, 1.0, 0.0).unwrap()) - 1.0).abs() <= 10.0 / m);
    let at2 = vm_eval(m, m, 2.0).unwrap();
    assert!((at2.ratio(v) - 1f64.cosh()).abs() < 1e-3);
    let m = 1e6;
    let v = vm_eval(m, m / 0.5, 0.0).unwrap();
    assert!((v.ratio(inter_asymptotic(m, 0.5, 0.0).unwrap()) - 1.0).abs() <= 100.0 / m);
    assert!(inter_asymptotic(m, 2.0, 0.0).is_err());
    assert!(inter_asymptotic(m, 0.0, 0.0).is_err());
}

#[test]
fn merger_at_second_merge_time_matches_convolution() {
    let schedule = MergerSchedule::desk();
    let sol = MergerSolution::new(schedule.clone());
    let t = schedule.merge_time(2).unwrap();
    assert_eq!(t, 209.0);
    let x = 2.0;
    let n = f64::from(schedule.n());
    // Terms beyond the second carry e^{-10^9} and vanish here.
    let norm = (4.0 * std::f64::consts::PI * t).sqrt();
    let kernel = |y: f64, c: f64| (c - (x - y) * (x - y) / (4.0 * t)).exp() / norm;
    let data = |y: f64| {
        let mut v = kernel(y, 0.0);
        let mut dv = 0.0;
        for &tj in &schedule.times()[..2] {
            let m = n * tj;
            let c = y.abs().min(m);
            v += kernel(y, c - tj) * 0.5 * (1.0 + (-2.0 * c).exp());
            if y.abs() < m {
                dv += y.signum() * kernel(y, c - tj) * 0.5 * (1.0 - (-2.0 * c).exp());
            }
        }
        (v, dv)
    };
    let breaks = [-2000.0, -10.0, 0.0, 10.0, 2000.0];
    let u_big = piecewise(-3000.0, 3000.0, &breaks, |y| data(y).0);
    let du_big = piecewise(-3000.0, 3000.0, &breaks, |y| data(y).1);
    let reference = -2.0 * du_big / u_big;
    let got = sol.eval_u(t, x).unwrap();
    assert!((got - reference).abs() < 1e-8, "{got} vs {reference}");
    assert_eq!(sol.eval_u(t, 0.0).unwrap(), 0.0);
}

#[test]
fn merger_matches_pde_run() {
    let sol = MergerSolution::new(MergerSchedule::desk());
    let u0 = Grid::from_fn(-30.0, 30.0, 4801, |x| sol.eval_u(0.0, x).unwrap()).unwrap();
    let config = SolverConfig {
        boundary_tol: 1e-6,
        ..SolverConfig::with_outputs(&[1.0])
    };
    let out = run_scl(&Flux::Burgers, &u0, 5.0, &config).unwrap();
    for g in &out {
        let mut worst: f64 = 0.0;
        for (i, v) in g.values.iter().enumerate() {
            let x = g.x(i);
            if x.abs() <= 20.0 {
                worst = worst.max((v - sol.eval_u(g.time, x).unwrap()).abs());
            }
        }
        assert!(worst <= 5e-3, "t={} sup={worst}", g.time);
    }
}

#[test]
fn lebesgue_far_outside_the_fan() {
    use shockscope::closed_form::closed_lebesgue_u;
    use shockscope::{EntireSolution, Measure};
    let sol = EntireSolution::new(&Measure::lebesgue(-1.0, 1.0).unwrap()).unwrap();
    for x in [1e4, 2e4, 3e4, -3e4] {
        let got = sol.eval_u(-1e4, x);
        let exact = closed_lebesgue_u(-1e4, x).unwrap();
        assert!((got - exact).abs() < 1e-9, "x={x}: {got} vs {exact}");
    }
}
