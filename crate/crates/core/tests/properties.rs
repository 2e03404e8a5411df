use proptest::prelude::*;

use shockscope::conservation::{rankine_hugoniot, shock_profile, Flux};
use shockscope::merger::{vm_dx_eval, vm_eval, MergerSchedule, MergerSolution};
use shockscope::solver::{run_scl, Grid, SolverConfig};
use shockscope::special::{log_erfc_diff, LogReal};
use shockscope::{Atom, EntireSolution, Measure, Piece};

fn measure_strategy() -> impl Strategy<Value = Measure> {
    (
        prop::collection::vec((-3.0f64..3.0, 0.1f64..1.0), 0..3),
        prop::option::of((-3.0f64..0.5, 0.2f64..2.0, 0.1f64..2.0)),
    )
        .prop_filter_map("needs mass", |(atoms, piece)| {
            let atoms = atoms.into_iter().map(|(z, w)| Atom { z, w }).collect::<Vec<_>>();
            let pieces = piece
                .map(|(a, len, h)| vec![Piece::uniform(a, a + len, h)])
                .unwrap_or_default();
            Measure::new(atoms, pieces).ok()
        })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn logreal_arithmetic_matches_f64(a in -1e6f64..1e6, b in -1e6f64..1e6) {
        let (la, lb) = (LogReal::from_f64(a), LogReal::from_f64(b));
        prop_assert!(close((la * lb).to_f64(), a * b, 1e-13));
        let sum = (la + lb).to_f64();
        prop_assert!((sum - (a + b)).abs() <= 1e-12 * (a.abs() + b.abs()));
    }

    #[test]
    fn erfc_difference_is_positive_and_antisymmetric(a in -6.0f64..6.0, h in 1e-6f64..4.0) {
        let d = log_erfc_diff(a, a + h);
        prop_assert_eq!(d.sign(), 1);
        prop_assert_eq!(log_erfc_diff(a + h, a), -d);
        let direct = libm::erfc(a) - libm::erfc(a + h);
        prop_assert!((d.to_f64() - direct).abs() <= 1e-14 + 1e-12 * direct);
    }

    #[test]
    fn u_stays_in_support_hull(m in measure_strategy(), t in -30.0f64..30.0, x in -40.0f64..40.0) {
        let (lo, hi) = m.support();
        let u = EntireSolution::new(&m).unwrap().eval_u(t, x);
        prop_assert!(u >= lo && u <= hi);
    }

    #[test]
    fn u_is_nonincreasing(m in measure_strategy(), t in -30.0f64..30.0, x in -40.0f64..40.0) {
        let sol = EntireSolution::new(&m).unwrap();
        prop_assert!(sol.eval_dx_u(t, x) <= 0.0);
        prop_assert!(sol.eval_u(t, x + 0.01) <= sol.eval_u(t, x) + 1e-12);
    }

    #[test]
    fn translation_moves_profile(m in measure_strategy(), x0 in -5.0f64..5.0, t in -10.0f64..10.0, x in -10.0f64..10.0) {
        let a = EntireSolution::new(&m.act_translate(x0)).unwrap().eval_u(t, x);
        let b = EntireSolution::new(&m).unwrap().eval_u(t, x - x0);
        prop_assert!(close(a, b, 1e-9), "{} vs {}", a, b);
    }

    #[test]
    fn timeshift_moves_time(m in measure_strategy(), t0 in -5.0f64..5.0, t in -10.0f64..10.0, x in -10.0f64..10.0) {
        let a = EntireSolution::new(&m.act_timeshift(t0)).unwrap().eval_u(t, x);
        let b = EntireSolution::new(&m).unwrap().eval_u(t + t0, x);
        prop_assert!(close(a, b, 1e-9), "{} vs {}", a, b);
    }

    #[test]
    fn galilean_covariance(m in measure_strategy(), c in -2.0f64..2.0, t in -10.0f64..10.0, x in -10.0f64..10.0) {
        let a = EntireSolution::new(&m.act_galilean(c)).unwrap().eval_u(t, x);
        let b = c + EntireSolution::new(&m).unwrap().eval_u(t, x - c * t);
        prop_assert!(close(a, b, 1e-9), "{} vs {}", a, b);
    }

    #[test]
    fn scaling_covariance(m in measure_strategy(), lambda in 0.3f64..3.0, t in -3.0f64..3.0, x in -5.0f64..5.0) {
        let a = EntireSolution::new(&m.act_scale(lambda).unwrap()).unwrap().eval_u(t, x);
        let b = lambda * EntireSolution::new(&m).unwrap().eval_u(lambda * lambda * t, lambda * x);
        prop_assert!(close(a, b, 1e-9), "{} vs {}", a, b);
    }

    #[test]
    fn measure_json_roundtrip(m in measure_strategy()) {
        prop_assert_eq!(Measure::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn vm_is_even_and_positive(m in 0.1f64..1e4, t in 1e-3f64..1e5, x in -200.0f64..200.0) {
        let v = vm_eval(m, t, x).unwrap();
        prop_assert_eq!(v.sign(), 1);
        prop_assert_eq!(v, vm_eval(m, t, -x).unwrap());
        let dv = vm_dx_eval(m, t, x).unwrap();
        prop_assert_eq!(dv, -vm_dx_eval(m, t, -x).unwrap());
        prop_assert!(dv.abs().log_abs() <= v.log_abs() + 1e-12 || dv.is_zero());
    }

    #[test]
    fn merger_u_is_odd_and_bounded(t in 0.0f64..2e9, x in -300.0f64..300.0) {
        let sol = MergerSolution::new(MergerSchedule::desk());
        let u = sol.eval_u(t, x).unwrap();
        prop_assert!(u.abs() <= 2.0);
        prop_assert!((u + sol.eval_u(t, -x).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn merger_terms_increase_potential(t in 0.0f64..2e9, x in -300.0f64..300.0) {
        let sol = MergerSolution::new(MergerSchedule::desk());
        let mut prev = LogReal::ZERO;
        for terms in 0..=3 {
            let (u, _) = sol.potential_truncated(terms, t, x).unwrap();
            prop_assert!(u.log_abs() >= prev.log_abs());
            prev = u;
        }
    }

    #[test]
    fn shock_profiles_are_monotone(a in 0.05f64..1.0, alpha in -1.0f64..0.5, gap in 0.1f64..1.5) {
        let flux = Flux::poly(vec![0.0, 0.0, 0.5, 0.0, a * 0.1]).unwrap();
        let beta = alpha + gap;
        let (c, d) = rankine_hugoniot(&flux, alpha, beta).unwrap();
        prop_assert!((flux.f(alpha) - c * alpha - d).abs() < 1e-12);
        prop_assert!((flux.f(beta) - c * beta - d).abs() < 1e-12);
        let p = shock_profile(&flux, alpha, beta).unwrap();
        let mut prev = f64::INFINITY;
        for i in -40..=40 {
            let v = p.eval(0.5 * f64::from(i) / gap);
            prop_assert!(v <= prev && v >= alpha && v <= beta);
            prev = v;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn solver_keeps_bounds_and_order(knots in prop::collection::vec(-1.0f64..1.0, 5), bump in 0.05f64..0.5) {
        let f = |x: f64| {
            let s = ((x + 2.0) / 1.0).clamp(0.0, 4.0);
            let i = (s.floor() as usize).min(3);
            knots[i] + (s - i as f64) * (knots[i + 1] - knots[i])
        };
        let u0 = Grid::from_fn(-30.0, 30.0, 301, f).unwrap();
        let v0 = Grid::from_fn(-30.0, 30.0, 301, |x| f(x) + bump * (-x * x).exp()).unwrap();
        let config = SolverConfig::default();
        let u = run_scl(&Flux::Burgers, &u0, 3.0, &config).unwrap();
        let v = run_scl(&Flux::Burgers, &v0, 3.0, &config).unwrap();
        let lo = knots.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = knots.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (a, b) in u[0].values.iter().zip(&v[0].values) {
            prop_assert!(*a >= lo - 1e-12 && *a <= hi + 1e-12);
            prop_assert!(*a <= *b + 1e-12);
        }
        let before = v0.minus(&u0).unwrap().l1_norm();
        let after = v[0].minus(&u[0]).unwrap().l1_norm();
        prop_assert!(after <= before + 1e-12);
    }
}
