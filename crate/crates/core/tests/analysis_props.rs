use brjuno_core::analysis::{
    cbm_minorants, compare_alpha_vs_gauss, cusp_lower_bound_check, e0_floor, f_two_step, h_log_ratio, scaling_law_check, scaling_sequence,
    scan_minima, tn_identity, GridSpec, MapId,
};
use brjuno_core::brjuno::{eval_periodic, Evaluator};
use brjuno_core::{consts, surd_normalize, Alpha, ExactReal, Number};
use proptest::prelude::*;
use proptest::test_runner::{FileFailurePersistence, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Quadratic irrationals in `(lo, hi)`.
fn seeds(lo: f64, hi: f64, count: usize) -> Vec<ExactReal> {
    let mut out = Vec::new();
    for d in [2i64, 3, 5, 6, 7, 10, 11, 13] {
        for c in 1i64..=6 {
            for a in -6i64..=3 {
                if let Ok(x) = surd_normalize(a, 1, c, d) {
                    let v = x.to_f64();
                    if !x.is_rational() && v > lo && v < hi && !out.contains(&x) {
                        out.push(x);
                    }
                }
            }
        }
    }
    out.truncate(count);
    out
}

#[test]
fn minorant_dominates_gauss_brjuno() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let ev = Evaluator::float(1e-10);
    let n = 10_000;
    for i in 0..n {
        let x = 0.5 * (i as f64 + 0.5 + 0.8 * (rng.gen::<f64>() - 0.5)) / n as f64;
        let b = ev.eval(&Number::from(x), &Alpha::one()).unwrap().value;
        let phi = cbm_minorants(x).phi.unwrap();
        assert!(b >= phi - 1e-6, "B_1({x}) = {b} < {phi}");
    }
}

#[test]
fn half_interval_minimum_is_at_g_squared() {
    let g = consts::g();
    let g2 = &g * &g;
    let b_g2 = eval_periodic(&g2, &Alpha::one()).unwrap().value;
    assert!((b_g2 + 3.0 * g.to_f64().ln()).abs() < 1e-12);
    let rep = scan_minima(&Alpha::one(), &GridSpec::golden(0.0, 0.5, 100_000), &Evaluator::float(1e-10)).unwrap();
    assert!((rep.argmin - g2.to_f64()).abs() < 2e-5, "argmin {}", rep.argmin);
    assert!(rep.min_value >= b_g2 - 1e-6, "{} vs {b_g2}", rep.min_value);
}

#[test]
fn minorant_dips_below_b_of_g_squared() {
    // phi alone does not reach B_1(g^2): its minimum lies inside (g^2, 1/2)
    let g2 = consts::g().to_f64().powi(2);
    let (x_min, phi_min) = (1..50_000)
        .map(|i| {
            let x = 0.5 * i as f64 / 50_000.0;
            (x, cbm_minorants(x).phi.unwrap())
        })
        .fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    assert!(x_min > g2 && (x_min - 0.389_423).abs() < 1e-4, "{x_min}");
    assert!((phi_min - 1.442_043_5).abs() < 1e-6, "{phi_min}");
}

#[test]
fn cusp_bound_on_orbit_samples() {
    let mut points = Vec::new();
    for x0 in seeds(0.0, 0.5, 8) {
        let mut x = Number::Exact(x0);
        for _ in 0..18 {
            x = MapId::Phi.apply(&x).unwrap();
            points.push(x.clone());
        }
    }
    let rep = cusp_lower_bound_check(&points, &Evaluator::periodic()).unwrap();
    assert!(rep.rows.len() > 100);
    assert!(rep.all_hold, "{:?}", rep.rows.iter().find(|r| !r.holds));
}

#[test]
fn termwise_recursion_for_both_maps() {
    for (map, hi) in [(MapId::Phi, 0.5), (MapId::Psi, 0.4)] {
        for x0 in seeds(0.0, hi, 6) {
            let seq = scaling_sequence(map, &Number::Exact(x0.clone()), 16, &Evaluator::periodic()).unwrap();
            let rep = scaling_law_check(&seq).unwrap();
            assert!(rep.termwise.iter().all(|r| r.holds), "{map:?} from {x0}");
            if map == MapId::Phi {
                assert!(rep.lambda_rows.iter().all(|r| r.in_sandwich), "sandwich from {x0}");
                assert!(rep.lambda_limit_c.is_finite() && rep.lambda_limit_c < 1.0);
                let e0 = seq.es[0];
                assert!(e0 >= e0_floor() - 1e-12, "E_0 = {e0} below the floor from {x0}");
            }
        }
    }
}

#[test]
fn t_n_identities() {
    for n in 0..=20 {
        let t = tn_identity(n).unwrap();
        assert!(t.identity_holds && t.ratio_in_bounds, "n = {n}");
    }
}

#[test]
fn argmin_stable_under_tighter_tolerance() {
    let grid = GridSpec::golden(0.0, 1.0, 10_000);
    let coarse = scan_minima(&Alpha::one(), &grid, &Evaluator::float(1e-4)).unwrap();
    let fine = scan_minima(&Alpha::one(), &grid, &Evaluator::float(1e-6)).unwrap();
    assert_eq!(coarse.argmin, fine.argmin);
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        rng_seed: RngSeed::Fixed(71),
        failure_persistence: Some(Box::new(FileFailurePersistence::Off)),
        ..ProptestConfig::default()
    })]

    #[test]
    fn h_decreasing(x in 0.001f64..0.499, y in 0.001f64..0.499) {
        prop_assume!(x < y);
        prop_assert!(h_log_ratio(x).unwrap() > h_log_ratio(y).unwrap());
    }

    #[test]
    fn f_increasing(x in 0.4001f64..0.4999, y in 0.4001f64..0.4999) {
        prop_assume!(x < y);
        prop_assert!(f_two_step(x).unwrap() < f_two_step(y).unwrap());
    }

    #[test]
    fn alpha_brjuno_dominates_gauss(k in 0usize..5, frac in 0.001f64..0.999) {
        let (p, q) = [(65, 100), (7, 10), (8, 10), (9, 10), (95, 100)][k];
        let alpha = Alpha::ratio(p, q).unwrap();
        let x = Number::from(frac * alpha.to_f64());
        let rep = compare_alpha_vs_gauss(&alpha, &[x], &Evaluator::float(1e-10)).unwrap();
        prop_assert!(rep.min_slack >= -1e-8);
        prop_assert!(rep.rows[0].nk.windows(2).all(|w| matches!(w[1] - w[0], 1 | 2)));
    }
}
