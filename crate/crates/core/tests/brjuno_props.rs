use brjuno_core::brjuno::{
    eval_float, eval_float_dd, eval_periodic, functional_eq_residual, generalized_eval, partial_sum, tilde_brjuno, Evaluator,
    WeightSpec,
};
use brjuno_core::cf::expand;
use brjuno_core::{surd_normalize, Alpha, ExactReal, Number};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn alphas() -> [Alpha; 4] {
    [Alpha::half(), Alpha::ratio(3, 5).unwrap(), Alpha::ratio(2, 3).unwrap(), Alpha::one()]
}

/// Fifty quadratic irrationals in `(0, 1/2)`, so they lie in every tested domain.
fn surd_fixtures() -> Vec<ExactReal> {
    let mut out = Vec::new();
    'outer: for d in [2i64, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23] {
        for c in 1i64..=7 {
            for a in -8i64..=4 {
                let Ok(x) = surd_normalize(a, 1, c, d) else { continue };
                let xf = x.to_f64();
                if !x.is_rational() && xf > 0.02 && xf < 0.49 && !out.contains(&x) {
                    out.push(x);
                    if out.len() == 50 {
                        break 'outer;
                    }
                    break;
                }
            }
        }
    }
    out
}

#[test]
fn fixture_set_is_full() {
    assert_eq!(surd_fixtures().len(), 50);
}

#[test]
fn float_and_closed_form_agree() {
    for alpha in &alphas() {
        for s in surd_fixtures() {
            let exact = eval_periodic(&s, alpha).unwrap().value;
            let float = eval_float(s.to_f64(), alpha, 1e-8).unwrap().value;
            assert!((exact - float).abs() <= 1e-6, "{s} alpha {}: {exact} vs {float}", alpha.to_f64());
        }
    }
}

#[test]
fn tail_certificates_are_honest() {
    for alpha in &alphas() {
        for s in surd_fixtures() {
            let exact = eval_periodic(&s, alpha).unwrap().value;
            let ev = eval_float_dd(s.to_dd(), alpha, 1e-9).unwrap();
            let tb = ev.tail_bound.expect("surd orbits stay away from rationals");
            assert!(exact >= ev.value - 1e-12 && exact <= ev.value + tb + 1e-12, "{s}: {exact} outside [{}, +{tb}]", ev.value);
        }
    }
}

#[test]
fn functional_equation_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let tol = 1e-10;
    let ev = Evaluator::float(tol);
    for alpha in &alphas() {
        let a = alpha.to_f64();
        for _ in 0..1000 {
            let x = Number::from(rng.gen_range(1e-4..a));
            let r = functional_eq_residual(&x, alpha, &ev).unwrap();
            assert!(r <= 3.0 * tol, "residual {r} at {} alpha {a}", x.to_f64());
        }
    }
}

#[test]
fn gauss_and_tilde_stay_close() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let ev = Evaluator::float(1e-10);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let x = Number::from(rng.gen_range(1e-3..1.0));
        let b = ev.eval(&x, &Alpha::one()).unwrap().value;
        let avail = expand(&x, &Alpha::one(), 40).unwrap().available().unwrap_or(40);
        let t = tilde_brjuno(&x, avail.saturating_sub(2).min(30)).unwrap();
        worst = worst.max((b - t).abs());
    }
    assert!(worst < 5.0, "empirical cap {worst}");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, rng_seed: proptest::test_runner::RngSeed::Fixed(51), failure_persistence: Some(Box::new(proptest::test_runner::FileFailurePersistence::Off)), ..ProptestConfig::default() })]

    #[test]
    fn truncation_is_monotone(k in 0usize..4, frac in 0.001f64..0.999) {
        let alpha = &alphas()[k];
        let x = Number::from(frac * alpha.to_f64());
        let mut prev = f64::NEG_INFINITY;
        let avail = expand(&x, alpha, 40).unwrap().available().unwrap_or(40);
        for depth in 0..avail.min(30) {
            let v = partial_sum(&x, alpha, depth).unwrap();
            prop_assert!(v >= prev, "B^({depth}) = {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn generalized_reduces_to_partial_sum(k in 0usize..4, frac in 0.001f64..0.999, depth in 0usize..30) {
        let alpha = &alphas()[k];
        let x = Number::from(frac * alpha.to_f64());
        match (generalized_eval(&x, alpha, &WeightSpec::brjuno(), depth), partial_sum(&x, alpha, depth)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }
}
