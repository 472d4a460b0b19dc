use brjuno_core::cf::{convergents, cylinder, expand, prop21_check, rational_two_expansions, string_action};
use brjuno_core::{surd_normalize, Alpha, ExactReal, ExpansionStatus, Number};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const FIELDS: [i64; 8] = [2, 3, 5, 6, 7, 10, 11, 13];

fn alphas() -> [Alpha; 4] {
    [Alpha::half(), Alpha::ratio(3, 5).unwrap(), Alpha::ratio(2, 3).unwrap(), Alpha::one()]
}

/// An irrational surd inside `(0, alpha)`.
fn surd_in(alpha: &Alpha, a: i64, b: i64, c: i64, i: usize) -> Option<ExactReal> {
    let x = surd_normalize(a, b, c, FIELDS[i]).ok()?;
    (x.is_positive() && &x < alpha.exact() && !x.is_rational()).then_some(x)
}

fn ex(n: &Number) -> &ExactReal {
    n.as_exact().expect("exact state")
}

fn int(n: &BigInt) -> ExactReal {
    ExactReal::int(n.clone())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 160, rng_seed: proptest::test_runner::RngSeed::Fixed(21), failure_persistence: Some(Box::new(proptest::test_runner::FileFailurePersistence::Off)), ..ProptestConfig::default() })]

    #[test]
    fn surd_expansion_identities(k in 0usize..4, a in -30i64..30, b in 1i64..12, c in 1i64..30, i in 0usize..FIELDS.len()) {
        let alpha = &alphas()[k];
        let x = surd_in(alpha, a, b, c, i);
        prop_assume!(x.is_some());
        let x = x.unwrap();
        let xn = Number::Exact(x.clone());
        let e = expand(&xn, alpha, 40).unwrap();
        let upto = e.available().unwrap_or(24).min(24);
        let tr = convergents(&e, upto).unwrap();
        for t in &tr {
            prop_assert_eq!(&t.beta, &t.beta_product, "beta two ways at n = {}", t.n);
        }
        for n in 1..=upto {
            let cur = &tr[n + 1];
            let prev = &tr[n];
            let state = ex(e.state(n).unwrap());
            // x = (p_n + eps_n x_n p_{n-1}) / (q_n + eps_n x_n q_{n-1})
            let s = if cur.eps.sign() > 0 { state.clone() } else { -state };
            let num = &int(&cur.p) + &(&s * &int(&prev.p));
            let den = &int(&cur.q) + &(&s * &int(&prev.q));
            prop_assert_eq!(&(&num / &den), &x, "reconstruction at n = {}", n);
            // x_n = beta_n / beta_{n-1}
            prop_assert_eq!(&(ex(&cur.beta) / ex(&prev.beta)), state);
        }
        let rep = prop21_check(&tr, alpha, &xn);
        prop_assert!(rep.all_passed(), "{:?}", rep);
    }

    #[test]
    fn rationals_terminate(k in 0usize..4, q in 2i64..10_000, frac in 0.0f64..1.0) {
        let alpha = &alphas()[k];
        let p = ((frac * alpha.to_f64() * q as f64) as i64).max(1);
        let r = ExactReal::ratio(p, q).unwrap();
        prop_assume!(r.is_positive() && &r < alpha.exact());
        let e = expand(&Number::Exact(r.clone()), alpha, q as usize + 1).unwrap();
        prop_assert!(matches!(e.status, ExpansionStatus::Terminated(_)));
        prop_assert!(e.digits.len() <= q as usize);
        let dens: Vec<BigInt> = e
            .orbit
            .iter()
            .map(|s| ex(s).as_rational().unwrap().denom().clone())
            .collect();
        for w in dens.windows(2) {
            prop_assert!(w[1] < w[0] || ex(e.orbit.last().unwrap()).is_zero() && w[1] == BigInt::from(1));
        }
    }

    #[test]
    fn cylinders_separate(k in 0usize..4, q in 2i64..500, frac in 0.0f64..1.0, t in 1i64..9) {
        let alpha = &alphas()[k];
        let p = ((frac * alpha.to_f64() * q as f64) as i64).max(1);
        let rr = BigRational::new(p.into(), q.into());
        let r = ExactReal::Rational(rr.clone());
        prop_assume!(r.is_positive() && &r < alpha.exact());
        let (s1, s2) = rational_two_expansions(&rr, alpha).unwrap();
        prop_assert_ne!(&s1, &s2);
        let c1 = cylinder(&s1, alpha).unwrap();
        let c2 = cylinder(&s2, alpha).unwrap();
        prop_assert_eq!(&c1.endpoint_at_zero, &r);
        prop_assert_eq!(&c2.endpoint_at_zero, &r);
        let frac_y = ExactReal::ratio(t, 10).unwrap();
        let y1 = &c1.delta * &frac_y;
        let y2 = &c2.delta * &frac_y;
        let x1 = ex(&string_action(&s1, &Number::Exact(y1)).unwrap()).clone();
        let x2 = ex(&string_action(&s2, &Number::Exact(y2)).unwrap()).clone();
        // opposite sides of r
        let d1 = &x1 - &r;
        let d2 = &x2 - &r;
        prop_assert!(d1.signum() != d2.signum() && !d1.is_zero() && !d2.is_zero());
        for (x, s) in [(&x1, &s1), (&x2, &s2)] {
            let e = expand(&Number::Exact(x.clone()), alpha, s.len() + 2).unwrap();
            prop_assert!(e.digits.len() >= s.len());
            prop_assert_eq!(&e.digits[..s.len()], &s[..], "expansion of S.y must start with S");
        }
        prop_assert!(c1.delta.is_positive() && c2.delta.is_positive());
    }
}
