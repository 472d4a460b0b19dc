//! Thin helpers around `astro_float::BigFloat` for high-precision logarithms
//! and conversions from exact integers.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};

use crate::dd::DoubleDouble;

pub const RM: RoundingMode = RoundingMode::ToEven;

/// Default working precision for closed-form evaluation.
pub const DEFAULT_PRECISION_BITS: usize = 128;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

pub fn bigint(n: &BigInt, p: usize) -> BigFloat {
    let (sign, words) = n.to_u64_digits();
    if words.is_empty() {
        return BigFloat::from_word(0, p);
    }
    let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
    let e = 64 * words.len() as i32;
    let mut x = BigFloat::from_words(&words, s, e);
    x.set_precision(p, RM).expect("precision");
    x
}

pub fn from_i64(n: i64, p: usize) -> BigFloat {
    BigFloat::from_i64(n, p)
}

pub fn ln(x: &BigFloat, p: usize) -> BigFloat {
    CONSTS.with(|c| x.ln(p, RM, &mut c.borrow_mut()))
}

pub fn exp(x: &BigFloat, p: usize) -> BigFloat {
    CONSTS.with(|c| x.exp(p, RM, &mut c.borrow_mut()))
}

pub fn sqrt(x: &BigFloat, p: usize) -> BigFloat {
    x.sqrt(p, RM)
}

fn ldexp(mut m: f64, mut e: i64) -> f64 {
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
    }
    m * 2f64.powi(e as i32)
}

/// Nearest-ish f64 (top 128 mantissa bits rounded once).
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if x.is_zero() {
        return 0.0;
    }
    let (m, _, s, e, _) = x.as_raw_parts().expect("finite value");
    let top = m[m.len() - 1];
    let next = if m.len() >= 2 { m[m.len() - 2] } else { 0 };
    // value = 0.top next ... * 2^e
    let v = (top as f64) + (next as f64) * 2f64.powi(-64);
    let r = ldexp(v, e as i64 - 64);
    if s == Sign::Neg {
        -r
    } else {
        r
    }
}

pub fn to_dd(x: &BigFloat) -> DoubleDouble {
    let hi = to_f64(x);
    if !hi.is_finite() || hi == 0.0 {
        return DoubleDouble::from_f64(hi);
    }
    let p = x.precision().unwrap_or(DEFAULT_PRECISION_BITS).max(128);
    let rest = x.sub(&BigFloat::from_f64(hi, 64), p, RM);
    DoubleDouble::from_parts(hi, to_f64(&rest))
}

pub fn from_dd(x: DoubleDouble, p: usize) -> BigFloat {
    BigFloat::from_f64(x.hi, p).add(&BigFloat::from_f64(x.lo, p), p, RM)
}
