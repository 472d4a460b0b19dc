use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// An irrational real `(a + b*sqrt(d)) / c` in canonical form:
/// `d >= 2` squarefree, `b != 0`, `c > 0`, `gcd(a, b, c) = 1`.
///
/// Values with `b = 0` or a perfect-square radicand are never stored here;
/// they collapse to rationals in [`super::ExactReal`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticSurd {
    pub(crate) a: BigInt,
    pub(crate) b: BigInt,
    pub(crate) c: BigInt,
    pub(crate) d: u64,
}

impl QuadraticSurd {
    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> u64 {
        self.d
    }

    /// Galois conjugate `(a - b*sqrt(d)) / c`.
    pub fn conjugate(&self) -> QuadraticSurd {
        QuadraticSurd { a: self.a.clone(), b: -&self.b, c: self.c.clone(), d: self.d }
    }

    /// Sign of the value, decided with integer arithmetic only.
    pub fn signum(&self) -> Ordering {
        sign_lin(&self.a, &self.b, self.d)
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "({}{}{}*sqrt({}))/{}", self.a, sign, self.b.abs(), self.d, self.c)
    }
}

/// Splits `d` into `(s, f)` with `d = s^2 * f` and `f` squarefree.
pub(crate) fn squarefree_split(mut d: u64) -> (u64, u64) {
    if d == 0 {
        return (0, 0);
    }
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= d {
        let mut k = 0;
        while d % p == 0 {
            d /= p;
            k += 1;
        }
        for _ in 0..k / 2 {
            square *= p;
        }
        if k % 2 == 1 {
            free *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    free *= d;
    (square, free)
}

/// Exact sign of `a + b*sqrt(d)` for squarefree `d >= 2`.
pub(crate) fn sign_lin(a: &BigInt, b: &BigInt, d: u64) -> Ordering {
    let sa = a.sign_cmp();
    let sb = b.sign_cmp();
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    let lhs = a * a;
    let rhs = b * b * BigInt::from(d);
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Exact sign of `a + b*sqrt(d) + c*sqrt(e)` for distinct squarefree `d, e >= 2`.
pub(crate) fn sign_bilin(a: &BigInt, b: &BigInt, d: u64, c: &BigInt, e: u64) -> Ordering {
    let su = sign_lin(a, b, d);
    let sv = c.sign_cmp();
    if su == Ordering::Equal {
        return sv;
    }
    if sv == Ordering::Equal || su == sv {
        return su;
    }
    // compare (a + b sqrt d)^2 against c^2 e
    let ra = a * a + b * b * BigInt::from(d) - c * c * BigInt::from(e);
    let rb = BigInt::from(2) * a * b;
    match sign_lin(&ra, &rb, d) {
        Ordering::Greater => su,
        Ordering::Less => sv,
        Ordering::Equal => Ordering::Equal,
    }
}

/// `floor(b * sqrt(d))` for squarefree `d >= 2`, `b != 0`.
pub(crate) fn floor_b_sqrt_d(b: &BigInt, d: u64) -> BigInt {
    let sq = (b * b * BigInt::from(d)).sqrt();
    if b.is_positive() {
        sq
    } else {
        -sq - BigInt::one()
    }
}

pub(crate) trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

/// Divides out `gcd(a, b, c)` and forces `c > 0`.
pub(crate) fn reduce_triple(a: &mut BigInt, b: &mut BigInt, c: &mut BigInt) {
    if c.is_negative() {
        *a = -&*a;
        *b = -&*b;
        *c = -&*c;
    }
    let g = a.gcd(b).gcd(c);
    if !g.is_zero() && !g.is_one() {
        *a /= &g;
        *b /= &g;
        *c /= &g;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_split(8), (2, 2));
        assert_eq!(squarefree_split(5), (1, 5));
        assert_eq!(squarefree_split(72), (6, 2));
        assert_eq!(squarefree_split(49), (7, 1));
        assert_eq!(squarefree_split(1), (1, 1));
    }

    #[test]
    fn signs() {
        let i = |v: i64| BigInt::from(v);
        // 2 - sqrt(5) < 0
        assert_eq!(sign_lin(&i(2), &i(-1), 5), Ordering::Less);
        // 3 - sqrt(5) > 0
        assert_eq!(sign_lin(&i(3), &i(-1), 5), Ordering::Greater);
        // sqrt(5) - sqrt(2) - 0.8 > 0 : 5 sqrt5 - 5 sqrt2 - 4 > 0
        assert_eq!(sign_bilin(&i(-4), &i(5), 5, &i(-5), 2), Ordering::Greater);
        // sqrt(3) - sqrt(2) - 0.4 < 0 : 0.3178 - 0.4
        assert_eq!(sign_bilin(&i(-2), &i(5), 3, &i(-5), 2), Ordering::Less);
    }

    #[test]
    fn floor_parts() {
        assert_eq!(floor_b_sqrt_d(&BigInt::from(1), 5), BigInt::from(2));
        assert_eq!(floor_b_sqrt_d(&BigInt::from(-1), 5), BigInt::from(-3));
        assert_eq!(floor_b_sqrt_d(&BigInt::from(3), 2), BigInt::from(4));
    }
}
