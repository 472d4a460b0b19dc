//! Exact arithmetic over the rationals and real quadratic fields.

mod mobius;
mod surd;

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use mobius::Mobius;
pub use surd::QuadraticSurd;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::hp;
use surd::{floor_b_sqrt_d, reduce_triple, sign_bilin, sign_lin, squarefree_split, SignCmp};

/// A rational number or an irrational element of some `Q(sqrt(d))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExactReal {
    Rational(BigRational),
    Surd(QuadraticSurd),
}

/// Coordinates `(a, b, c, d)` of `(a + b sqrt d)/c` with `d = 0` meaning rational.
struct Coords {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: u64,
}

impl ExactReal {
    pub fn zero() -> Self {
        ExactReal::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactReal::Rational(BigRational::one())
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        ExactReal::Rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let q = q.into();
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(ExactReal::Rational(BigRational::new(p.into(), q)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactReal::Rational(r)
    }

    /// The exact dyadic rational equal to a finite f64.
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(ExactReal::Rational)
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactReal::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactReal::Rational(r) => Some(r),
            ExactReal::Surd(_) => None,
        }
    }

    /// Radicand of the quadratic field, `None` for rationals.
    pub fn field(&self) -> Option<u64> {
        match self {
            ExactReal::Rational(_) => None,
            ExactReal::Surd(s) => Some(s.d),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactReal::Rational(r) if r.is_zero())
    }

    pub fn signum(&self) -> Ordering {
        match self {
            ExactReal::Rational(r) => r.numer().sign_cmp(),
            ExactReal::Surd(s) => s.signum(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    fn coords(&self) -> Coords {
        match self {
            ExactReal::Rational(r) => Coords { a: r.numer().clone(), b: BigInt::zero(), c: r.denom().clone(), d: 0 },
            ExactReal::Surd(s) => Coords { a: s.a.clone(), b: s.b.clone(), c: s.c.clone(), d: s.d },
        }
    }

    /// Canonicalizes coordinates whose radicand is already squarefree (or 0).
    fn from_coords(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: u64) -> Self {
        assert!(!c.is_zero(), "zero denominator in exact arithmetic");
        if b.is_zero() || d == 0 {
            return ExactReal::Rational(BigRational::new(a, c));
        }
        reduce_triple(&mut a, &mut b, &mut c);
        ExactReal::Surd(QuadraticSurd { a, b, c, d })
    }

    fn common_field(x: &Coords, y: &Coords) -> u64 {
        match (x.d, y.d) {
            (0, d) | (d, 0) => d,
            (d, e) if d == e => d,
            (d, e) => panic!("arithmetic across distinct quadratic fields Q(sqrt {d}) and Q(sqrt {e})"),
        }
    }

    /// Multiplicative inverse.
    pub fn recip(&self) -> Result<Self> {
        match self {
            ExactReal::Rational(r) => {
                if r.is_zero() {
                    Err(Error::ZeroDenominator)
                } else {
                    Ok(ExactReal::Rational(r.recip()))
                }
            }
            ExactReal::Surd(s) => {
                // c / (a + b sqrt d) = c (a - b sqrt d) / (a^2 - b^2 d)
                let norm = &s.a * &s.a - &s.b * &s.b * BigInt::from(s.d);
                Ok(Self::from_coords(&s.c * &s.a, -(&s.c * &s.b), norm, s.d))
            }
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        match self {
            ExactReal::Rational(r) => r.numer().div_floor(r.denom()),
            ExactReal::Surd(s) => (&s.a + floor_b_sqrt_d(&s.b, s.d)).div_floor(&s.c),
        }
    }

    /// Exact comparison, valid across different quadratic fields.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        let x = self.coords();
        let y = other.coords();
        // sign of x.a/x.c + x.b sqrt(dx)/x.c - y.a/y.c - y.b sqrt(dy)/y.c
        let a = &x.a * &y.c - &y.a * &x.c;
        let bx = &x.b * &y.c;
        let by = -(&y.b * &x.c);
        match (x.d, y.d) {
            (0, 0) => a.sign_cmp(),
            (0, e) => sign_lin(&a, &by, e),
            (d, 0) => sign_lin(&a, &bx, d),
            (d, e) if d == e => sign_lin(&a, &(bx + by), d),
            (d, e) => sign_bilin(&a, &bx, d, &by, e),
        }
    }

    pub fn to_bigfloat(&self, p: usize) -> BigFloat {
        let wp = p + 64;
        match self {
            ExactReal::Rational(r) => hp::bigint(r.numer(), wp).div(&hp::bigint(r.denom(), wp), p, hp::RM),
            ExactReal::Surd(s) => {
                let root = hp::sqrt(&hp::bigint(&BigInt::from(s.d), wp), wp);
                let cancels = !s.a.is_zero() && s.a.is_negative() != s.b.is_negative();
                let num = if cancels {
                    // a + b r = (a^2 - b^2 d) / (a - b r), the latter has no cancellation
                    let norm = &s.a * &s.a - &s.b * &s.b * BigInt::from(s.d);
                    let den = hp::bigint(&s.a, wp).sub(&hp::bigint(&s.b, wp).mul(&root, wp, hp::RM), wp, hp::RM);
                    hp::bigint(&norm, wp).div(&den, wp, hp::RM)
                } else {
                    hp::bigint(&s.a, wp).add(&hp::bigint(&s.b, wp).mul(&root, wp, hp::RM), wp, hp::RM)
                };
                num.div(&hp::bigint(&s.c, wp), p, hp::RM)
            }
        }
    }

    pub fn to_dd(&self) -> DoubleDouble {
        if let ExactReal::Rational(r) = self {
            if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
                const LIM: i64 = 1 << 53;
                if n.abs() < LIM && d < LIM {
                    return DoubleDouble::from_f64(n as f64) / DoubleDouble::from_f64(d as f64);
                }
            }
        }
        hp::to_dd(&self.to_bigfloat(160))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_dd().to_f64()
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

/// Canonical surd/rational from integer coordinates `(a + b sqrt d)/c`.
///
/// Square factors of `d` are folded into `b`; `b = 0` or `d` a perfect square
/// yields a rational.
pub fn surd_normalize(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: i64) -> Result<ExactReal> {
    let (a, b, c) = (a.into(), b.into(), c.into());
    if c.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if d < 0 {
        return Err(Error::NegativeRadicand(d));
    }
    let (s, f) = squarefree_split(d as u64);
    let b = b * BigInt::from(s);
    if f <= 1 {
        // sqrt(d) = s is an integer (or d = 0)
        let num = if f == 1 { a + b } else { a };
        return Ok(ExactReal::Rational(BigRational::new(num, c)));
    }
    Ok(ExactReal::from_coords(a, b, c, f))
}

/// Exact comparison of two exact reals.
pub fn surd_compare(x: &ExactReal, y: &ExactReal) -> Ordering {
    x.cmp_exact(y)
}

/// `[x - alpha + 1]`, decided by exact comparisons.
pub fn shifted_floor(x: &ExactReal, alpha: &ExactReal) -> BigInt {
    let same_field = match (x.field(), alpha.field()) {
        (Some(d), Some(e)) => d == e,
        _ => true,
    };
    if same_field {
        return (x - alpha + ExactReal::one()).floor();
    }
    // different fields: estimate, then settle m <= x - alpha + 1 < m + 1 exactly
    let est = (x.to_dd() - alpha.to_dd()).add_f64(1.0).floor().to_f64();
    let mut m = BigInt::from(est as i128);
    let one = ExactReal::one();
    loop {
        let lower = alpha + &ExactReal::int(m.clone()) - one.clone();
        if x.cmp_exact(&lower) == Ordering::Less {
            m -= 1;
            continue;
        }
        let upper = &lower + &one;
        if x.cmp_exact(&upper) != Ordering::Less {
            m += 1;
            continue;
        }
        return m;
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Rational(r) => write!(f, "{r}"),
            ExactReal::Surd(s) => write!(f, "{s}"),
        }
    }
}

impl From<BigRational> for ExactReal {
    fn from(r: BigRational) -> Self {
        ExactReal::Rational(r)
    }
}

impl From<QuadraticSurd> for ExactReal {
    fn from(s: QuadraticSurd) -> Self {
        ExactReal::Surd(s)
    }
}

impl From<i64> for ExactReal {
    fn from(n: i64) -> Self {
        ExactReal::int(n)
    }
}

impl Neg for &ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        match self {
            ExactReal::Rational(r) => ExactReal::Rational(-r),
            ExactReal::Surd(s) => ExactReal::Surd(QuadraticSurd { a: -&s.a, b: -&s.b, c: s.c.clone(), d: s.d }),
        }
    }
}

impl Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        -&self
    }
}

impl Add for &ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: &ExactReal) -> ExactReal {
        if let (ExactReal::Rational(x), ExactReal::Rational(y)) = (self, rhs) {
            return ExactReal::Rational(x + y);
        }
        let (x, y) = (self.coords(), rhs.coords());
        let d = ExactReal::common_field(&x, &y);
        ExactReal::from_coords(&x.a * &y.c + &y.a * &x.c, &x.b * &y.c + &y.b * &x.c, &x.c * &y.c, d)
    }
}

impl Sub for &ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: &ExactReal) -> ExactReal {
        self + &(-rhs)
    }
}

impl Mul for &ExactReal {
    type Output = ExactReal;
    fn mul(self, rhs: &ExactReal) -> ExactReal {
        if let (ExactReal::Rational(x), ExactReal::Rational(y)) = (self, rhs) {
            return ExactReal::Rational(x * y);
        }
        let (x, y) = (self.coords(), rhs.coords());
        let d = ExactReal::common_field(&x, &y);
        let a = &x.a * &y.a + &x.b * &y.b * BigInt::from(d);
        let b = &x.a * &y.b + &x.b * &y.a;
        ExactReal::from_coords(a, b, &x.c * &y.c, d)
    }
}

impl Div for &ExactReal {
    type Output = ExactReal;
    fn div(self, rhs: &ExactReal) -> ExactReal {
        self * &rhs.recip().expect("division by zero in exact arithmetic")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactReal> for ExactReal {
            type Output = ExactReal;
            fn $m(self, rhs: ExactReal) -> ExactReal {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ExactReal> for ExactReal {
            type Output = ExactReal;
            fn $m(self, rhs: &ExactReal) -> ExactReal {
                (&self).$m(rhs)
            }
        }
        impl $tr<ExactReal> for &ExactReal {
            type Output = ExactReal;
            fn $m(self, rhs: ExactReal) -> ExactReal {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// Named constants of the golden and silver families.
pub mod consts {
    use super::{surd_normalize, ExactReal};

    /// `g = (sqrt 5 - 1)/2`.
    pub fn g() -> ExactReal {
        surd_normalize(-1, 1, 2, 5).expect("g")
    }

    /// `G = 1/g = (sqrt 5 + 1)/2`.
    pub fn big_g() -> ExactReal {
        surd_normalize(1, 1, 2, 5).expect("G")
    }

    /// `gamma = sqrt 2 - 1`.
    pub fn gamma() -> ExactReal {
        surd_normalize(-1, 1, 1, 2).expect("gamma")
    }

    /// `Gamma = 1/gamma = sqrt 2 + 1`.
    pub fn big_gamma() -> ExactReal {
        surd_normalize(1, 1, 1, 2).expect("Gamma")
    }

    /// `(a + g)/(a + 1 + g)`.
    pub fn alpha_hat(a: i64) -> ExactReal {
        let g = g();
        let num = &ExactReal::int(a) + &g;
        let den = &ExactReal::int(a + 1) + &g;
        &num / &den
    }
}
