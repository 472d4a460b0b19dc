//! Alpha-continued-fraction expansions: digits, orbits, convergents and cylinders.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::exact::{consts, shifted_floor, ExactReal, Mobius};
use crate::number::{Alpha, Number};

/// Float orbits stop once `x_n < FLOAT_GUARD * q_n^2`: beyond that point the
/// accumulated double-double error is comparable to `x_n` itself.
pub const FLOAT_GUARD: f64 = 2.019_483_917_365_790_2e-28; // 2^-92

/// Largest denominator at which an exact zero in a float orbit is read as a
/// genuine rational input.
pub const FLOAT_RATIONAL_Q: f64 = 67_108_864.0; // 2^26

const MAX_FLOAT_DIGIT: f64 = 9_007_199_254_740_992.0; // 2^53

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Eps {
    Plus,
    Minus,
}

impl Eps {
    pub fn sign(self) -> i8 {
        match self {
            Eps::Plus => 1,
            Eps::Minus => -1,
        }
    }

    fn of(o: Ordering) -> Self {
        if o == Ordering::Less {
            Eps::Minus
        } else {
            Eps::Plus
        }
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Eps::Plus => "+1",
            Eps::Minus => "-1",
        })
    }
}

/// One partial quotient `(a, eps)`: `x_n = 1/(a + eps * x_{n+1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Digit {
    pub a: u64,
    pub eps: Eps,
}

impl Digit {
    pub fn new(a: u64, eps: Eps) -> Self {
        Digit { a, eps }
    }

    pub fn plus(a: u64) -> Self {
        Digit { a, eps: Eps::Plus }
    }

    pub fn minus(a: u64) -> Self {
        Digit { a, eps: Eps::Minus }
    }

    pub fn matrix(&self) -> Mobius {
        Mobius::digit(self.a, self.eps.sign())
    }
}

impl fmt::Display for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.eps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ExpansionStatus {
    /// The orbit reached 0; the input equals this rational.
    Terminated(BigRational),
    /// `x_{preperiod + period} = x_preperiod` exactly.
    Periodic { preperiod: usize, period: usize },
    /// Digits were produced up to this count and then stopped.
    TruncatedAt(usize),
}

/// Digits and orbit of one input under `A_alpha`.
///
/// `digits[k]` is `(a_{k+1}, eps_{k+1})` and `orbit[n]` is `x_n`; the orbit has
/// one more entry than the digit list.
#[derive(Debug, Clone)]
pub struct AlphaExpansion {
    pub alpha: Alpha,
    pub input: Number,
    pub a0: BigInt,
    pub eps0: Eps,
    pub digits: Vec<Digit>,
    pub status: ExpansionStatus,
    pub orbit: Vec<Number>,
}

impl AlphaExpansion {
    pub fn is_periodic(&self) -> bool {
        matches!(self.status, ExpansionStatus::Periodic { .. })
    }

    pub fn is_terminated(&self) -> bool {
        matches!(self.status, ExpansionStatus::Terminated(_))
    }

    /// Number of digits that can be read, `None` when the expansion repeats forever.
    pub fn available(&self) -> Option<usize> {
        match self.status {
            ExpansionStatus::Periodic { .. } => None,
            _ => Some(self.digits.len()),
        }
    }

    fn wrap(&self, k: usize) -> Option<usize> {
        match self.status {
            ExpansionStatus::Periodic { preperiod, period } if k >= preperiod + period => {
                Some(preperiod + (k - preperiod) % period)
            }
            _ if k < self.digits.len() => Some(k),
            _ => None,
        }
    }

    /// `(a_{k+1}, eps_{k+1})`, extended periodically when possible.
    pub fn digit(&self, k: usize) -> Option<Digit> {
        self.wrap(k).map(|i| self.digits[i])
    }

    /// `x_n`, extended periodically when possible.
    pub fn state(&self, n: usize) -> Option<&Number> {
        match self.status {
            ExpansionStatus::Periodic { preperiod, period } if n >= preperiod + period => {
                Some(&self.orbit[preperiod + (n - preperiod) % period])
            }
            _ => self.orbit.get(n),
        }
    }

    /// Digits `(a_1, ..., a_n)` as a block.
    pub fn block(&self, n: usize) -> Result<Vec<Digit>> {
        (0..n)
            .map(|k| self.digit(k).ok_or(Error::Depth { requested: n, available: self.digits.len() }))
            .collect()
    }

    /// `(a_n, eps_n)` for `n >= 0`, the index-zero pair included.
    pub fn pair(&self, n: usize) -> Option<(BigInt, Eps)> {
        if n == 0 {
            Some((self.a0.clone(), self.eps0))
        } else {
            self.digit(n - 1).map(|d| (BigInt::from(d.a), d.eps))
        }
    }
}

/// One application of `A_alpha` on an exact point of `(0, alpha]`.
pub fn alpha_step(x: &ExactReal, alpha: &Alpha) -> Result<(Digit, ExactReal)> {
    if x.is_zero() {
        return Err(Error::OrbitTerminated);
    }
    if !x.is_positive() || x > alpha.exact() {
        return Err(Error::Domain(format!("{x} is outside (0, alpha]")));
    }
    let inv = x.recip()?;
    let a = shifted_floor(&inv, alpha.exact());
    let r = &inv - &ExactReal::int(a.clone());
    let eps = Eps::of(r.signum());
    let a = a.to_u64().ok_or_else(|| Error::Domain(format!("partial quotient {a} exceeds u64")))?;
    Ok((Digit { a, eps }, r.abs()))
}

/// One application of `A_alpha` in double-double arithmetic.
pub fn alpha_step_dd(x: DoubleDouble, alpha: DoubleDouble) -> (f64, Eps, DoubleDouble) {
    let inv = x.recip();
    let a = (inv - alpha).add_f64(1.0).floor();
    let r = inv - a;
    let eps = if r.is_sign_negative() { Eps::Minus } else { Eps::Plus };
    (a.to_f64(), eps, r.abs())
}

/// Expands `x` with at most `max_digits` partial quotients after the index-zero digit.
pub fn expand(x: &Number, alpha: &Alpha, max_digits: usize) -> Result<AlphaExpansion> {
    if max_digits == 0 {
        return Err(Error::Domain("max_digits must be positive".into()));
    }
    match x {
        Number::Exact(e) => expand_exact(e, alpha, max_digits),
        Number::Approx(d) => expand_dd(*d, alpha, max_digits),
    }
}

fn expand_exact(x: &ExactReal, alpha: &Alpha, max_digits: usize) -> Result<AlphaExpansion> {
    let a0 = shifted_floor(x, alpha.exact());
    let r = x - &ExactReal::int(a0.clone());
    let eps0 = Eps::of(r.signum());
    let mut cur = r.abs();
    let mut digits = Vec::new();
    let mut orbit = vec![Number::Exact(cur.clone())];
    let mut seen: HashMap<ExactReal, usize> = HashMap::new();
    let status = loop {
        let n = digits.len();
        if cur.is_zero() {
            let value = x.as_rational().cloned().ok_or_else(|| Error::Consistency("irrational orbit reached 0".into()))?;
            break ExpansionStatus::Terminated(value);
        }
        if !cur.is_rational() {
            if let Some(&m) = seen.get(&cur) {
                break ExpansionStatus::Periodic { preperiod: m, period: n - m };
            }
            seen.insert(cur.clone(), n);
        }
        if n == max_digits {
            break ExpansionStatus::TruncatedAt(n);
        }
        let (d, next) = alpha_step(&cur, alpha)?;
        digits.push(d);
        orbit.push(Number::Exact(next.clone()));
        cur = next;
    };
    Ok(AlphaExpansion { alpha: alpha.clone(), input: Number::Exact(x.clone()), a0, eps0, digits, status, orbit })
}

fn expand_dd(x: DoubleDouble, alpha: &Alpha, max_digits: usize) -> Result<AlphaExpansion> {
    if !x.is_finite() {
        return Err(Error::Domain("non-finite input".into()));
    }
    let al = alpha.dd();
    let a0f = (x - al).add_f64(1.0).floor();
    let r = x - a0f;
    let eps0 = if r.is_sign_negative() { Eps::Minus } else { Eps::Plus };
    let mut cur = r.abs();
    let a0 = BigInt::from(a0f.to_f64() as i128);
    let mut digits: Vec<Digit> = Vec::new();
    let mut orbit = vec![Number::Approx(cur)];
    let (mut q_prev, mut q) = (0.0f64, 1.0f64);
    let mut eps_prev = eps0;
    let status = loop {
        let n = digits.len();
        if cur.is_zero() {
            if q <= FLOAT_RATIONAL_Q {
                let (p, qq) = convergent_of(&a0, eps0, &digits);
                break ExpansionStatus::Terminated(BigRational::new(p, qq));
            }
            orbit.pop();
            digits.pop();
            break ExpansionStatus::TruncatedAt(digits.len());
        }
        if n == max_digits {
            break ExpansionStatus::TruncatedAt(n);
        }
        if n > 0 && cur.hi < FLOAT_GUARD * q * q {
            break ExpansionStatus::TruncatedAt(n);
        }
        let (a, eps, next) = alpha_step_dd(cur, al);
        if !(a >= 1.0) || a >= MAX_FLOAT_DIGIT {
            break ExpansionStatus::TruncatedAt(n);
        }
        let q_next = a * q + f64::from(eps_prev.sign()) * q_prev;
        q_prev = q;
        q = q_next;
        eps_prev = eps;
        digits.push(Digit { a: a as u64, eps });
        orbit.push(Number::Approx(next));
        cur = next;
    };
    Ok(AlphaExpansion { alpha: alpha.clone(), input: Number::Approx(x), a0, eps0, digits, status, orbit })
}

/// `(p_n, q_n)` of `[(a0, eps0); digits]`.
fn convergent_of(a0: &BigInt, eps0: Eps, digits: &[Digit]) -> (BigInt, BigInt) {
    let mut it = ConvergentIter::new(a0.clone(), eps0);
    let mut last = it.first();
    for d in digits {
        last = it.push(BigInt::from(d.a), d.eps);
    }
    last
}

/// Runs `p_n = a_n p_{n-1} + eps_{n-1} p_{n-2}` (same for `q`).
struct ConvergentIter {
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
    eps_prev: Eps,
    a0: BigInt,
    eps0: Eps,
}

impl ConvergentIter {
    fn new(a0: BigInt, eps0: Eps) -> Self {
        // (n-2, n-1) seeds for n = 0
        ConvergentIter { p: (BigInt::zero(), BigInt::one()), q: (BigInt::one(), BigInt::zero()), eps_prev: Eps::Plus, a0, eps0 }
    }

    fn first(&mut self) -> (BigInt, BigInt) {
        let a0 = self.a0.clone();
        self.step(a0, self.eps0)
    }

    fn push(&mut self, a: BigInt, eps: Eps) -> (BigInt, BigInt) {
        self.step(a, eps)
    }

    fn step(&mut self, a: BigInt, eps: Eps) -> (BigInt, BigInt) {
        let e = BigInt::from(self.eps_prev.sign());
        let p = &a * &self.p.1 + &e * &self.p.0;
        let q = &a * &self.q.1 + &e * &self.q.0;
        self.p = (std::mem::take(&mut self.p.1), p.clone());
        self.q = (std::mem::take(&mut self.q.1), q.clone());
        self.eps_prev = eps;
        (p, q)
    }
}

/// State `(p_n, q_n, beta_n)` along an expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergentTriple {
    pub n: i64,
    /// `eps_n`, with `eps_{-1} = +1`.
    pub eps: Eps,
    pub p: BigInt,
    pub q: BigInt,
    /// `|q_n x - p_n|`.
    pub beta: Number,
    /// `x_0 x_1 ... x_n`.
    pub beta_product: Number,
}

/// Convergents for `n = -1, 0, ..., upto`.
pub fn convergents(exp: &AlphaExpansion, upto: usize) -> Result<Vec<ConvergentTriple>> {
    if let Some(av) = exp.available() {
        if upto > av {
            return Err(Error::Depth { requested: upto, available: av });
        }
    }
    let mut out = Vec::with_capacity(upto + 2);
    let one = match &exp.input {
        Number::Exact(_) => Number::Exact(ExactReal::one()),
        Number::Approx(_) => Number::Approx(DoubleDouble::ONE),
    };
    out.push(ConvergentTriple { n: -1, eps: Eps::Plus, p: BigInt::one(), q: BigInt::zero(), beta: one.clone(), beta_product: one.clone() });
    let mut it = ConvergentIter::new(exp.a0.clone(), exp.eps0);
    let mut prod = one;
    for n in 0..=upto {
        let (eps, (p, q)) = if n == 0 {
            (exp.eps0, it.first())
        } else {
            let d = exp.digit(n - 1).expect("depth checked");
            (d.eps, it.push(BigInt::from(d.a), d.eps))
        };
        let xn = exp.state(n).expect("depth checked");
        prod = mul_numbers(&prod, xn);
        let beta = match &exp.input {
            Number::Exact(x) => Number::Exact((&(&ExactReal::int(q.clone()) * x) - &ExactReal::int(p.clone())).abs()),
            Number::Approx(x) => Number::Approx((big_dd(&q) * *x - big_dd(&p)).abs()),
        };
        out.push(ConvergentTriple { n: n as i64, eps, p, q, beta, beta_product: prod.clone() });
    }
    Ok(out)
}

fn mul_numbers(a: &Number, b: &Number) -> Number {
    match (a, b) {
        (Number::Exact(x), Number::Exact(y)) => Number::Exact(x * y),
        _ => Number::Approx(a.to_dd() * b.to_dd()),
    }
}

pub(crate) fn big_dd(n: &BigInt) -> DoubleDouble {
    match n.to_i64() {
        Some(v) if v.unsigned_abs() < (1u64 << 53) => DoubleDouble::from_f64(v as f64),
        _ => ExactReal::int(n.clone()).to_dd(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseResult {
    pub name: String,
    pub passed: bool,
    /// First index at which the clause failed.
    pub witness: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop21Report {
    pub clauses: Vec<ClauseResult>,
    pub determinant_identity: ClauseResult,
}

impl Prop21Report {
    pub fn all_passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed) && self.determinant_identity.passed
    }
}

/// Relative slack for the float comparisons in [`prop21_check`].
const CHECK_SLACK: f64 = 1e-20;

enum Cmp {
    Exact(ExactReal),
    Float(DoubleDouble),
}

fn less(lhs: &Number, rhs: Cmp, strict: bool) -> bool {
    match (lhs, rhs) {
        (Number::Exact(l), Cmp::Exact(r)) => match l.cmp(&r) {
            Ordering::Less => true,
            Ordering::Equal => !strict,
            Ordering::Greater => false,
        },
        (l, Cmp::Exact(r)) => less(l, Cmp::Float(r.to_dd()), strict),
        (l, Cmp::Float(r)) => {
            let l = l.to_dd();
            (l - r).to_f64() <= CHECK_SLACK * r.abs().to_f64()
        }
    }
}

fn greater(lhs: &Number, rhs: Cmp) -> bool {
    match (lhs, rhs) {
        (Number::Exact(l), Cmp::Exact(r)) => l > &r,
        (l, Cmp::Exact(r)) => greater(l, Cmp::Float(r.to_dd())),
        (l, Cmp::Float(r)) => (l.to_dd() - r).to_f64() >= -CHECK_SLACK * r.abs().to_f64(),
    }
}

fn scale(b: &Number, q: &BigInt) -> Number {
    match b {
        Number::Exact(x) => Number::Exact(x * &ExactReal::int(q.clone())),
        Number::Approx(x) => Number::Approx(*x * big_dd(q)),
    }
}

fn compatible(alpha: &ExactReal, d: u64) -> bool {
    alpha.field().map_or(true, |f| f == d)
}

/// Checks the five convergent clauses for `n >= 1` and the determinant identity
/// for every `n >= 0`. `triples` must come from [`convergents`] on the expansion of `x`.
pub fn prop21_check(triples: &[ConvergentTriple], alpha: &Alpha, x: &Number) -> Prop21Report {
    let mut fails: [Option<i64>; 5] = [None; 5];
    let mut det_fail = None;
    let exact = matches!(x, Number::Exact(_));
    let a = alpha.exact();
    let x_sign = match x {
        Number::Exact(e) => e.signum(),
        Number::Approx(d) => d.to_f64().partial_cmp(&0.0).unwrap_or(Ordering::Equal),
    };
    let one = ExactReal::one();
    let lo = (&one + a).recip().expect("1 + alpha > 0");
    let hi = a.recip().expect("alpha > 0");
    let g = consts::g();
    let gamma = consts::gamma();
    let above_g = *a > g;
    let mut g_pow = ExactReal::one();
    let mut gamma_pow = ExactReal::one();
    let mut eps_prod = 1i32;
    // index of the n = 0 triple
    let base = triples.iter().position(|t| t.n == 0).unwrap_or(1).max(1);
    for i in base..triples.len() {
        let t = &triples[i];
        let n = t.n;
        let prev = &triples[i - 1];
        // q_n p_{n-1} - p_n q_{n-1} = (-1)^n eps_0 ... eps_{n-1}
        let lhs = &t.q * &prev.p - &t.p * &prev.q;
        let sign = if n % 2 == 0 { eps_prod } else { -eps_prod };
        if det_fail.is_none() && lhs != BigInt::from(sign) {
            det_fail = Some(n);
        }
        if n >= 1 {
            let rec = |k: usize, f: &mut [Option<i64>; 5]| {
                if f[k].is_none() {
                    f[k] = Some(n);
                }
            };
            if let Some(next) = triples.get(i + 1) {
                if !(next.q > t.q && t.q.is_positive()) {
                    rec(0, &mut fails);
                }
                let bq = scale(&t.beta, &next.q);
                let (lo_c, hi_c) = if exact { (Cmp::Exact(lo.clone()), Cmp::Exact(hi.clone())) } else { (Cmp::Float(lo.to_dd()), Cmp::Float(hi.to_dd())) };
                if !(greater(&bq, lo_c) && less(&bq, hi_c, true)) {
                    rec(2, &mut fails);
                }
            }
            let p_sign = t.p.cmp(&BigInt::zero());
            if x_sign != Ordering::Equal && p_sign != x_sign {
                rec(1, &mut fails);
            }
            if above_g {
                let bound = if exact && compatible(a, 5) { Cmp::Exact(a * &g_pow) } else { Cmp::Float(a.to_dd() * g_pow.to_dd()) };
                if !less(&t.beta, bound, false) {
                    rec(3, &mut fails);
                }
            } else {
                let bound = if exact && compatible(a, 2) { Cmp::Exact(a * &gamma_pow) } else { Cmp::Float(a.to_dd() * gamma_pow.to_dd()) };
                if !less(&t.beta, bound, false) {
                    rec(4, &mut fails);
                }
            }
        }
        g_pow = &g_pow * &g;
        gamma_pow = &gamma_pow * &gamma;
        eps_prod *= i32::from(t.eps.sign());
    }
    let names = ["(i) q_{n+1} > q_n > 0", "(ii) sign of p_n", "(iii) 1/(1+alpha) < beta_n q_{n+1} < 1/alpha", "(iv) beta_n <= alpha g^n", "(v) beta_n <= alpha gamma^n"];
    let clauses = names
        .iter()
        .zip(fails.iter())
        .map(|(nm, f)| ClauseResult { name: nm.to_string(), passed: f.is_none(), witness: *f })
        .collect();
    Prop21Report {
        clauses,
        determinant_identity: ClauseResult { name: "q_n p_{n-1} - p_n q_{n-1}".into(), passed: det_fail.is_none(), witness: det_fail },
    }
}

/// The two blocks `(S, S')` with `S.0 = r = S'.0`. `S` is the block produced by
/// the plain termination algorithm.
pub fn rational_two_expansions(r: &BigRational, alpha: &Alpha) -> Result<(Vec<Digit>, Vec<Digit>)> {
    let x = ExactReal::Rational(r.clone());
    if !x.is_positive() || &x >= alpha.exact() {
        return Err(Error::Domain(format!("{r} is outside (0, alpha)")));
    }
    let plain = expand_exact(&x, alpha, usize::MAX)?.digits;
    let left = one_sided(r, alpha, -1)?;
    let right = one_sided(r, alpha, 1)?;
    if plain == left {
        Ok((left, right))
    } else if plain == right {
        Ok((right, left))
    } else {
        Err(Error::Consistency(format!("termination algorithm on {r} matches neither one-sided expansion")))
    }
}

/// Expansion of `r + side * eta` for infinitesimal `eta > 0`, ending when the
/// remaining state is infinitesimal.
fn one_sided(r: &BigRational, alpha: &Alpha, side: i8) -> Result<Vec<Digit>> {
    let mut v = ExactReal::Rational(r.clone());
    let mut s = side;
    let mut out = Vec::new();
    let one = ExactReal::one();
    loop {
        let inv = v.recip()?;
        let s_inv = -s;
        let mut m = shifted_floor(&inv, alpha.exact());
        let shifted = &(&inv - alpha.exact()) + &one;
        if shifted == ExactReal::int(m.clone()) && s_inv < 0 {
            m -= 1;
        }
        let w = &inv - &ExactReal::int(m.clone());
        let a = m.to_u64().ok_or_else(|| Error::Domain("partial quotient overflow".into()))?;
        match w.signum() {
            Ordering::Greater => {
                out.push(Digit::plus(a));
                v = w;
                s = s_inv;
            }
            Ordering::Less => {
                out.push(Digit::minus(a));
                v = -w;
                s = -s_inv;
            }
            Ordering::Equal => {
                out.push(if s_inv > 0 { Digit::plus(a) } else { Digit::minus(a) });
                return Ok(out);
            }
        }
    }
}

/// Product of the digit matrices of a block.
pub fn block_matrix(block: &[Digit]) -> Mobius {
    block.iter().fold(Mobius::identity(), |m, d| m.compose(&d.matrix()))
}

/// `S . y`.
pub fn string_action(block: &[Digit], y: &Number) -> Result<Number> {
    let m = block_matrix(block);
    match y {
        Number::Exact(e) => m.apply(e).map(Number::Exact),
        Number::Approx(d) => {
            let v = m.apply_dd(*d);
            if v.is_finite() {
                Ok(Number::Approx(v))
            } else {
                Err(Error::Pole)
            }
        }
    }
}

/// Parametrization `y -> S.y`, `0 < y < delta`, of the cylinder of a block.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderDesc {
    pub block: Vec<Digit>,
    pub endpoint_at_zero: ExactReal,
    pub orientation_preserving: bool,
    pub delta: ExactReal,
}

/// Builds the cylinder description of an admissible block.
pub fn cylinder(block: &[Digit], alpha: &Alpha) -> Result<CylinderDesc> {
    if block.is_empty() {
        return Err(Error::Domain("empty block".into()));
    }
    let m = block_matrix(block);
    let endpoint = m.apply(&ExactReal::zero())?;
    let a = alpha.exact();
    let one_minus = &ExactReal::one() - a;
    let bound = |e: Eps| if e == Eps::Plus { a.clone() } else { one_minus.clone() };
    let n = block.len();
    let mut delta = bound(block[n - 1].eps);
    // x_k = T_k(y) with T_k the product of digits k+1..n
    let mut suffix = Mobius::identity();
    for k in (0..n).rev() {
        suffix = block[k].matrix().compose(&suffix);
        let top = if k == 0 { a.clone() } else { bound(block[k - 1].eps) };
        let inv = suffix.inverse();
        for target in [ExactReal::zero(), top] {
            if let Ok(y) = inv.apply(&target) {
                if y.is_positive() && y < delta {
                    delta = y;
                }
            }
        }
        // pole of T_k
        if !suffix.m21.is_zero() {
            let pole = ExactReal::Rational(BigRational::new(-suffix.m22.clone(), suffix.m21.clone()));
            if pole.is_positive() && pole < delta {
                delta = pole;
            }
        }
    }
    Ok(CylinderDesc { block: block.to_vec(), endpoint_at_zero: endpoint, orientation_preserving: m.preserves_orientation(), delta })
}

/// Indices `n(k)`, `k = 0..=K`, with `(p_k, q_k) = (P_{n(k)}, Q_{n(k)})`, where the
/// capitals are regular-continued-fraction convergents of the same point.
pub fn rcf_match(x: &Number, alpha: &Alpha, k_max: usize) -> Result<Vec<usize>> {
    let g = consts::g();
    if alpha.exact() <= &g {
        return Err(Error::Precondition("rcf_match requires alpha > g".into()));
    }
    let depth = 2 * k_max + 4;
    let ea = expand(x, alpha, k_max + 2)?;
    let er = expand(x, &Alpha::one(), depth)?;
    if ea.is_terminated() || er.is_terminated() {
        return Err(Error::Precondition("rcf_match requires an irrational point".into()));
    }
    let ca = convergents(&ea, k_max)?;
    let rcf_avail = er.available().unwrap_or(depth).min(depth);
    let cr = convergents(&er, rcf_avail)?;
    let mut out = Vec::with_capacity(k_max + 1);
    let mut from = 1; // skip the n = -1 seed
    for t in ca.iter().skip(1) {
        let found = cr[from..].iter().position(|u| u.p == t.p && u.q == t.q);
        match found {
            Some(j) => {
                let idx = from + j;
                out.push((cr[idx].n) as usize);
                from = idx + 1;
            }
            None => {
                if cr.len() < 2 * k_max + 2 && er.available().is_some() && from >= cr.len() {
                    return Err(Error::Depth { requested: k_max, available: out.len() });
                }
                return Err(Error::Consistency(format!("alpha-convergent {}/{} (k = {}) is not a regular convergent", t.p, t.q, t.n)));
            }
        }
    }
    for w in out.windows(2) {
        let gap = w[1] - w[0];
        if gap != 1 && gap != 2 {
            return Err(Error::Consistency(format!("index gap {gap} between {} and {}", w[0], w[1])));
        }
    }
    Ok(out)
}
