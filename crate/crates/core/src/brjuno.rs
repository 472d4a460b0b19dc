//! Evaluation of `B_alpha(x) = sum_j beta_{j-1} log(1/x_j)` and its relatives.

use std::sync::OnceLock;

use astro_float::BigFloat;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cf::{alpha_step, alpha_step_dd, expand, AlphaExpansion, ExpansionStatus};
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::exact::{consts, ExactReal};
use crate::hp;
use crate::number::{Alpha, Number};

/// Digit budget for detecting the cycle of a quadratic irrational.
pub const PERIODIC_BUDGET: usize = 4000;

/// Maximum orbit length followed by the float evaluator.
pub const FLOAT_BUDGET: usize = 2000;

/// A tail certificate is withheld while any of the next three orbit points is
/// below this threshold (the orbit is then close to a rational, where no
/// uniform bound on `B_alpha` exists).
pub const LOOKAHEAD_FLOOR: f64 = 1e-2;
const LOOKAHEAD: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    PeriodicExact,
    TruncatedFloat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrjunoEvaluation {
    /// `+inf` for rational inputs.
    pub value: f64,
    /// Double-double value when available.
    #[serde(skip)]
    pub precise: Option<DoubleDouble>,
    /// Index `K` of the last orbit point used.
    pub depth: usize,
    /// `None` when the truncation could not be certified.
    pub tail_bound: Option<f64>,
    pub method: Method,
    pub alpha: f64,
}

impl BrjunoEvaluation {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }

    pub fn is_certified(&self) -> bool {
        self.tail_bound.is_some()
    }

    pub fn precise_or_value(&self) -> DoubleDouble {
        self.precise.unwrap_or(DoubleDouble::from_f64(self.value))
    }

    fn infinite(method: Method, alpha: &Alpha, depth: usize) -> Self {
        BrjunoEvaluation { value: f64::INFINITY, precise: None, depth, tail_bound: Some(0.0), method, alpha: alpha.to_f64() }
    }
}

/// Singular weight `u` of a generalized Brjuno sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Weight {
    /// `u(x) = -log x`.
    NegLog,
    /// `u(x) = x^(-1/sigma)`, `sigma > 2`.
    PowerInvSigma(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub nu: u32,
    pub u: Weight,
}

impl WeightSpec {
    pub fn new(nu: u32, u: Weight) -> Result<Self> {
        if nu == 0 {
            return Err(Error::Domain("nu must be a positive integer".into()));
        }
        if let Weight::PowerInvSigma(s) = u {
            if !(s > 2.0) {
                return Err(Error::Domain(format!("sigma must exceed 2, got {s}")));
            }
        }
        Ok(WeightSpec { nu, u })
    }

    pub fn brjuno() -> Self {
        WeightSpec { nu: 1, u: Weight::NegLog }
    }

    fn weight(&self, x: DoubleDouble) -> f64 {
        match self.u {
            Weight::NegLog => -x.ln_f64(),
            Weight::PowerInvSigma(s) => (-x.ln_f64() / s).exp(),
        }
    }
}

fn state_dd(e: &AlphaExpansion, n: usize) -> Option<DoubleDouble> {
    e.state(n).map(Number::to_dd)
}

/// Sum over `j = 0..=k` of `beta_{j-1}^nu u(x_j)`, or `+inf` if the orbit reaches 0.
fn weighted_sum(e: &AlphaExpansion, spec: &WeightSpec, k: usize) -> Result<f64> {
    let mut beta = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ZERO;
    for j in 0..=k {
        let x = match state_dd(e, j) {
            Some(x) => x,
            None => {
                if e.is_terminated() {
                    return Ok(f64::INFINITY);
                }
                return Err(Error::Depth { requested: k, available: e.orbit.len().saturating_sub(1) });
            }
        };
        if x.is_zero() {
            return Ok(f64::INFINITY);
        }
        sum = sum + beta.powi(spec.nu).mul_f64(spec.weight(x));
        beta = beta * x;
    }
    Ok(sum.to_f64())
}

fn expansion_for(x: &Number, alpha: &Alpha, k: usize) -> Result<AlphaExpansion> {
    let budget = match x {
        Number::Exact(e) if !e.is_rational() => PERIODIC_BUDGET.max(k + 1),
        _ => k + 1,
    };
    expand(x, alpha, budget)
}

/// `B_alpha^(K)(x) = sum_{j=0}^{K} beta_{j-1} log(1/x_j)`.
pub fn partial_sum(x: &Number, alpha: &Alpha, k: usize) -> Result<f64> {
    generalized_eval(x, alpha, &WeightSpec::brjuno(), k)
}

/// `sum_{j=0}^{K} beta_{j-1}^nu u(x_j)`.
pub fn generalized_eval(x: &Number, alpha: &Alpha, spec: &WeightSpec, k: usize) -> Result<f64> {
    let e = expansion_for(x, alpha, k)?;
    weighted_sum(&e, spec, k)
}

/// `sum_{k=0}^{K} log(a_{k+1}) / q_k` over the regular continued fraction.
pub fn tilde_brjuno(x: &Number, k: usize) -> Result<f64> {
    let e = expansion_for(x, &Alpha::one(), k + 1)?;
    let (mut q_prev, mut q) = (0.0f64, 1.0f64);
    let mut sum = 0.0;
    for i in 0..=k {
        let d = match e.digit(i) {
            Some(d) => d,
            None if e.is_terminated() => return Ok(f64::INFINITY),
            None => return Err(Error::Depth { requested: k + 1, available: e.digits.len() }),
        };
        sum += (d.a as f64).ln() / q;
        let next = d.a as f64 * q + q_prev;
        q_prev = q;
        q = next;
    }
    Ok(sum)
}

/// Closed-form value at an eventually periodic point, computed with
/// [`hp::DEFAULT_PRECISION_BITS`] bits.
pub fn eval_periodic(x: &ExactReal, alpha: &Alpha) -> Result<BrjunoEvaluation> {
    eval_periodic_prec(x, alpha, hp::DEFAULT_PRECISION_BITS)
}

/// Closed-form value at an eventually periodic point.
///
/// Around the cycle `B(x_m) = C + P B(x_m)` with `P` the product of the cycle
/// states, so `B(x_m) = C/(1 - P)`; the preperiod is then unwound with
/// `B(x_j) = -log x_j + x_j B(x_{j+1})`.
pub fn eval_periodic_prec(x: &ExactReal, alpha: &Alpha, precision_bits: usize) -> Result<BrjunoEvaluation> {
    let e = expand(&Number::Exact(x.clone()), alpha, PERIODIC_BUDGET)?;
    let (m, p) = match e.status {
        ExpansionStatus::Periodic { preperiod, period } => (preperiod, period),
        ExpansionStatus::Terminated(_) => return Err(Error::Precondition(format!("{x} is rational"))),
        ExpansionStatus::TruncatedAt(_) => return Err(Error::NotPeriodic),
    };
    let bits = precision_bits.max(64);
    let wp = bits + 32;
    let exact_state = |i: usize| -> &ExactReal { e.orbit[i].as_exact().expect("exact orbit") };

    // exact cycle product, bounded by alpha^p < 1
    let mut prod = ExactReal::one();
    for i in m..m + p {
        prod = &prod * exact_state(i);
    }
    let mut alpha_pow = ExactReal::one();
    for _ in 0..p {
        alpha_pow = &alpha_pow * alpha.exact();
    }
    let cycle_ok = prod < ExactReal::one() && prod <= alpha_pow;
    if !cycle_ok {
        return Err(Error::Consistency(format!("cycle product {prod} is not below alpha^p")));
    }
    let states: Vec<BigFloat> = (0..m + p).map(|i| exact_state(i).to_bigfloat(wp)).collect();
    let neg_logs: Vec<BigFloat> = states.iter().map(|s| hp::ln(s, wp).neg()).collect();

    let mut c = BigFloat::from_word(0, wp);
    let mut partial = BigFloat::from_word(1, wp);
    for i in m..m + p {
        c = c.add(&partial.mul(&neg_logs[i], wp, hp::RM), wp, hp::RM);
        partial = partial.mul(&states[i], wp, hp::RM);
    }
    let one = BigFloat::from_word(1, wp);
    let denom = one.sub(&prod.to_bigfloat(wp), wp, hp::RM);
    let mut b = c.div(&denom, wp, hp::RM);
    for j in (0..m).rev() {
        b = neg_logs[j].add(&states[j].mul(&b, wp, hp::RM), wp, hp::RM);
    }
    let precise = hp::to_dd(&b);
    Ok(BrjunoEvaluation {
        value: precise.to_f64(),
        precise: Some(precise),
        depth: m + p,
        tail_bound: Some(0.0),
        method: Method::PeriodicExact,
        alpha: alpha.to_f64(),
    })
}

/// Uniform cap on `B_alpha` used in tail certificates: twice the largest value
/// over the points `1/(k + g)`, `k = 1..=20`, for `alpha` in `{1/2, 1}`.
pub fn tail_cap() -> f64 {
    static CAP: OnceLock<f64> = OnceLock::new();
    *CAP.get_or_init(|| {
        let g = consts::g();
        let mut worst: f64 = 0.0;
        for alpha in [Alpha::one(), Alpha::half()] {
            for k in 1..=20 {
                let nu = (&ExactReal::int(k) + &g).recip().expect("nonzero");
                let v = eval_periodic(&nu, &alpha).expect("noble points are periodic").value;
                worst = worst.max(v);
            }
        }
        2.0 * worst
    })
}

/// Truncated sum with a tail certificate, for a float input.
pub fn eval_float(x: f64, alpha: &Alpha, tol: f64) -> Result<BrjunoEvaluation> {
    eval_float_dd(DoubleDouble::from_f64(x), alpha, tol)
}

/// Truncated sum with a tail certificate.
///
/// `K` grows until `beta_K * tail_cap() <= tol` and the next three orbit points
/// stay above [`LOOKAHEAD_FLOOR`]. If the trustworthy digits run out first the
/// best partial sum is returned with `tail_bound = None`.
pub fn eval_float_dd(x: DoubleDouble, alpha: &Alpha, tol: f64) -> Result<BrjunoEvaluation> {
    if !(tol > 0.0) {
        return Err(Error::Domain("tol must be positive".into()));
    }
    let e = expand(&Number::Approx(x), alpha, FLOAT_BUDGET)?;
    if e.is_terminated() {
        return Ok(BrjunoEvaluation::infinite(Method::TruncatedFloat, alpha, e.digits.len()));
    }
    let states: Vec<DoubleDouble> = e.orbit.iter().map(Number::to_dd).collect();
    let cap = tail_cap();
    let mut beta = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ZERO;
    let last = states.len() - 1;
    for (k, &xk) in states.iter().enumerate() {
        if xk.is_zero() {
            return Ok(BrjunoEvaluation::infinite(Method::TruncatedFloat, alpha, k));
        }
        sum = sum + beta.mul_f64(-xk.ln_f64());
        beta = beta * xk;
        let tail = beta.to_f64() * cap;
        if tail <= tol && k + LOOKAHEAD <= last {
            let clear = states[k + 1..=k + LOOKAHEAD].iter().all(|s| s.to_f64() >= LOOKAHEAD_FLOOR);
            if clear {
                return Ok(BrjunoEvaluation {
                    value: sum.to_f64(),
                    precise: Some(sum),
                    depth: k,
                    tail_bound: Some(tail),
                    method: Method::TruncatedFloat,
                    alpha: alpha.to_f64(),
                });
            }
        }
    }
    Ok(BrjunoEvaluation {
        value: sum.to_f64(),
        precise: Some(sum),
        depth: last,
        tail_bound: None,
        method: Method::TruncatedFloat,
        alpha: alpha.to_f64(),
    })
}

/// Strategy used to obtain `B_alpha` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Evaluator {
    /// Closed form on eventually periodic exact inputs only.
    PeriodicExact { precision_bits: usize },
    /// Certified truncated sum on the float image of the input.
    TruncatedFloat { tol: f64 },
    /// Closed form when the input is an exact quadratic irrational, `+inf` on
    /// exact rationals, truncated sum otherwise.
    Auto { tol: f64, precision_bits: usize },
}

impl Evaluator {
    pub fn periodic() -> Self {
        Evaluator::PeriodicExact { precision_bits: hp::DEFAULT_PRECISION_BITS }
    }

    pub fn float(tol: f64) -> Self {
        Evaluator::TruncatedFloat { tol }
    }

    pub fn auto(tol: f64) -> Self {
        Evaluator::Auto { tol, precision_bits: hp::DEFAULT_PRECISION_BITS }
    }

    pub fn eval(&self, x: &Number, alpha: &Alpha) -> Result<BrjunoEvaluation> {
        match (*self, x) {
            (Evaluator::PeriodicExact { precision_bits }, Number::Exact(e)) => eval_periodic_prec(e, alpha, precision_bits),
            (Evaluator::PeriodicExact { .. }, Number::Approx(_)) => {
                Err(Error::Precondition("closed-form evaluation needs an exact input".into()))
            }
            (Evaluator::TruncatedFloat { tol }, _) => eval_float_dd(x.to_dd(), alpha, tol),
            (Evaluator::Auto { precision_bits, .. }, Number::Exact(e)) if e.is_rational() => {
                let _ = precision_bits;
                Ok(BrjunoEvaluation::infinite(Method::PeriodicExact, alpha, 0))
            }
            (Evaluator::Auto { tol, precision_bits }, Number::Exact(e)) => match eval_periodic_prec(e, alpha, precision_bits) {
                Err(Error::NotPeriodic) => eval_float_dd(e.to_dd(), alpha, tol),
                other => other,
            },
            (Evaluator::Auto { tol, .. }, Number::Approx(d)) => eval_float_dd(*d, alpha, tol),
        }
    }

    /// Tolerance attached to the values this evaluator returns.
    pub fn tolerance(&self) -> f64 {
        match *self {
            Evaluator::PeriodicExact { .. } => 0.0,
            Evaluator::TruncatedFloat { tol } | Evaluator::Auto { tol, .. } => tol,
        }
    }
}

/// `|B(x) - (-log x + x B(A_alpha x))|` with both sides from `evaluator`.
pub fn functional_eq_residual(x: &Number, alpha: &Alpha, evaluator: &Evaluator) -> Result<f64> {
    let (ax, log_x, xd) = match x {
        Number::Exact(e) => {
            let (_, next) = alpha_step(e, alpha)?;
            let bits = 160;
            let lx = hp::to_dd(&hp::ln(&e.to_bigfloat(bits), bits));
            (Number::Exact(next), lx, e.to_dd())
        }
        Number::Approx(d) => {
            if d.is_zero() || d.is_sign_negative() || *d > alpha.dd() {
                return Err(Error::Domain("point outside (0, alpha]".into()));
            }
            let (_, _, next) = alpha_step_dd(*d, alpha.dd());
            (Number::Approx(next), DoubleDouble::from_f64(d.ln_f64()), *d)
        }
    };
    let lhs = evaluator.eval(x, alpha)?;
    let rhs = evaluator.eval(&ax, alpha)?;
    if lhs.is_infinite() || rhs.is_infinite() {
        return Ok(if lhs.is_infinite() && rhs.is_infinite() { 0.0 } else { f64::INFINITY });
    }
    let r = lhs.precise_or_value() - (-log_x + xd * rhs.precise_or_value());
    Ok(r.abs().to_f64())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceRow {
    pub epsilon: f64,
    /// `-1` for `r - epsilon`, `+1` for `r + epsilon`.
    pub side: i8,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub rows: Vec<DivergenceRow>,
    pub all_hold: bool,
}

/// Checks `B_alpha(x) >= (log(1/|x - p/q|) - log(4 q^2)) / ((alpha + 1) q)` at
/// `x = r -/+ epsilon`.
pub fn divergence_bound_check(r: &BigRational, alpha: &Alpha, epsilons: &[f64]) -> Result<DivergenceReport> {
    let rx = ExactReal::Rational(r.clone());
    if !rx.is_positive() || &rx >= alpha.exact() {
        return Err(Error::Domain(format!("{r} is outside (0, alpha)")));
    }
    let q = r.denom().to_f64().unwrap_or(f64::INFINITY);
    let rd = rx.to_dd();
    let mut rows = Vec::new();
    for &eps in epsilons {
        if !(eps > 0.0) {
            return Err(Error::Domain("epsilon must be positive".into()));
        }
        let bound = ((1.0 / eps).ln() - (4.0 * q * q).ln()) / ((alpha.to_f64() + 1.0) * q);
        for side in [-1i8, 1] {
            let x = rd.add_f64(f64::from(side) * eps);
            let value = eval_float_dd(x, alpha, 1e-10)?.value;
            rows.push(DivergenceRow { epsilon: eps, side, value, bound, holds: value >= bound });
        }
    }
    let all_hold = rows.iter().all(|r| r.holds);
    Ok(DivergenceReport { rows, all_hold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::consts::{g, gamma};

    fn ln_inv_g() -> f64 {
        (1.0 / 0.618_033_988_749_894_9f64).ln()
    }

    #[test]
    fn partial_sum_golden() {
        let x = Number::Exact(g());
        let s0 = partial_sum(&x, &Alpha::one(), 0).unwrap();
        assert!((s0 - 0.481_211_825_059_603_4).abs() < 1e-15);
        let s60 = partial_sum(&x, &Alpha::one(), 60).unwrap();
        let closed = ln_inv_g() / (1.0 - 0.618_033_988_749_894_9);
        assert!((s60 - closed).abs() < 1e-11, "{s60} {closed}");
        let half = Number::Exact(ExactReal::ratio(1, 2).unwrap());
        assert_eq!(partial_sum(&half, &Alpha::one(), 5).unwrap(), f64::INFINITY);
    }

    #[test]
    fn periodic_examples() {
        let v = eval_periodic(&g(), &Alpha::one()).unwrap();
        assert!((v.value - 1.259_828_913_794_410_2).abs() < 1e-12, "{}", v.value);
        let v = eval_periodic(&gamma(), &Alpha::half()).unwrap();
        assert!((v.value - 1.504_598_827_159_773_5).abs() < 1e-12, "{}", v.value);
        let g2 = &g() * &g();
        let v = eval_periodic(&g2, &Alpha::one()).unwrap();
        assert!((v.value - 1.443_635_475_178_810_3).abs() < 1e-12, "{}", v.value);
    }

    #[test]
    fn float_matches_periodic() {
        let v = eval_float(0.618_033_988_749_894_9, &Alpha::one(), 1e-6).unwrap();
        assert!(v.is_certified());
        assert!((v.value - 1.259_828_913_794_410_2).abs() < 1e-6);
        let v = eval_float(std::f64::consts::SQRT_2 - 1.0, &Alpha::half(), 1e-6).unwrap();
        assert!((v.value - 1.504_598_827_159_773_5).abs() < 1e-6);
        let v = eval_float(0.5, &Alpha::one(), 1e-6).unwrap();
        assert!(v.is_infinite());
    }

    #[test]
    fn tilde_examples() {
        let t = tilde_brjuno(&Number::Exact(g()), 12).unwrap();
        assert_eq!(t, 0.0);
        let t = tilde_brjuno(&Number::Exact(gamma()), 3).unwrap();
        let expect = 2f64.ln() * (1.0 + 0.5 + 0.2 + 1.0 / 12.0);
        assert!((t - expect).abs() < 1e-15);
        let x3 = (&ExactReal::int(3) + &g()).recip().unwrap();
        assert!((tilde_brjuno(&Number::Exact(x3), 0).unwrap() - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn generalized_closed_forms() {
        let x = Number::Exact(g());
        let gf = 0.618_033_988_749_894_9f64;
        let a = Alpha::one();
        assert_eq!(generalized_eval(&x, &a, &WeightSpec::brjuno(), 10).unwrap(), partial_sum(&x, &a, 10).unwrap());
        let p3 = WeightSpec::new(1, Weight::PowerInvSigma(3.0)).unwrap();
        let v = generalized_eval(&x, &a, &p3, 200).unwrap();
        let closed = gf.powf(-1.0 / 3.0) / (1.0 - gf);
        assert!((v - closed).abs() < 1e-9, "{v} {closed}");
        let n2 = WeightSpec::new(2, Weight::NegLog).unwrap();
        let v = generalized_eval(&x, &a, &n2, 100).unwrap();
        assert!((v - ln_inv_g() / (1.0 - gf * gf)).abs() < 1e-12);
    }

    #[test]
    fn residual_exact() {
        let r = functional_eq_residual(&Number::Exact(g()), &Alpha::one(), &Evaluator::periodic()).unwrap();
        assert!(r < 1e-25, "{r}");
        let g2 = &g() * &g();
        let r = functional_eq_residual(&Number::Exact(g2), &Alpha::one(), &Evaluator::periodic()).unwrap();
        assert!(r < 1e-20, "{r}");
    }

    #[test]
    fn divergence_examples() {
        let r = BigRational::new(1.into(), 2.into());
        let rep = divergence_bound_check(&r, &Alpha::one(), &[1e-6]).unwrap();
        assert!(rep.all_hold, "{rep:?}");
        let r = BigRational::new(1.into(), 3.into());
        let rep = divergence_bound_check(&r, &Alpha::one(), &[1e-8, 1e-10]).unwrap();
        assert!(rep.all_hold, "{rep:?}");
        assert!((rep.rows[0].bound - (18.420_680_743_952_367 - 36f64.ln()) / 6.0).abs() < 1e-12);
    }
}
