use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{diff_dd, linear_fit};
use crate::brjuno::{eval_periodic, BrjunoEvaluation, Evaluator, Method};
use crate::cf::{big_dd, string_action, Digit};
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::exact::{consts, ExactReal};
use crate::hp;
use crate::number::{Alpha, Number};

/// `sigma_constant(50)`, frozen.
pub const SIGMA: f64 = 0.854_101_966_249_684_5;

/// The two inverse branches whose fixed points are the minimizers of `B_1` and `B_{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapId {
    /// `Phi(x) = 1/(1+x)`, fixed point `g`, parameter `alpha = 1`.
    Phi,
    /// `Psi(x) = 1/(2+x)`, fixed point `gamma`, parameter `alpha = 1/2`.
    Psi,
}

impl MapId {
    pub fn digit(self) -> Digit {
        match self {
            MapId::Phi => Digit::plus(1),
            MapId::Psi => Digit::plus(2),
        }
    }

    pub fn fixpoint(self) -> ExactReal {
        match self {
            MapId::Phi => consts::g(),
            MapId::Psi => consts::gamma(),
        }
    }

    pub fn alpha(self) -> Alpha {
        match self {
            MapId::Phi => Alpha::one(),
            MapId::Psi => Alpha::half(),
        }
    }

    /// Seeds must lie in `(0, seed_bound)`.
    pub fn seed_bound(self) -> ExactReal {
        match self {
            MapId::Phi => ExactReal::ratio(1, 2).expect("1/2"),
            MapId::Psi => ExactReal::ratio(2, 5).expect("2/5"),
        }
    }

    pub fn apply(self, x: &Number) -> Result<Number> {
        string_action(&[self.digit()], x)
    }

    fn orbit(self, x0: &Number, n: usize) -> Result<Vec<Number>> {
        let mut pts = Vec::with_capacity(n + 1);
        pts.push(x0.clone());
        for k in 0..n {
            let next = self.apply(&pts[k])?;
            pts.push(next);
        }
        Ok(pts)
    }
}

/// Fibonacci numbers, `F_0 = 0`, `F_1 = 1`.
pub fn fib(n: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a
}

fn fib_ratio(num: usize, den: usize) -> ExactReal {
    ExactReal::Rational(BigRational::new(fib(num), fib(den)))
}

/// Orbit `x_{n+1} = Phi(x_n)` or `Psi(x_n)` with the deviations of `B` from its minimum.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingSequence {
    pub map_id: MapId,
    pub x0: f64,
    #[serde(skip)]
    pub points: Vec<Number>,
    pub xs: Vec<f64>,
    /// `B(x_n)`.
    pub values: Vec<f64>,
    /// `E_n = B(x_n) - B(fixpoint)`.
    pub es: Vec<f64>,
    #[serde(skip)]
    pub es_precise: Vec<DoubleDouble>,
    /// `delta_n = x_n - fixpoint`.
    pub deltas: Vec<f64>,
    #[serde(skip)]
    pub deltas_precise: Vec<DoubleDouble>,
    /// `lambda_n = x_{2n+1} x_{2n}` for `2n + 1 <= N`.
    pub lambdas: Vec<f64>,
    /// `l = 1/fixpoint - B(fixpoint)`.
    pub l_const: f64,
    pub sigma: f64,
    /// Every value came from a closed form or carries a tail bound.
    pub certified: bool,
    /// The orbit was computed in exact arithmetic.
    pub exact: bool,
}

/// Seeds in `(0, seed_bound)`, plus the fixed point itself (a constant orbit).
fn in_seed_range(map_id: MapId, x0: &Number) -> bool {
    let hi = map_id.seed_bound();
    match x0 {
        Number::Exact(e) => (e.is_positive() && e < &hi) || e == &map_id.fixpoint(),
        Number::Approx(d) => d.to_f64() > 0.0 && *d < hi.to_dd(),
    }
}

fn certified(e: &BrjunoEvaluation) -> bool {
    e.method == Method::PeriodicExact || e.is_certified()
}

/// Builds `x_0, ..., x_N` and `E_n`, `delta_n`, `lambda_n` along the orbit.
pub fn scaling_sequence(map_id: MapId, x0: &Number, n: usize, evaluator: &Evaluator) -> Result<ScalingSequence> {
    if n < 2 {
        return Err(Error::Domain("N must be at least 2".into()));
    }
    if !in_seed_range(map_id, x0) {
        return Err(Error::Domain(format!("x0 = {x0} is outside (0, {})", map_id.seed_bound())));
    }
    let points = map_id.orbit(x0, n)?;
    if map_id == MapId::Phi {
        check_fibonacci(&points)?;
    }
    let alpha = map_id.alpha();
    let fix = map_id.fixpoint();
    let bfix = eval_periodic(&fix, &alpha)?;
    let bfix_dd = bfix.precise_or_value();
    let evals = points.par_iter().map(|p| evaluator.eval(p, &alpha)).collect::<Result<Vec<_>>>()?;

    let es_precise: Vec<DoubleDouble> = evals.iter().map(|e| e.precise_or_value() - bfix_dd).collect();
    let deltas_precise: Vec<DoubleDouble> = points.iter().map(|p| diff_dd(p, &fix)).collect();
    let lambdas = (0..)
        .take_while(|k| 2 * k + 1 <= n)
        .map(|k| product_dd(&points[2 * k + 1], &points[2 * k]).to_f64())
        .collect();
    let l = fix.recip()?.to_dd() - bfix_dd;
    Ok(ScalingSequence {
        map_id,
        x0: x0.to_f64(),
        xs: points.iter().map(Number::to_f64).collect(),
        values: evals.iter().map(|e| e.value).collect(),
        es: es_precise.iter().map(|e| e.to_f64()).collect(),
        deltas: deltas_precise.iter().map(|d| d.to_f64()).collect(),
        es_precise,
        deltas_precise,
        lambdas,
        l_const: l.to_f64(),
        sigma: SIGMA,
        certified: evals.iter().all(certified),
        exact: x0.as_exact().is_some(),
        points,
    })
}

fn product_dd(a: &Number, b: &Number) -> DoubleDouble {
    match (a, b) {
        (Number::Exact(x), Number::Exact(y)) if x.field() == y.field() || x.is_rational() || y.is_rational() => {
            (x * y).to_dd()
        }
        _ => a.to_dd() * b.to_dd(),
    }
}

/// `x_n = (F_n + x_0 F_{n-1}) / (F_{n+1} + x_0 F_n)` against the iterated orbit.
fn check_fibonacci(points: &[Number]) -> Result<()> {
    let x0 = &points[0];
    for (n, xn) in points.iter().enumerate().skip(1) {
        let ok = match x0 {
            Number::Exact(e) => {
                let f = |k: usize| ExactReal::int(fib(k));
                let v = &(&f(n) + &(e * &f(n - 1))) / &(&f(n + 1) + &(e * &f(n)));
                xn.as_exact() == Some(&v)
            }
            Number::Approx(d) => {
                let f = |k: usize| big_dd(&fib(k));
                let v = (f(n) + *d * f(n - 1)) / (f(n + 1) + *d * f(n));
                (v - xn.to_dd()).abs().to_f64() <= 1e-25
            }
        };
        if !ok {
            return Err(Error::Consistency(format!("Fibonacci form of x_{n} disagrees with the orbit")));
        }
    }
    Ok(())
}

/// One checked inequality `lhs >= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecursionRow {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaRow {
    pub n: usize,
    pub lambda: f64,
    /// `F_{2n}/F_{2n+2}`.
    pub lower: f64,
    /// `F_{2n+2}/F_{2n+4}`.
    pub upper: f64,
    pub in_sandwich: bool,
    pub at_least_third: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub map_id: MapId,
    /// `E_{n+1} >= x_{n+1} E_n - l delta_{n+1}`.
    pub termwise: Vec<RecursionRow>,
    /// `E_{2n+1} >= lambda_n E_{2n-1}`.
    pub odd_recursion: Vec<RecursionRow>,
    /// Fibonacci sandwich, `Phi` only.
    pub lambda_rows: Vec<LambdaRow>,
    /// `max_n |lambda_n - fix^2| / fix^{4n}`.
    pub lambda_limit_c: f64,
    /// `E_{2n+1} >= sigma E_1 g^{2n}`, `Phi` only.
    pub sigma_rows: Vec<RecursionRow>,
    /// `min_n E_{2n+1} / gamma^{2n}`, `Psi` only.
    pub c3: Option<f64>,
    pub all_hold: bool,
}

/// Checks the scaling inequalities along a certified exact sequence.
pub fn scaling_law_check(seq: &ScalingSequence) -> Result<ScalingReport> {
    if !seq.certified || !seq.exact {
        return Err(Error::Uncertified("scaling checks need a certified exact orbit".into()));
    }
    let n_max = seq.points.len() - 1;
    let e = &seq.es_precise;
    let fix = seq.map_id.fixpoint();
    let fix_f = fix.to_f64();
    let l = DoubleDouble::from_f64(seq.l_const);

    let termwise: Vec<RecursionRow> = (0..n_max)
        .map(|n| {
            let rhs = seq.points[n + 1].to_dd() * e[n] - l * seq.deltas_precise[n + 1];
            RecursionRow { n, lhs: e[n + 1].to_f64(), rhs: rhs.to_f64(), holds: e[n + 1] >= rhs }
        })
        .collect();

    let lambda_exact: Vec<ExactReal> = (0..)
        .take_while(|k| 2 * k + 1 <= n_max)
        .map(|k| {
            let a = seq.points[2 * k + 1].as_exact().expect("exact orbit");
            let b = seq.points[2 * k].as_exact().expect("exact orbit");
            a * b
        })
        .collect();

    let odd_recursion: Vec<RecursionRow> = (1..lambda_exact.len())
        .map(|k| {
            let rhs = lambda_exact[k].to_dd() * e[2 * k - 1];
            RecursionRow { n: k, lhs: e[2 * k + 1].to_f64(), rhs: rhs.to_f64(), holds: e[2 * k + 1] >= rhs }
        })
        .collect();

    let mut lambda_rows = Vec::new();
    let mut sigma_rows = Vec::new();
    let mut c3 = None;
    let third = ExactReal::ratio(1, 3)?;
    match seq.map_id {
        MapId::Phi => {
            for (k, lam) in lambda_exact.iter().enumerate().skip(1) {
                let lower = fib_ratio(2 * k, 2 * k + 2);
                let upper = fib_ratio(2 * k + 2, 2 * k + 4);
                lambda_rows.push(LambdaRow {
                    n: k,
                    lambda: lam.to_f64(),
                    lower: lower.to_f64(),
                    upper: upper.to_f64(),
                    in_sandwich: &lower <= lam && lam <= &upper,
                    at_least_third: lam >= &third,
                });
            }
            let g2 = fix_f * fix_f;
            for k in 1..lambda_exact.len() {
                let rhs = e[1].mul_f64(seq.sigma * g2.powi(k as i32));
                sigma_rows.push(RecursionRow { n: k, lhs: e[2 * k + 1].to_f64(), rhs: rhs.to_f64(), holds: e[2 * k + 1] >= rhs });
            }
        }
        MapId::Psi => {
            let c = (0..lambda_exact.len())
                .map(|k| e[2 * k + 1].to_f64() / (fix_f * fix_f).powi(k as i32))
                .fold(f64::INFINITY, f64::min);
            c3 = Some(c);
        }
    }
    let fix2 = fix_f * fix_f;
    let lambda_limit_c = lambda_exact
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, lam)| (lam.to_f64() - fix2).abs() / fix2.powi(2 * k as i32))
        .fold(0.0, f64::max);

    let all_hold = termwise.iter().all(|r| r.holds)
        && odd_recursion.iter().all(|r| r.holds)
        && lambda_rows.iter().all(|r| r.in_sandwich && r.at_least_third)
        && sigma_rows.iter().all(|r| r.holds)
        && c3.map_or(true, |c| c > 0.0);
    Ok(ScalingReport { map_id: seq.map_id, termwise, odd_recursion, lambda_rows, lambda_limit_c, sigma_rows, c3, all_hold })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaResult {
    pub n: usize,
    pub value: f64,
    #[serde(skip)]
    pub precise: DoubleDouble,
    /// Size of the last summand `log(g^2 F_{2N+2}/F_{2N})`.
    pub tail_estimate: f64,
}

/// `exp(-sum_{n=1}^{N} log(g^2 F_{2n+2} / F_{2n}))`.
pub fn sigma_constant(n: usize) -> Result<SigmaResult> {
    if n < 1 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let p = hp::DEFAULT_PRECISION_BITS;
    let g = consts::g();
    let g2 = &g * &g;
    let mut sum = hp::from_i64(0, p);
    let mut last = 0.0;
    for k in 1..=n {
        let term = &g2 * &fib_ratio(2 * k + 2, 2 * k);
        let lt = hp::ln(&term.to_bigfloat(p), p);
        last = hp::to_f64(&lt).abs();
        sum = sum.add(&lt, p, hp::RM);
    }
    let v = hp::exp(&sum.neg(), p);
    let precise = hp::to_dd(&v);
    Ok(SigmaResult { n, value: precise.to_f64(), precise, tail_estimate: last })
}

/// `(3 - 1/(1-g)) log(1/g)`, the lower bound for `E_0` on `(0, 1/2)`.
pub fn e0_floor() -> f64 {
    let g = consts::g().to_f64();
    (3.0 - 1.0 / (1.0 - g)) * (1.0 / g).ln()
}

/// Constants of the square-root cusp at `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspConstant {
    pub sigma: f64,
    /// `E_1 = B_1(Phi(1 - g)) - B_1(g)`.
    pub e1: f64,
    /// `sigma E_1 / G`, valid on `(g, 1)`.
    pub c_right: f64,
    /// `sigma E_1 / 2`, valid on `(1/2, g)`.
    pub c_left: f64,
}

pub fn cusp_constant() -> Result<CuspConstant> {
    let g = consts::g();
    let alpha = Alpha::one();
    let x1 = MapId::Phi.apply(&Number::Exact(&ExactReal::one() - &g))?;
    let x1 = x1.as_exact().expect("exact").clone();
    let e1 = (eval_periodic(&x1, &alpha)?.precise_or_value() - eval_periodic(&g, &alpha)?.precise_or_value()).to_f64();
    let c_right = SIGMA * e1 * g.to_f64();
    Ok(CuspConstant { sigma: SIGMA, e1, c_right, c_left: SIGMA * e1 / 2.0 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TnIdentity {
    pub n: usize,
    /// `t_n = F_{2n+1} / F_{2n+2}`.
    pub t_n: BigRational,
    /// `t_n - g = g^{4n+3} (1+g^2) / (1 - g^{4n+4})` holds exactly.
    pub identity_holds: bool,
    /// `(1+g^2) / (1 - g^{4n+4})`.
    pub ratio: f64,
    /// `1 <= ratio <= G`.
    pub ratio_in_bounds: bool,
}

pub fn tn_identity(n: usize) -> Result<TnIdentity> {
    let g = consts::g();
    let one = ExactReal::one();
    let pow = |k: usize| (0..k).fold(ExactReal::one(), |acc, _| &acc * &g);
    let t = BigRational::new(fib(2 * n + 1), fib(2 * n + 2));
    let lhs = &ExactReal::Rational(t.clone()) - &g;
    let ratio = &(&one + &(&g * &g)) / &(&one - &pow(4 * n + 4));
    let rhs = &pow(4 * n + 3) * &ratio;
    Ok(TnIdentity {
        n,
        t_n: t,
        identity_holds: lhs == rhs,
        ratio: ratio.to_f64(),
        ratio_in_bounds: ratio >= one && ratio <= consts::big_g(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
    Both,
}

/// Where to sample for a cusp fit.
#[derive(Debug, Clone)]
pub enum CuspSampling {
    /// `map^n(x0)` for `n` in `from..=to`.
    Orbit { map: MapId, x0: Number, from: usize, to: usize },
    Points(Vec<Number>),
}

impl CuspSampling {
    fn points(&self) -> Result<Vec<Number>> {
        match self {
            CuspSampling::Orbit { map, x0, from, to } => {
                let orbit = map.orbit(x0, *to)?;
                Ok(orbit.into_iter().skip(*from).collect())
            }
            CuspSampling::Points(p) => Ok(p.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    /// `(log|x - m|, log(B(x) - B(m)))`.
    pub pairs: Vec<(f64, f64)>,
}

/// Log-log fit of `B(x) - B(m)` against `|x - m|`.
pub fn cusp_fit(alpha: &Alpha, min_point: &ExactReal, side: Side, sampling: &CuspSampling, evaluator: &Evaluator) -> Result<CuspFit> {
    let bm = evaluator.eval(&Number::Exact(min_point.clone()), alpha)?.precise_or_value();
    let pts: Vec<(Number, DoubleDouble)> = sampling
        .points()?
        .into_iter()
        .map(|p| {
            let d = diff_dd(&p, min_point);
            (p, d)
        })
        .filter(|(_, d)| {
            let v = d.to_f64();
            v != 0.0
                && match side {
                    Side::Left => v < 0.0,
                    Side::Right => v > 0.0,
                    Side::Both => true,
                }
        })
        .collect();
    let evals = pts.par_iter().map(|(p, _)| evaluator.eval(p, alpha)).collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::with_capacity(pts.len());
    for ((p, d), ev) in pts.iter().zip(&evals) {
        let excess = ev.precise_or_value() - bm;
        if excess.to_f64() <= 0.0 {
            return Err(Error::Data(format!("B({p}) <= B({min_point}) (excess {})", excess.to_f64())));
        }
        pairs.push((d.abs().ln_f64(), excess.ln_f64()));
    }
    let (slope, intercept, residual) =
        linear_fit(&pairs).ok_or_else(|| Error::Data("need at least two distinct sample distances".into()))?;
    Ok(CuspFit { slope, intercept, residual, pairs })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspBoundRow {
    pub x: f64,
    pub excess: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspBoundReport {
    pub constant: CuspConstant,
    pub rows: Vec<CuspBoundRow>,
    /// Points outside `(1/2, 1)` that were not checked.
    pub skipped: usize,
    pub all_hold: bool,
}

/// `B_1(x) - B_1(g) >= c sqrt|x - g|` with `c = sigma E_1/G` on `(g, 1)` and
/// `sigma E_1 / 2` on `(1/2, g)`, both less `1e-9`.
pub fn cusp_lower_bound_check(points: &[Number], evaluator: &Evaluator) -> Result<CuspBoundReport> {
    let constant = cusp_constant()?;
    let alpha = Alpha::one();
    let g = consts::g();
    let bg = eval_periodic(&g, &alpha)?.precise_or_value();
    let mut rows = Vec::new();
    let mut skipped = 0;
    for p in points {
        let xf = p.to_f64();
        let d = diff_dd(p, &g).to_f64();
        let c = if d > 0.0 && xf < 1.0 {
            constant.c_right
        } else if d < 0.0 && xf > 0.5 {
            constant.c_left
        } else {
            skipped += 1;
            continue;
        };
        let excess = (evaluator.eval(p, &alpha)?.precise_or_value() - bg).to_f64();
        let bound = (c - 1e-9) * d.abs().sqrt();
        rows.push(CuspBoundRow { x: xf, excess, bound, holds: excess >= bound });
    }
    let all_hold = rows.iter().all(|r| r.holds);
    Ok(CuspBoundReport { constant, rows, skipped, all_hold })
}
