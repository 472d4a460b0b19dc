use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{diff_dd, linear_fit, MapId};
use crate::brjuno::{eval_periodic, Evaluator, PERIODIC_BUDGET};
use crate::cf::{big_dd, block_matrix, expand, string_action, Digit, ExpansionStatus};
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::exact::{consts, ExactReal};
use crate::number::{Alpha, Number};

/// Deepest regular-continued-fraction index tried by the digit surgery.
pub const MAX_SURGERY_INDEX: usize = 400;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NobleWitness {
    pub is_noble: bool,
    /// Integer part of the regular expansion.
    pub a0: BigInt,
    /// `S` with `x = a0 + S.g` when noble.
    pub block: Vec<Digit>,
}

/// Decides whether the regular expansion of `x` ends in `1, 1, 1, ...`.
pub fn noble_check(x: &Number) -> Result<NobleWitness> {
    let e = match x {
        Number::Exact(e) => e,
        Number::Approx(_) => return Err(Error::Precondition("nobility is decided on exact inputs only".into())),
    };
    let not = |a0: BigInt| NobleWitness { is_noble: false, a0, block: Vec::new() };
    if e.is_rational() || e.field() != consts::g().field() {
        return Ok(not(e.floor()));
    }
    let exp = expand(x, &Alpha::one(), PERIODIC_BUDGET)?;
    match exp.status {
        ExpansionStatus::Periodic { preperiod, period } => {
            let tail_ones = exp.digits[preperiod..preperiod + period].iter().all(|d| *d == Digit::plus(1));
            if tail_ones {
                Ok(NobleWitness { is_noble: true, a0: exp.a0.clone(), block: exp.digits[..preperiod].to_vec() })
            } else {
                Ok(not(exp.a0.clone()))
            }
        }
        _ => Err(Error::NotPeriodic),
    }
}

/// Ten noble points `S.g` with `|S| <= 4`.
pub fn noble_fixtures() -> Vec<ExactReal> {
    let blocks: [&[u64]; 10] = [&[], &[2], &[3], &[4], &[2, 2], &[2, 3], &[3, 2], &[2, 2, 2], &[3, 1, 2], &[2, 1, 3, 2]];
    let g = Number::Exact(consts::g());
    blocks
        .iter()
        .map(|b| {
            let s: Vec<Digit> = b.iter().map(|&a| Digit::plus(a)).collect();
            match string_action(&s, &g).expect("admissible block") {
                Number::Exact(e) => e,
                Number::Approx(_) => unreachable!("exact input"),
            }
        })
        .collect()
}

/// Geometric radii from `start` down to `stop`, in units of the cylinder scale
/// `|d(S.y)/dy|` at `y = g` when `scale_by_cylinder` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusSpec {
    pub start: f64,
    pub stop: f64,
    pub levels: usize,
    pub per_side: usize,
    pub scale_by_cylinder: bool,
}

impl Default for RadiusSpec {
    fn default() -> Self {
        RadiusSpec { start: 1e-5, stop: 1e-11, levels: 7, per_side: 4, scale_by_cylinder: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub radius: f64,
    pub samples: usize,
    /// Smallest `B_1(x) - B_1(nu)` at this radius.
    pub min_excess: f64,
    pub all_above: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NobleMinReport {
    pub nu: f64,
    pub block: Vec<Digit>,
    pub b_nu: f64,
    pub levels: Vec<LevelRow>,
    pub confirmed: bool,
    /// First sample with `B_1(x) <= B_1(nu)`.
    pub witness: Option<f64>,
    /// Log-log slope along `S.Phi^n(g^2)`.
    pub slope: f64,
    pub slope_residual: f64,
}

/// Orbit indices used for the slope along `S.Phi^n(g^2)`.
const SLOPE_RANGE: std::ops::RangeInclusive<usize> = 8..=22;

/// Samples `B_1` on shrinking two-sided neighbourhoods of a noble point.
///
/// Sample values are truncated sums, hence lower bounds, so `B_1(x) > B_1(nu)`
/// is established whenever the reported excess is positive.
pub fn local_min_at_noble(nu: &ExactReal, radius: &RadiusSpec, evaluator: &Evaluator) -> Result<NobleMinReport> {
    let witness = noble_check(&Number::Exact(nu.clone()))?;
    if !witness.is_noble {
        return Err(Error::Precondition(format!("{nu} is not noble")));
    }
    if matches!(evaluator, Evaluator::PeriodicExact { .. }) {
        return Err(Error::Precondition("neighbourhood samples need an evaluator that accepts float points".into()));
    }
    if !(radius.start >= radius.stop && radius.stop > 0.0) || radius.levels == 0 || radius.per_side == 0 {
        return Err(Error::Domain("bad radius specification".into()));
    }
    let alpha = Alpha::one();
    let b_nu = eval_periodic(nu, &alpha)?.precise_or_value();
    let m = block_matrix(&witness.block);
    let scale = if radius.scale_by_cylinder {
        let q = big_dd(&m.m21) * consts::g().to_dd() + big_dd(&m.m22);
        (q * q).recip().to_f64()
    } else {
        1.0
    };
    let nu_dd = nu.to_dd();
    let g = consts::g().to_f64();
    let ratio = if radius.levels > 1 { (radius.stop / radius.start).powf(1.0 / (radius.levels - 1) as f64) } else { 1.0 };
    let mut levels = Vec::with_capacity(radius.levels);
    let mut first_bad = None;
    for l in 0..radius.levels {
        let r = radius.start * ratio.powi(l as i32) * scale;
        let xs: Vec<DoubleDouble> = (0..radius.per_side)
            .flat_map(|j| {
                let jit = 1.0 + 0.5 * ((j + 1) as f64 * g).fract();
                [nu_dd.add_f64(-r * jit), nu_dd.add_f64(r * jit)]
            })
            .collect();
        let excess = xs
            .par_iter()
            .map(|&x| Ok((x, (evaluator.eval(&Number::Approx(x), &alpha)?.precise_or_value() - b_nu).to_f64())))
            .collect::<Result<Vec<_>>>()?;
        let min_excess = excess.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
        if first_bad.is_none() {
            first_bad = excess.iter().find(|e| !(e.1 > 0.0)).map(|e| e.0.to_f64());
        }
        levels.push(LevelRow { radius: r, samples: excess.len(), min_excess, all_above: min_excess > 0.0 });
    }

    let gsq = {
        let g = consts::g();
        &g * &g
    };
    let orbit_pts: Vec<Number> = {
        let mut y = Number::Exact(gsq);
        let mut pts = Vec::new();
        for n in 0..=*SLOPE_RANGE.end() {
            if SLOPE_RANGE.contains(&n) {
                let s = string_action(&witness.block, &y)?;
                let shifted = match s {
                    Number::Exact(e) => Number::Exact(&e + &ExactReal::int(witness.a0.clone())),
                    other => other,
                };
                pts.push(shifted);
            }
            y = MapId::Phi.apply(&y)?;
        }
        pts
    };
    let pairs = orbit_pts
        .par_iter()
        .map(|p| {
            let e = eval_periodic(p.as_exact().expect("exact"), &alpha)?.precise_or_value() - b_nu;
            Ok((diff_dd(p, nu).abs().ln_f64(), e))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = pairs.iter().position(|p| !(p.1.to_f64() > 0.0)) {
        first_bad.get_or_insert(orbit_pts[bad].to_f64());
    }
    let pairs: Vec<(f64, f64)> = pairs.into_iter().filter(|p| p.1.to_f64() > 0.0).map(|p| (p.0, p.1.ln_f64())).collect();
    let (slope, _, slope_residual) = linear_fit(&pairs).ok_or_else(|| Error::Data("degenerate slope fit".into()))?;

    Ok(NobleMinReport {
        nu: nu.to_f64(),
        block: witness.block,
        b_nu: b_nu.to_f64(),
        confirmed: first_bad.is_none(),
        witness: first_bad,
        levels,
        slope,
        slope_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbResult {
    pub xi: f64,
    /// The noble-tailed point `[a_0; a_1, ..., a_k + 1, 1, 1, ...]`.
    pub xi_pm: ExactReal,
    pub xi_pm_f64: f64,
    /// 1-based position `k` of the incremented regular digit.
    pub index: usize,
    pub delta_x: f64,
    pub delta_b: f64,
    pub b_xi: f64,
    pub b_xi_pm: f64,
    pub success: bool,
}

/// Digit surgery: a noble point on the requested side of `xi` within `epsilon`
/// whose `B_alpha` value is also within `epsilon`.
///
/// Incrementing the regular digit at an odd position moves the point left, at
/// an even position right. When no index up to [`MAX_SURGERY_INDEX`] meets both
/// bounds the closest attempt is returned with `success = false`.
pub fn mean_value_perturb(xi: &ExactReal, epsilon: f64, direction: Direction, alpha: &Alpha) -> Result<PerturbResult> {
    if alpha.as_rational().is_none() {
        return Err(Error::Precondition("digit surgery needs a rational alpha".into()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Domain("epsilon must be positive".into()));
    }
    let eps_exact =
        ExactReal::from_f64_exact(epsilon).ok_or_else(|| Error::Domain(format!("epsilon {epsilon} is not finite")))?;
    let b_xi = eval_periodic(xi, alpha)?.precise_or_value();
    let rcf = expand(&Number::Exact(xi.clone()), &Alpha::one(), PERIODIC_BUDGET)?;
    if !rcf.is_periodic() {
        return Err(Error::NotPeriodic);
    }
    let a0 = ExactReal::int(rcf.a0.clone());
    let g = Number::Exact(consts::g());
    let first = match direction {
        Direction::Minus => 1,
        Direction::Plus => 2,
    };
    let mut best: Option<(f64, PerturbResult)> = None;
    for k in (first..=MAX_SURGERY_INDEX).step_by(2) {
        let mut block = rcf.block(k)?;
        block[k - 1] = Digit::plus(block[k - 1].a + 1);
        let y = match string_action(&block, &g)? {
            Number::Exact(e) => &e + &a0,
            Number::Approx(_) => unreachable!("exact input"),
        };
        let dx = diff_dd(&Number::Exact(y.clone()), xi);
        let right_side = match direction {
            Direction::Plus => &y > xi,
            Direction::Minus => &y < xi,
        };
        if !right_side {
            return Err(Error::Consistency(format!("surgery at index {k} moved to the wrong side")));
        }
        let within = match direction {
            Direction::Plus => &y < &(xi + &eps_exact),
            Direction::Minus => &y > &(xi - &eps_exact),
        };
        if !within {
            continue;
        }
        let b_y = eval_periodic(&y, alpha)?.precise_or_value();
        let db = (b_y - b_xi).to_f64();
        let result = PerturbResult {
            xi: xi.to_f64(),
            xi_pm_f64: y.to_f64(),
            xi_pm: y,
            index: k,
            delta_x: dx.to_f64(),
            delta_b: db,
            b_xi: b_xi.to_f64(),
            b_xi_pm: b_y.to_f64(),
            success: db.abs() < epsilon,
        };
        if result.success {
            return Ok(result);
        }
        let score = db.abs();
        if best.as_ref().map_or(true, |b| score < b.0) {
            best = Some((score, result));
        }
    }
    best.map(|b| b.1).ok_or_else(|| Error::Data(format!("no surgery index up to {MAX_SURGERY_INDEX} lands within {epsilon}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::surd_normalize;

    #[test]
    fn noble_examples() {
        let g = consts::g();
        let w = noble_check(&Number::Exact(g.clone())).unwrap();
        assert!(w.is_noble && w.block.is_empty());
        let w = noble_check(&Number::Exact(&g * &g)).unwrap();
        assert!(w.is_noble);
        assert_eq!(w.block, vec![Digit::plus(2)]);
        assert!(!noble_check(&Number::Exact(consts::gamma())).unwrap().is_noble);
        assert!(!noble_check(&Number::Exact(ExactReal::ratio(1, 3).unwrap())).unwrap().is_noble);
    }

    #[test]
    fn fixtures_are_noble() {
        for nu in noble_fixtures() {
            let w = noble_check(&Number::Exact(nu.clone())).unwrap();
            assert!(w.is_noble && w.block.len() <= 4, "{nu}");
        }
    }

    #[test]
    fn silver_refused() {
        let e = local_min_at_noble(&consts::gamma(), &RadiusSpec::default(), &Evaluator::float(1e-13));
        assert!(matches!(e, Err(Error::Precondition(_))));
    }

    #[test]
    fn surgery_examples() {
        let gm = consts::gamma();
        let r = mean_value_perturb(&gm, 1e-2, Direction::Plus, &Alpha::one()).unwrap();
        assert!(r.success && r.delta_x > 0.0 && r.delta_x < 1e-2 && r.delta_b.abs() < 1e-2);
        let g = consts::g();
        let r = mean_value_perturb(&g, 1e-3, Direction::Minus, &Alpha::one()).unwrap();
        assert!(r.success && r.delta_x < 0.0 && r.delta_x > -1e-3 && r.delta_b.abs() < 1e-3);
        let r = mean_value_perturb(&g, 1.0, Direction::Plus, &Alpha::one()).unwrap();
        assert!(r.success && r.index == 2);
    }

    #[test]
    fn surgery_needs_rational_alpha() {
        let a = Alpha::new(consts::alpha_hat(2)).unwrap();
        let x = surd_normalize(-1, 1, 1, 3).unwrap();
        assert!(matches!(mean_value_perturb(&x, 0.1, Direction::Plus, &a), Err(Error::Precondition(_))));
    }

    #[test]
    fn first_odd_index_moves_left() {
        // [0; 2, 1, 1, ...] < g
        let r = mean_value_perturb(&consts::g(), 1.0, Direction::Minus, &Alpha::one()).unwrap();
        assert_eq!(r.index, 1);
        let g = consts::g();
        assert_eq!(r.xi_pm, &g * &g);
    }
}
