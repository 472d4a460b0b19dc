use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brjuno::{eval_periodic, Evaluator};
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::exact::consts;
use crate::number::{Alpha, Number};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemicontRow {
    pub epsilon: f64,
    pub x_left: f64,
    pub x_right: f64,
    pub b_left: f64,
    pub b_right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemicontReport {
    pub a: u32,
    pub alpha_hat: f64,
    pub rows: Vec<SemicontRow>,
    /// `B(alpha_hat)`.
    pub b_alpha_hat: f64,
    /// `log(a+1+g) + B(g)/(a+1+g)`.
    pub closed_form: f64,
    pub closed_form_residual: f64,
    /// Minimum of `B` over the smaller half of the epsilons, from each side.
    pub left_estimate: f64,
    pub right_estimate: f64,
    /// `left_estimate - right_estimate`.
    pub gap: f64,
    /// `(alpha_hat - 1) log(a + g)`.
    pub expected_gap: f64,
}

/// Left and right limits of `B_alpha_hat` at `alpha_hat = (a+g)/(a+1+g)` along
/// `x(eps) = 1/(1 + 1/(a + g -/+ eps))`.
pub fn semicontinuity_probe(a: u32, eps_list: &[f64], evaluator: &Evaluator) -> Result<SemicontReport> {
    if a < 2 {
        return Err(Error::Domain("a must be at least 2".into()));
    }
    if eps_list.is_empty() || eps_list.iter().any(|&e| !(e > 0.0 && e < 0.5)) {
        return Err(Error::Domain("epsilons must lie in (0, 1/2)".into()));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain("epsilons must be strictly decreasing".into()));
    }
    if matches!(evaluator, Evaluator::PeriodicExact { .. }) {
        return Err(Error::Precondition("probe points are floats; use a truncated or auto evaluator".into()));
    }
    let ah = consts::alpha_hat(i64::from(a));
    let alpha = Alpha::new(ah.clone())?;
    let g = consts::g();
    let b_ah = eval_periodic(&ah, &alpha)?.precise_or_value();
    let b_g = eval_periodic(&g, &alpha)?.precise_or_value();
    let af = f64::from(a);
    let shift = DoubleDouble::from_f64(af + 1.0) + g.to_dd();
    let closed = DoubleDouble::from_f64(shift.ln_f64()) + b_g / shift;
    let base = DoubleDouble::from_f64(af) + g.to_dd();
    let point = |y: DoubleDouble| (DoubleDouble::ONE + y.recip()).recip();

    let rows = eps_list
        .par_iter()
        .map(|&eps| {
            let xl = point(base.add_f64(-eps));
            let xr = point(base.add_f64(eps));
            let bl = evaluator.eval(&Number::Approx(xl), &alpha)?.value;
            let br = evaluator.eval(&Number::Approx(xr), &alpha)?.value;
            Ok(SemicontRow { epsilon: eps, x_left: xl.to_f64(), x_right: xr.to_f64(), b_left: bl, b_right: br })
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = &rows[rows.len() / 2..];
    let left_estimate = tail.iter().map(|r| r.b_left).fold(f64::INFINITY, f64::min);
    let right_estimate = tail.iter().map(|r| r.b_right).fold(f64::INFINITY, f64::min);
    let ahf = ah.to_f64();
    Ok(SemicontReport {
        a,
        alpha_hat: ahf,
        rows,
        b_alpha_hat: b_ah.to_f64(),
        closed_form: closed.to_f64(),
        closed_form_residual: (b_ah - closed).abs().to_f64(),
        left_estimate,
        right_estimate,
        gap: left_estimate - right_estimate,
        expected_gap: (ahf - 1.0) * base.ln_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn item_one_closed_form() {
        let eps: Vec<f64> = (2..=8).map(|k| 10f64.powi(-k)).collect();
        let r = semicontinuity_probe(2, &eps, &Evaluator::float(1e-12)).unwrap();
        assert!((r.alpha_hat - 0.723_606_797_749_979).abs() < 1e-14);
        assert!(r.closed_form_residual < 1e-8);
        assert!((r.expected_gap + 0.266_007_354_577_601_4).abs() < 1e-12);
    }

    #[test]
    fn bad_inputs() {
        assert!(semicontinuity_probe(1, &[1e-3], &Evaluator::float(1e-10)).is_err());
        assert!(semicontinuity_probe(2, &[1e-4, 1e-3], &Evaluator::float(1e-10)).is_err());
    }
}
