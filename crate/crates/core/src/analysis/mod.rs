//! Numerical experiments built on the evaluators: minima scans, cusp scaling at
//! `g` and `gamma`, the comparison `B_alpha >= B_1`, digit surgery, the
//! semicontinuity probe at an irrational parameter and the minorants used for
//! `B_1` on `(0, 1/2)`.

mod comparison;
mod minima;
mod minorants;
mod noble;
mod scaling;
mod semicont;

pub use comparison::{compare_alpha_vs_gauss, ComparisonReport, ComparisonRow};
pub use minima::{scan_minima, GridSpec, LocalMin, MinimaReport};
pub use minorants::{aux_g, cbm_minorants, f_two_step, h_log_ratio, phi, phi0, phi1, MinorantSet};
pub use noble::{
    local_min_at_noble, mean_value_perturb, noble_check, noble_fixtures, Direction, LevelRow, NobleMinReport, NobleWitness,
    PerturbResult, RadiusSpec, MAX_SURGERY_INDEX,
};
pub use scaling::{
    cusp_constant, cusp_fit, cusp_lower_bound_check, e0_floor, fib, scaling_law_check, scaling_sequence, sigma_constant,
    tn_identity, CuspBoundReport, CuspBoundRow, CuspConstant, CuspFit, CuspSampling, LambdaRow, MapId, RecursionRow,
    ScalingReport, ScalingSequence, Side, SigmaResult, TnIdentity, SIGMA,
};
pub use semicont::{semicontinuity_probe, SemicontReport, SemicontRow};

use crate::dd::DoubleDouble;
use crate::exact::ExactReal;
use crate::hp;
use crate::number::Number;

/// `x - y` to double-double accuracy, across quadratic fields if needed.
pub(crate) fn diff_dd(x: &Number, y: &ExactReal) -> DoubleDouble {
    match x {
        Number::Exact(e) if e.field() == y.field() || e.is_rational() || y.is_rational() => (e - y).to_dd(),
        Number::Exact(e) => {
            let p = 256;
            hp::to_dd(&e.to_bigfloat(p).sub(&y.to_bigfloat(p), p, hp::RM))
        }
        Number::Approx(d) => *d - y.to_dd(),
    }
}

/// Least-squares line `y = slope * x + intercept`; returns `(slope, intercept, rms residual)`.
pub(crate) fn linear_fit(pairs: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = pairs.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pairs.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    Some((slope, intercept, (rss / nf).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_line() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 0.5 * i as f64 - 2.0)).collect();
        let (s, c, r) = linear_fit(&pts).unwrap();
        assert!((s - 0.5).abs() < 1e-14 && (c + 2.0).abs() < 1e-13 && r < 1e-13);
        assert!(linear_fit(&pts[..1]).is_none());
    }

    #[test]
    fn cross_field_difference() {
        let g = crate::exact::consts::g();
        let gm = crate::exact::consts::gamma();
        let d = diff_dd(&Number::Exact(g.clone()), &gm).to_f64();
        assert!((d - (0.618_033_988_749_894_9 - 0.414_213_562_373_095_1)).abs() < 1e-15);
        assert_eq!(diff_dd(&Number::Exact(g.clone()), &g).to_f64(), 0.0);
    }
}
