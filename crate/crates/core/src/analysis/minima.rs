use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linear_fit;
use crate::brjuno::Evaluator;
use crate::error::{Error, Result};
use crate::number::{Alpha, Number};

/// Candidates kept for refinement, lowest values first.
const MAX_CANDIDATES: usize = 64;
const REFINE_POINTS: usize = 10;
const MIN_POINTS: usize = 1000;

/// Jittered uniform grid `x_i = lo + (i + offset) h`, `h = (hi - lo)/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
    /// Fraction of a step; irrational so that no sample is a dyadic with small denominator.
    pub offset: f64,
}

impl GridSpec {
    /// Offset `g/2`.
    pub fn golden(lo: f64, hi: f64, n_points: usize) -> Self {
        GridSpec { lo, hi, n_points, offset: 0.309_016_994_374_947_45 }
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / self.n_points as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + (i as f64 + self.offset) * self.step()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMin {
    pub location: f64,
    pub value: f64,
    /// Lowest point of the refinement pass.
    pub refined_location: f64,
    pub refined_value: f64,
    /// The refinement reproduced a dip below both coarse neighbours.
    pub confirmed: bool,
    pub cusp_slope_estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaReport {
    pub alpha: f64,
    pub grid: GridSpec,
    pub argmin: f64,
    pub min_value: f64,
    /// Samples with infinite value (orbit hit 0).
    pub infinite: usize,
    /// Confirmed local minima among the lowest candidates, by location.
    pub local_minima: Vec<LocalMin>,
}

fn eval_at(x: f64, alpha: &Alpha, evaluator: &Evaluator) -> Result<f64> {
    Ok(evaluator.eval(&Number::from(x), alpha)?.value)
}

/// Grid scan of `B_alpha` on `[lo, hi]`.
pub fn scan_minima(alpha: &Alpha, grid: &GridSpec, evaluator: &Evaluator) -> Result<MinimaReport> {
    if matches!(evaluator, Evaluator::PeriodicExact { .. }) {
        return Err(Error::Precondition("a grid scan needs an evaluator that accepts float points".into()));
    }
    if !(grid.lo < grid.hi) || grid.lo < 0.0 || grid.hi > 1.0 {
        return Err(Error::Domain(format!("bad interval [{}, {}]", grid.lo, grid.hi)));
    }
    if grid.n_points < MIN_POINTS {
        return Err(Error::Domain(format!("need at least {MIN_POINTS} grid points")));
    }
    let values = (0..grid.n_points)
        .into_par_iter()
        .map(|i| eval_at(grid.point(i), alpha, evaluator))
        .collect::<Result<Vec<f64>>>()?;
    let infinite = values.iter().filter(|v| v.is_infinite()).count();
    let (imin, &min_value) = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::Data("no finite sample".into()))?;

    let mut candidates: Vec<usize> =
        (1..values.len() - 1).filter(|&i| values[i] < values[i - 1] && values[i] < values[i + 1]).collect();
    candidates.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    candidates.truncate(MAX_CANDIDATES);

    let h = grid.step();
    let mut local_minima = candidates
        .par_iter()
        .map(|&i| refine(i, &values, grid, h, alpha, evaluator))
        .collect::<Result<Vec<_>>>()?;
    local_minima.retain(|m| m.confirmed);
    local_minima.sort_by(|a, b| a.location.total_cmp(&b.location));

    Ok(MinimaReport { alpha: alpha.to_f64(), grid: *grid, argmin: grid.point(imin), min_value, infinite, local_minima })
}

/// Ten samples across the cell of `x_i` at a tenth of the grid step.
fn refine(i: usize, values: &[f64], grid: &GridSpec, h: f64, alpha: &Alpha, evaluator: &Evaluator) -> Result<LocalMin> {
    let x = grid.point(i);
    let fine = h / REFINE_POINTS as f64;
    let mut pts = Vec::with_capacity(REFINE_POINTS + 1);
    for j in 0..REFINE_POINTS {
        let y = x - h / 2.0 + (j as f64 + grid.offset) * fine;
        pts.push((y, eval_at(y, alpha, evaluator)?));
    }
    let (ry, rv) = pts.iter().copied().filter(|p| p.1.is_finite()).min_by(|a, b| a.1.total_cmp(&b.1)).unwrap_or((x, f64::INFINITY));
    let confirmed = rv < values[i - 1].min(values[i + 1]);
    pts.push((x, values[i]));
    let (my, mv) = pts.iter().copied().filter(|p| p.1.is_finite()).min_by(|a, b| a.1.total_cmp(&b.1)).unwrap_or((x, values[i]));
    let pairs: Vec<(f64, f64)> =
        pts.iter().filter(|p| p.1.is_finite() && p.1 > mv && p.0 != my).map(|p| ((p.0 - my).abs().ln(), (p.1 - mv).ln())).collect();
    let cusp_slope_estimate = if pairs.len() >= 3 { linear_fit(&pairs).map(|f| f.0) } else { None };
    Ok(LocalMin { location: x, value: values[i], refined_location: ry, refined_value: rv, confirmed, cusp_slope_estimate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_avoid_dyadics() {
        let g = GridSpec::golden(0.0, 1.0, 1000);
        assert!((g.step() - 1e-3).abs() < 1e-18);
        assert!((g.point(0) - 0.309_016_994_374_947_45e-3).abs() < 1e-18);
        assert!(g.point(999) < 1.0);
    }

    #[test]
    fn coarse_scan_finds_golden_region() {
        let r = scan_minima(&Alpha::one(), &GridSpec::golden(0.0, 1.0, 2000), &Evaluator::float(1e-6)).unwrap();
        assert!((r.argmin - 0.618_034).abs() < 1e-3, "argmin {}", r.argmin);
        assert!(r.min_value >= 1.259_828_913_794_410_2 - 1e-3);
        assert!(r.local_minima.len() <= MAX_CANDIDATES);
    }

    #[test]
    fn periodic_evaluator_refused() {
        let e = scan_minima(&Alpha::one(), &GridSpec::golden(0.0, 1.0, 1000), &Evaluator::periodic());
        assert!(matches!(e, Err(Error::Precondition(_))));
    }
}
