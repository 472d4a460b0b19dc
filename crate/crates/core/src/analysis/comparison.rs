use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brjuno::Evaluator;
use crate::cf::{expand, rcf_match};
use crate::error::{Error, Result};
use crate::exact::consts;
use crate::number::{Alpha, Number};

/// Largest number of alpha-convergents matched per sample.
const MATCH_DEPTH: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub x: f64,
    pub b_alpha: f64,
    pub b_one: f64,
    /// `B_alpha(x) - B_1(x)`.
    pub slack: f64,
    /// `n(k)` with `(p_k, q_k) = (P_{n(k)}, Q_{n(k)})`.
    pub nk: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub alpha: f64,
    pub tolerance: f64,
    pub rows: Vec<ComparisonRow>,
    pub min_slack: f64,
    /// Counts of index gaps 1 and 2 over all samples.
    pub gap_counts: [usize; 2],
    pub all_hold: bool,
}

/// `B_alpha(x) >= B_1(x)` on each sample, with the convergent subsequence map.
///
/// Slack is accepted down to `-max(evaluator tolerance, 1e-12)`.
pub fn compare_alpha_vs_gauss(alpha: &Alpha, samples: &[Number], evaluator: &Evaluator) -> Result<ComparisonReport> {
    if alpha.exact() <= &consts::g() {
        return Err(Error::Precondition("comparison requires alpha in (g, 1]".into()));
    }
    let one = Alpha::one();
    let rows = samples
        .par_iter()
        .map(|x| {
            let a = evaluator.eval(x, alpha)?;
            let b = evaluator.eval(x, &one)?;
            let slack = (a.precise_or_value() - b.precise_or_value()).to_f64();
            let nk = match_indices(x, alpha)?;
            Ok(ComparisonRow { x: x.to_f64(), b_alpha: a.value, b_one: b.value, slack, nk })
        })
        .collect::<Result<Vec<_>>>()?;
    let tolerance = evaluator.tolerance().max(1e-12);
    let min_slack = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    let mut gap_counts = [0usize; 2];
    for r in &rows {
        for w in r.nk.windows(2) {
            gap_counts[w[1] - w[0] - 1] += 1;
        }
    }
    Ok(ComparisonReport { alpha: alpha.to_f64(), tolerance, rows, min_slack, gap_counts, all_hold: min_slack >= -tolerance })
}

/// Runs `rcf_match` as deep as the available digits allow.
fn match_indices(x: &Number, alpha: &Alpha) -> Result<Vec<usize>> {
    let avail = expand(x, alpha, MATCH_DEPTH + 2)?.available().unwrap_or(usize::MAX);
    let mut k = MATCH_DEPTH.min(avail.saturating_sub(2));
    loop {
        match rcf_match(x, alpha, k) {
            Err(Error::Depth { .. }) if k > 1 => k -= 1,
            other => return other,
        }
    }
}
