use brjuno_core::analysis::{
    compare_alpha_vs_gauss, cusp_fit, mean_value_perturb, scan_minima, semicontinuity_probe, CuspSampling, Direction, GridSpec,
    MapId, Side,
};
use brjuno_core::brjuno::{Evaluator, Method, PERIODIC_BUDGET};
use brjuno_core::cf::{convergents, expand, prop21_check};
use brjuno_core::{consts, parse_alpha, parse_number, Alpha, ExactReal, ExpansionStatus, Number};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cli::{Command, Config, DirectionArg, FigureId, MapArg, SideArg};
use crate::error::CliError;
use crate::output::{Cell, Report};

/// Validated run parameters.
pub struct Context {
    pub alpha_text: String,
    pub alpha: Alpha,
    pub tol: f64,
    pub precision_bits: usize,
    pub seed: u64,
}

impl Context {
    pub fn new(c: &Config) -> Result<Self, CliError> {
        if c.precision_bits < 53 {
            return Err(CliError::Usage(format!("--precision-bits must be at least 53, got {}", c.precision_bits)));
        }
        if !(c.tol > 0.0 && c.tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {}", c.tol)));
        }
        if c.threads == Some(0) {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        Ok(Context { alpha_text: c.alpha.clone(), alpha: parse_alpha(&c.alpha)?, tol: c.tol, precision_bits: c.precision_bits, seed: c.seed })
    }

    fn auto(&self) -> Evaluator {
        Evaluator::Auto { tol: self.tol, precision_bits: self.precision_bits }
    }

    fn report(&self, command: &'static str, headers: Vec<&'static str>) -> Report {
        Report::new(command, self.alpha_text.clone(), self.alpha.to_f64(), headers)
    }
}

pub fn run(cmd: &Command, ctx: &Context) -> Result<Report, CliError> {
    match cmd {
        Command::Expand { x, n } => cmd_expand(ctx, x, *n),
        Command::Eval { x } => cmd_eval(ctx, x),
        Command::Scan { lo, hi, n } => cmd_scan(ctx, *lo, hi.unwrap_or(ctx.alpha.to_f64()), *n),
        Command::Cusp { side, map, from, to } => cmd_cusp(ctx, *side, *map, *from, *to),
        Command::Compare { n } => cmd_compare(ctx, *n),
        Command::Perturb { xi, epsilon, direction } => cmd_perturb(ctx, xi, *epsilon, *direction),
        Command::Semicont { a, steps } => cmd_semicont(ctx, *a, *steps),
        Command::Figure { id, resolution, lo, hi, a } => cmd_figure(ctx, *id, *resolution, *lo, *hi, *a),
    }
}

fn int_cell(n: &num_bigint::BigInt) -> Cell {
    n.to_i128().map_or_else(|| Cell::Text(n.to_string()), Cell::Int)
}

fn status_text(s: &ExpansionStatus) -> String {
    match s {
        ExpansionStatus::Terminated(r) => format!("terminated at {r}"),
        ExpansionStatus::Periodic { preperiod, period } => format!("periodic (preperiod {preperiod}, period {period})"),
        ExpansionStatus::TruncatedAt(k) => format!("truncated at {k} digits"),
    }
}

fn cmd_expand(ctx: &Context, xs: &str, n: usize) -> Result<Report, CliError> {
    let x = parse_number(xs)?;
    let budget = match &x {
        Number::Exact(e) if !e.is_rational() => PERIODIC_BUDGET.max(n + 1),
        _ => n + 1,
    };
    let e = expand(&x, &ctx.alpha, budget)?;
    let upto = e.available().map_or(n, |av| n.min(av));
    let tr = convergents(&e, upto)?;
    let mut r = ctx.report("expand", vec!["n", "a", "eps", "p", "q", "beta", "x_n"]);
    r.fact("x", x.to_string());
    r.fact("status", status_text(&e.status));
    r.fact("a0", int_cell(&e.a0));
    r.fact("eps0", e.eps0.to_string());
    if e.is_periodic() {
        let ExpansionStatus::Periodic { preperiod, period } = e.status else { unreachable!() };
        let block: Vec<String> = e.digits[preperiod..preperiod + period].iter().map(ToString::to_string).collect();
        r.fact("period", block.join(""));
    }
    for t in tr.iter().skip(2) {
        let k = t.n as usize;
        let (a, eps) = e.pair(k).expect("depth checked");
        r.row(vec![
            k.into(),
            int_cell(&a),
            eps.to_string().into(),
            int_cell(&t.p),
            int_cell(&t.q),
            t.beta.to_f64().into(),
            e.state(k).map(Number::to_f64).into(),
        ]);
    }
    let checks = prop21_check(&tr, &ctx.alpha, &x);
    for c in checks.clauses.iter().chain(std::iter::once(&checks.determinant_identity)) {
        r.fact("check", format!("{}: {}", c.name, c.witness.map_or("pass".to_string(), |w| format!("fails at n = {w}"))));
    }
    if !checks.all_passed() {
        r.check_failure = Some("a convergent check failed".into());
    }
    Ok(r)
}

fn method_text(m: Method) -> &'static str {
    match m {
        Method::PeriodicExact => "PeriodicExact",
        Method::TruncatedFloat => "TruncatedFloat",
    }
}

fn cmd_eval(ctx: &Context, xs: &str) -> Result<Report, CliError> {
    let x = parse_number(xs)?;
    let v = ctx.auto().eval(&x, &ctx.alpha)?;
    let mut r = ctx.report("eval", vec!["x", "value", "method", "depth", "tail_bound"]);
    r.row(vec![x.to_string().into(), v.value.into(), method_text(v.method).into(), v.depth.into(), v.tail_bound.into()]);
    Ok(r)
}

fn window(alpha: &Alpha, lo: f64, hi: f64) -> Result<(), CliError> {
    if !(lo >= 0.0 && lo < hi && hi <= alpha.to_f64()) {
        return Err(CliError::Usage(format!("window [{lo}, {hi}] must satisfy 0 <= lo < hi <= alpha = {}", alpha.to_f64())));
    }
    Ok(())
}

fn cmd_scan(ctx: &Context, lo: f64, hi: f64, n: usize) -> Result<Report, CliError> {
    window(&ctx.alpha, lo, hi)?;
    let grid = GridSpec::golden(lo, hi, n);
    let rep = scan_minima(&ctx.alpha, &grid, &ctx.auto())?;
    let mut r =
        ctx.report("scan", vec!["location", "value", "refined_location", "refined_value", "confirmed", "cusp_slope_estimate"]);
    r.fact("argmin", rep.argmin);
    r.fact("min_value", rep.min_value);
    r.fact("grid_step", grid.step());
    r.fact("infinite_samples", rep.infinite);
    for m in &rep.local_minima {
        r.row(vec![
            m.location.into(),
            m.value.into(),
            m.refined_location.into(),
            m.refined_value.into(),
            m.confirmed.into(),
            m.cusp_slope_estimate.into(),
        ]);
    }
    Ok(r)
}

fn default_map(alpha: &Alpha) -> MapId {
    if alpha.exact() >= &consts::g() {
        MapId::Phi
    } else {
        MapId::Psi
    }
}

/// Seed of the canonical orbit: `1 - g` for `Phi`, `gamma^2` for `Psi`.
fn canonical_seed(map: MapId) -> ExactReal {
    match map {
        MapId::Phi => &ExactReal::one() - &consts::g(),
        MapId::Psi => {
            let c = consts::gamma();
            &c * &c
        }
    }
}

fn cmd_cusp(ctx: &Context, side: SideArg, map: Option<MapArg>, from: usize, to: usize) -> Result<Report, CliError> {
    if from >= to {
        return Err(CliError::Usage("--from must be below --to".into()));
    }
    let map = match map {
        Some(MapArg::Phi) => MapId::Phi,
        Some(MapArg::Psi) => MapId::Psi,
        None => default_map(&ctx.alpha),
    };
    let side = match side {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
        SideArg::Both => Side::Both,
    };
    let m = map.fixpoint();
    let sampling = CuspSampling::Orbit { map, x0: Number::Exact(canonical_seed(map)), from, to };
    let fit = cusp_fit(&ctx.alpha, &m, side, &sampling, &ctx.auto())?;
    let mut r = ctx.report("cusp", vec!["log_distance", "log_excess"]);
    r.fact("map", format!("{map:?}"));
    r.fact("minimum", m.to_f64());
    r.fact("slope", fit.slope);
    r.fact("intercept", fit.intercept);
    r.fact("residual", fit.residual);
    for (a, b) in &fit.pairs {
        r.row(vec![(*a).into(), (*b).into()]);
    }
    Ok(r)
}

fn cmd_compare(ctx: &Context, n: usize) -> Result<Report, CliError> {
    if n == 0 {
        return Err(CliError::Usage("-n must be positive".into()));
    }
    let a = ctx.alpha.to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let samples: Vec<Number> = (0..n)
        .map(|_| loop {
            let x = rng.gen::<f64>() * a;
            if x > 0.0 {
                break Number::from(x);
            }
        })
        .collect();
    let rep = compare_alpha_vs_gauss(&ctx.alpha, &samples, &Evaluator::float(ctx.tol))?;
    let mut r = ctx.report("compare", vec!["x", "b_alpha", "b_one", "slack", "nk"]);
    r.fact("min_slack", rep.min_slack);
    r.fact("tolerance", rep.tolerance);
    r.fact("gap_1_count", rep.gap_counts[0]);
    r.fact("gap_2_count", rep.gap_counts[1]);
    r.fact("all_hold", rep.all_hold);
    for row in &rep.rows {
        let nk: Vec<String> = row.nk.iter().map(ToString::to_string).collect();
        r.row(vec![row.x.into(), row.b_alpha.into(), row.b_one.into(), row.slack.into(), nk.join(" ").into()]);
    }
    if !rep.all_hold {
        r.check_failure = Some(format!("B_alpha - B_1 reached {} below -{}", rep.min_slack, rep.tolerance));
    }
    Ok(r)
}

fn cmd_perturb(ctx: &Context, xs: &str, epsilon: f64, direction: DirectionArg) -> Result<Report, CliError> {
    let Number::Exact(xi) = parse_number(xs)? else {
        return Err(CliError::Usage("perturb needs an exact point (a surd literal or a name)".into()));
    };
    let dir = match direction {
        DirectionArg::Plus => Direction::Plus,
        DirectionArg::Minus => Direction::Minus,
    };
    let p = mean_value_perturb(&xi, epsilon, dir, &ctx.alpha)?;
    let mut r = ctx.report(
        "perturb",
        vec!["xi", "xi_pm", "xi_pm_value", "index", "delta_x", "delta_b", "b_xi", "b_xi_pm", "success"],
    );
    r.row(vec![
        xi.to_string().into(),
        p.xi_pm.to_string().into(),
        p.xi_pm_f64.into(),
        p.index.into(),
        p.delta_x.into(),
        p.delta_b.into(),
        p.b_xi.into(),
        p.b_xi_pm.into(),
        p.success.into(),
    ]);
    if !p.success {
        r.check_failure = Some(format!("no noble point within {epsilon} with |dB| < {epsilon}"));
    }
    Ok(r)
}

fn log_spaced_eps(steps: usize) -> Result<Vec<f64>, CliError> {
    if steps < 2 {
        return Err(CliError::Usage("need at least two epsilons".into()));
    }
    Ok((0..steps).map(|i| 10f64.powf(-2.0 - 6.0 * i as f64 / (steps - 1) as f64)).collect())
}

fn cmd_semicont(ctx: &Context, a: u32, steps: usize) -> Result<Report, CliError> {
    let eps = log_spaced_eps(steps)?;
    let rep = semicontinuity_probe(a, &eps, &Evaluator::float(ctx.tol))?;
    let mut r = Report::new("semicont", format!("alphahat({a})"), rep.alpha_hat, vec!["epsilon", "x_left", "x_right", "b_left", "b_right"]);
    r.fact("b_alpha_hat", rep.b_alpha_hat);
    r.fact("closed_form", rep.closed_form);
    r.fact("closed_form_residual", rep.closed_form_residual);
    r.fact("left_estimate", rep.left_estimate);
    r.fact("right_estimate", rep.right_estimate);
    r.fact("gap", rep.gap);
    r.fact("expected_gap", rep.expected_gap);
    for row in &rep.rows {
        r.row(vec![row.epsilon.into(), row.x_left.into(), row.x_right.into(), row.b_left.into(), row.b_right.into()]);
    }
    Ok(r)
}

fn cmd_figure(ctx: &Context, id: FigureId, resolution: Option<usize>, lo: Option<f64>, hi: Option<f64>, a: u32) -> Result<Report, CliError> {
    let graph = |name: &'static str, text: &str, alpha: Alpha| -> Result<Report, CliError> {
        let lo = lo.unwrap_or(0.0);
        let hi = hi.unwrap_or(alpha.to_f64());
        window(&alpha, lo, hi)?;
        let n = resolution.unwrap_or(10_000);
        if n < 2 {
            return Err(CliError::Usage("--resolution must be at least 2".into()));
        }
        let grid = GridSpec::golden(lo, hi, n);
        let ev = Evaluator::float(ctx.tol);
        let values = (0..n)
            .into_par_iter()
            .map(|i| {
                let x = grid.point(i);
                ev.eval(&Number::from(x), &alpha).map(|v| (x, v.value))
            })
            .collect::<brjuno_core::Result<Vec<_>>>()?;
        let mut r = Report::new(name, text.to_string(), alpha.to_f64(), vec!["x", "b"]);
        let best = values.iter().fold((f64::NAN, f64::INFINITY), |acc, &(x, v)| if v < acc.1 { (x, v) } else { acc });
        r.fact("argmin", best.0);
        r.fact("min_value", best.1);
        r.fact("grid_step", grid.step());
        for (x, v) in values {
            r.row(vec![x.into(), v.into()]);
        }
        Ok(r)
    };
    match id {
        FigureId::B1Graph => graph("figure B1-graph", "1", Alpha::one()),
        FigureId::BHalfGraph => graph("figure B-half-graph", "1/2", Alpha::half()),
        FigureId::B35Graph => graph("figure B-3-5-graph", "3/5", Alpha::ratio(3, 5)?),
        FigureId::B23Graph => graph("figure B-2-3-graph", "2/3", Alpha::ratio(2, 3)?),
        FigureId::ScalingLoglog => {
            let to = resolution.unwrap_or(25);
            if !(4..=200).contains(&to) {
                return Err(CliError::Usage("--resolution (orbit length) must lie in 4..=200".into()));
            }
            let alpha = Alpha::one();
            let g = consts::g();
            let from = 3;
            let seed = Number::Exact(canonical_seed(MapId::Phi));
            let sampling = CuspSampling::Orbit { map: MapId::Phi, x0: seed.clone(), from, to };
            let fit = cusp_fit(&alpha, &g, Side::Both, &sampling, &ctx.auto())?;
            let mut xs = Vec::with_capacity(to + 1);
            let mut x = seed;
            for _ in 0..=to {
                xs.push(x.to_f64());
                x = MapId::Phi.apply(&x)?;
            }
            let mut r = Report::new("figure scaling-loglog", "1".into(), 1.0, vec!["n", "x", "log_distance", "log_excess", "fit_slope"]);
            r.fact("slope", fit.slope);
            r.fact("intercept", fit.intercept);
            r.fact("residual", fit.residual);
            for (k, (ld, le)) in fit.pairs.iter().enumerate() {
                let n = from + k;
                r.row(vec![n.into(), xs[n].into(), (*ld).into(), (*le).into(), fit.slope.into()]);
            }
            Ok(r)
        }
        FigureId::SemicontAlphahat => {
            let eps = log_spaced_eps(resolution.unwrap_or(7))?;
            let rep = semicontinuity_probe(a, &eps, &Evaluator::float(ctx.tol))?;
            let mut r = Report::new(
                "figure semicont-alphahat",
                format!("alphahat({a})"),
                rep.alpha_hat,
                vec!["epsilon", "b_left", "b_right", "gap"],
            );
            r.fact("gap", rep.gap);
            r.fact("expected_gap", rep.expected_gap);
            for row in &rep.rows {
                r.row(vec![row.epsilon.into(), row.b_left.into(), row.b_right.into(), (row.b_left - row.b_right).into()]);
            }
            Ok(r)
        }
    }
}
