use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "brjuno", version, about = "Alpha-continued fractions and alpha-Brjuno functions")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Config {
    /// Parameter alpha in [1/2, 1]: "p/q", "(a+b*sqrt(d))/c", a name or a decimal.
    #[arg(long, global = true, default_value = "1")]
    pub alpha: String,
    /// Target accuracy of truncated sums.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Bits used for closed-form logarithms.
    #[arg(long, global = true, env = "BRJUNO_PRECISION_BITS", default_value_t = 128)]
    pub precision_bits: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for scans (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub output: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapArg {
    Phi,
    Psi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    #[value(name = "B1-graph")]
    B1Graph,
    #[value(name = "semicont-alphahat")]
    SemicontAlphahat,
    #[value(name = "scaling-loglog")]
    ScalingLoglog,
    #[value(name = "B-half-graph")]
    BHalfGraph,
    #[value(name = "B-3-5-graph")]
    B35Graph,
    #[value(name = "B-2-3-graph")]
    B23Graph,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Digits, convergents and convergent checks of a point.
    Expand {
        x: String,
        #[arg(short = 'n', default_value_t = 10)]
        n: usize,
    },
    /// B_alpha at a point.
    Eval { x: String },
    /// Grid scan for minima of B_alpha on [lo, hi].
    Scan {
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        /// Defaults to alpha.
        #[arg(long)]
        hi: Option<f64>,
        #[arg(short = 'n', default_value_t = 100_000)]
        n: usize,
    },
    /// Log-log fit of B(x) - B(m) along an orbit converging to the minimum m.
    Cusp {
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
        /// Orbit map; by default Phi (minimum g) for alpha >= g, Psi (minimum gamma) otherwise.
        #[arg(long, value_enum)]
        map: Option<MapArg>,
        #[arg(long, default_value_t = 3)]
        from: usize,
        #[arg(long, default_value_t = 15)]
        to: usize,
    },
    /// B_alpha - B_1 on random samples of (0, alpha); alpha must exceed g.
    Compare {
        #[arg(short = 'n', default_value_t = 1000)]
        n: usize,
    },
    /// Noble point near xi with B within epsilon.
    Perturb {
        xi: String,
        #[arg(long, default_value_t = 1e-2)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = DirectionArg::Plus)]
        direction: DirectionArg,
    },
    /// One-sided limits of B at alphahat(a) = (a+g)/(a+1+g).
    Semicont {
        #[arg(short = 'a', default_value_t = 2)]
        a: u32,
        /// Number of epsilons, log-spaced from 1e-2 down to 1e-8.
        #[arg(long, default_value_t = 7)]
        steps: usize,
    },
    /// Data behind one figure.
    Figure {
        #[arg(value_enum)]
        id: FigureId,
        /// Grid points, orbit length or number of epsilons, depending on the figure.
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        lo: Option<f64>,
        #[arg(long)]
        hi: Option<f64>,
        /// The integer a of alphahat(a) for semicont-alphahat.
        #[arg(short = 'a', default_value_t = 2)]
        a: u32,
    },
}
