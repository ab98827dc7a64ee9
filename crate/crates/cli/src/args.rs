use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dispersal_core::{Scalar, Topology, DEFAULT_M_MAX};

#[derive(Debug, Parser)]
#[command(
    name = "dispersal",
    version,
    about = "Mean extinction times under binomial catastrophes"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Exit with status 4 when the only answer is indeterminate.
    #[arg(long, global = true)]
    pub strict: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean extinction time of one model.
    Eval(EvalArgs),
    /// Certified comparison of the no-dispersion mean against a dispersion mean.
    Compare(CompareArgs),
    /// Phase map over a (lambda, p) grid.
    Scan(ScanArgs),
    /// Crossings in p at fixed lambda.
    Trace(TraceArgs),
    /// Monte Carlo estimate of the mean extinction time.
    Simulate(SimulateArgs),
}

/// `A`, `d<k>` or `star`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Model(pub Topology);

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "A" | "a" => Ok(Model(Topology::NoDispersion)),
            "star" | "*" => Ok(Model(Topology::FreeDispersion)),
            _ => {
                let d = s
                    .strip_prefix('d')
                    .and_then(|d| d.parse::<u32>().ok())
                    .filter(|&d| d >= 2)
                    .ok_or_else(|| {
                        format!("unknown model {s:?}, expected A, d<k> with k >= 2, or star")
                    })?;
                Ok(Model(Topology::TreeDispersion(d)))
            }
        }
    }
}

/// `2`, `3` or `star`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dispersion(pub Topology);

impl FromStr for Dispersion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "2" | "d2" => Ok(Dispersion(Topology::TreeDispersion(2))),
            "3" | "d3" => Ok(Dispersion(Topology::TreeDispersion(3))),
            "star" | "*" => Ok(Dispersion(Topology::FreeDispersion)),
            _ => Err(format!(
                "unsupported dispersion {s:?}, expected 2, 3 or star"
            )),
        }
    }
}

fn scalar(s: &str) -> Result<Scalar, String> {
    s.parse::<Scalar>().map_err(|e| e.to_string())
}

/// `start:end` or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub end: f64,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let value = |t: &str| scalar(t.trim()).map(|x| x.value());
        match s.split_once(':') {
            Some((a, b)) => Ok(Range {
                start: value(a)?,
                end: value(b)?,
            }),
            None => {
                let x = value(s)?;
                Ok(Range { start: x, end: x })
            }
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// A, d2, d3 or star.
    #[arg(long)]
    pub model: Model,
    /// Growth rate; fractions such as 1/5 are exact.
    #[arg(long, value_parser = scalar)]
    pub lambda: Scalar,
    /// Survival probability; fractions such as 15/17 are exact.
    #[arg(long, value_parser = scalar)]
    pub p: Scalar,
    /// Truncation index of the product (model A).
    #[arg(long = "M", alias = "m", default_value_t = DEFAULT_M_MAX)]
    pub m: u32,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// 2, 3 or star.
    #[arg(long)]
    pub d: Dispersion,
    #[arg(long, value_parser = scalar)]
    pub lambda: Scalar,
    #[arg(long, value_parser = scalar)]
    pub p: Scalar,
    /// Largest truncation index tried.
    #[arg(long = "M-max", alias = "m-max", default_value_t = DEFAULT_M_MAX)]
    pub m_max: u32,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// 2, 3 or star.
    #[arg(long)]
    pub d: Dispersion,
    /// Lambda range `start:end`.
    #[arg(long)]
    pub lambda: Range,
    /// p range `start:end`.
    #[arg(long)]
    pub p: Range,
    /// Grid points along each axis.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Overrides `--steps` along lambda.
    #[arg(long)]
    pub lambda_steps: Option<usize>,
    /// Overrides `--steps` along p.
    #[arg(long)]
    pub p_steps: Option<usize>,
    #[arg(long = "M-max", alias = "m-max", default_value_t = DEFAULT_M_MAX)]
    pub m_max: u32,
    /// Output file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// 2 or 3.
    #[arg(long)]
    pub d: Dispersion,
    #[arg(long, value_parser = scalar)]
    pub lambda: Scalar,
    /// Bisection tolerance on p.
    #[arg(long, default_value_t = 5e-3)]
    pub tol: f64,
    #[arg(long = "M-max", alias = "m-max", default_value_t = DEFAULT_M_MAX)]
    pub m_max: u32,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// A, d<k> or star.
    #[arg(long)]
    pub model: Model,
    #[arg(long, value_parser = scalar)]
    pub lambda: Scalar,
    #[arg(long, value_parser = scalar)]
    pub p: Scalar,
    #[arg(long, default_value_t = dispersal_core::sim::DEFAULT_REPLICATES)]
    pub replicates: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Runs alive past this time are censored.
    #[arg(long, default_value_t = dispersal_core::sim::DEFAULT_TIME_CAP)]
    pub time_cap: f64,
    /// Runs reaching this many colonies count as surviving.
    #[arg(long, default_value_t = dispersal_core::sim::DEFAULT_COLONY_CAP)]
    pub colony_cap: u64,
    /// Draw each dispersing colony's size from an age independent of its
    /// lifetime, the branching process the closed forms describe.
    #[arg(long)]
    pub independent_growth: bool,
    /// Per-replicate CSV: index, extinction time, max colonies, censored flag.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}
