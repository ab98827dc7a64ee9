use std::fs::File;
use std::io::{BufWriter, Write};

use dispersal_core::closed_forms::{free_excess, tree2_excess, tree3_excess};
use dispersal_core::model::threshold;
use dispersal_core::sim::{aggregate, Growth, SimConfig, SimError};
use dispersal_core::{
    classify, compare, trace_crossings_with, ComparatorError, ComparisonVerdict, Grid, ModelParams,
    Regime, Region, Scalar, Topology,
};

use crate::args::{Cli, Command, CompareArgs, EvalArgs, Format, ScanArgs, SimulateArgs, TraceArgs};
use crate::error::CliError;
use crate::output::*;
use crate::parallel;

/// Runs one parsed command line. Rows go to `out` (or a file), notes and
/// warnings to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Eval(a) => eval(a, cli.format, out),
        Command::Compare(a) => compare_cmd(a, cli.format, cli.strict, out, err),
        Command::Scan(a) => scan(a, cli.format, cli.strict, out, err),
        Command::Trace(a) => trace(a, cli.format, cli.strict, out, err),
        Command::Simulate(a) => simulate(a, cli.format, out, err),
    }
}

fn params(lambda: Scalar, p: Scalar) -> Result<ModelParams, CliError> {
    ModelParams::new(lambda, p).map_err(|e| CliError::Invalid(e.to_string()))
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn regime_label(regime: Regime) -> &'static str {
    match regime {
        Regime::SubcriticalFiniteMean => "subcritical",
        Regime::CriticalInfiniteMean => "infinite (critical)",
        Regime::SupercriticalSurvival => "survives-with-positive-probability",
    }
}

/// Mean extinction time of `model` as an enclosure; `None` when it is infinite.
pub fn eval_row(model: Topology, lambda: Scalar, p: Scalar, m: u32) -> Result<EvalRow, CliError> {
    let params = params(lambda, p)?;
    let regime = classify(&params, model);
    let mean = match model {
        Topology::NoDispersion => Some(dispersal_core::mean_time_no_dispersion(&params, m)),
        _ if regime != Regime::SubcriticalFiniteMean => None,
        Topology::TreeDispersion(2) => tree2_excess(&params).map(|e| 1.0 + e),
        Topology::TreeDispersion(3) => tree3_excess(&params).map(|e| 1.0 + e),
        Topology::FreeDispersion => free_excess(&params).map(|e| 1.0 + e),
        other => {
            return Err(CliError::Invalid(format!(
                "eval supports A, d2, d3 and star, not {other}"
            )))
        }
    };
    // Within rounding of the threshold the mean is reported as infinite.
    let regime = match (regime, mean) {
        (Regime::SubcriticalFiniteMean, None) => Regime::CriticalInfiniteMean,
        (r, _) => r,
    };
    Ok(EvalRow {
        model: model.to_string(),
        lambda: lambda.to_string(),
        p: p.to_string(),
        regime: regime_label(regime).into(),
        mean_lo: mean.map(|m| m.lo()),
        mean_hi: mean.map(|m| m.hi()),
    })
}

fn eval(a: &EvalArgs, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let row = eval_row(a.model.0, a.lambda, a.p, a.m)?;
    write_rows(out, format, EVAL_HEADER, &[row])
}

fn dispersion_label(topo: Topology) -> String {
    match topo {
        Topology::TreeDispersion(d) => d.to_string(),
        Topology::FreeDispersion => "star".into(),
        Topology::NoDispersion => "A".into(),
    }
}

fn tau(topo: Topology) -> String {
    match topo {
        Topology::TreeDispersion(d) => format!("E[tau_{d}]"),
        Topology::FreeDispersion => "E[tau_*]".into(),
        Topology::NoDispersion => "E[tau_A]".into(),
    }
}

/// The verdict as an inequality between the two means.
pub fn verdict_text(topo: Topology, verdict: ComparisonVerdict) -> String {
    match verdict {
        ComparisonVerdict::NoDispersionShorter => format!("E[tau_A] < {}", tau(topo)),
        ComparisonVerdict::DispersionShorter => format!("{} < E[tau_A]", tau(topo)),
        ComparisonVerdict::Indeterminate(_) => verdict.to_string(),
    }
}

fn comparator_error(e: ComparatorError) -> CliError {
    match e {
        ComparatorError::OutOfRegime { .. } => CliError::OutOfRegime(e.to_string()),
        ComparatorError::IndeterminateBand { .. } => CliError::Indeterminate(e.to_string()),
        ComparatorError::FreeDispersionShorter { .. } => CliError::Internal(e.to_string()),
        _ => CliError::Invalid(e.to_string()),
    }
}

/// The output row together with the raw verdict behind it.
pub fn compare_row(
    topo: Topology,
    lambda: Scalar,
    p: Scalar,
    m_max: u32,
) -> Result<(CompareRow, ComparisonVerdict), CliError> {
    let params = params(lambda, p)?;
    let c = compare(&params, topo, m_max).map_err(comparator_error)?;
    let row = CompareRow {
        d: dispersion_label(topo),
        lambda: lambda.to_string(),
        p: p.to_string(),
        verdict: verdict_text(topo, c.verdict),
        lhs_lo: c.no_dispersion.lo(),
        lhs_hi: c.no_dispersion.hi(),
        rhs: finite(c.dispersion_mean()),
        m: c.terms,
    };
    Ok((row, c.verdict))
}

fn compare_cmd(
    a: &CompareArgs,
    format: Format,
    strict: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let topo = a.d.0;
    let (row, verdict) = compare_row(topo, a.lambda, a.p, a.m_max)?;
    write_rows(
        &mut *out,
        format,
        COMPARE_HEADER,
        std::slice::from_ref(&row),
    )?;
    match verdict {
        ComparisonVerdict::NoDispersionShorter => {
            writeln!(err, "dispersion gives the longer expected lifetime")?
        }
        ComparisonVerdict::DispersionShorter => {
            writeln!(err, "staying together gives the longer expected lifetime")?
        }
        ComparisonVerdict::Indeterminate(m) => {
            writeln!(err, "enclosures still overlap at M={m}")?;
            if strict {
                return Err(CliError::Indeterminate(row.verdict));
            }
        }
    }
    Ok(())
}

pub fn scan_rows(a: &ScanArgs) -> Result<Vec<ScanRow>, CliError> {
    let grid = |r: crate::args::Range, steps: usize| {
        Grid::new(r.start, r.end, steps).map_err(|e| CliError::Invalid(e.to_string()))
    };
    let lambda = grid(a.lambda, a.lambda_steps.unwrap_or(a.steps))?;
    let p = grid(a.p, a.p_steps.unwrap_or(a.steps))?;
    let points = parallel::scan_region(&lambda, &p, a.d.0, a.m_max).map_err(comparator_error)?;
    Ok(points
        .into_iter()
        .map(|pt| ScanRow {
            lambda: pt.lambda,
            p: pt.p,
            region: pt.region.as_str(),
        })
        .collect())
}

fn scan(
    a: &ScanArgs,
    format: Format,
    strict: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let rows = scan_rows(a)?;
    match &a.out {
        Some(path) => write_rows(
            BufWriter::new(File::create(path)?),
            format,
            SCAN_HEADER,
            &rows,
        )?,
        None => write_rows(&mut *out, format, SCAN_HEADER, &rows)?,
    }
    let count = |r: Region| rows.iter().filter(|x| x.region == r.as_str()).count();
    let boundary = count(Region::BoundaryBand);
    writeln!(
        err,
        "{} points: gray {}, yellow {}, white {}, boundary {}",
        rows.len(),
        count(Region::Gray),
        count(Region::Yellow),
        count(Region::White),
        boundary
    )?;
    if strict && boundary == rows.len() {
        return Err(CliError::Indeterminate(
            "every grid point is indeterminate".into(),
        ));
    }
    Ok(())
}

/// Consecutive crossings paired as `(p_l, p_u)`; an odd one out has no `p_u`.
pub fn trace_rows(
    topo: Topology,
    lambda: Scalar,
    tol: f64,
    m_max: u32,
) -> Result<Vec<TraceRow>, CliError> {
    let crossings = match trace_crossings_with(lambda, topo, tol, m_max) {
        Ok(c) => c,
        Err(ComparatorError::NoCrossing) => return Ok(Vec::new()),
        Err(e) => return Err(comparator_error(e)),
    };
    Ok(crossings
        .points
        .chunks(2)
        .map(|w| TraceRow {
            d: dispersion_label(topo),
            lambda: lambda.to_string(),
            p_l: Some(w[0]),
            p_u: w.get(1).copied(),
            tol,
        })
        .collect())
}

fn trace(
    a: &TraceArgs,
    format: Format,
    strict: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let rows = match trace_rows(a.d.0, a.lambda, a.tol, a.m_max) {
        Err(CliError::Indeterminate(msg)) if !strict => {
            writeln!(err, "{msg}")?;
            Vec::new()
        }
        r => r?,
    };
    if rows.is_empty() {
        writeln!(err, "no crossing found at lambda = {}", a.lambda)?;
    }
    write_rows(out, format, TRACE_HEADER, &rows)
}

fn sim_error(e: SimError) -> CliError {
    CliError::Invalid(e.to_string())
}

pub fn sim_config(a: &SimulateArgs) -> Result<SimConfig, CliError> {
    let mut config = SimConfig::new(params(a.lambda, a.p)?, a.model.0);
    config.replicates = a.replicates;
    config.seed = a.seed;
    config.time_cap = a.time_cap;
    config.colony_cap = a.colony_cap;
    if a.independent_growth {
        config.growth = Growth::Independent;
    }
    config.validate().map_err(sim_error)?;
    Ok(config)
}

fn simulate(
    a: &SimulateArgs,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let config = sim_config(a)?;
    if let Some(t) = threshold(config.topology, config.params.lambda()) {
        if (config.params.p() - t).abs() <= 0.02 * t {
            writeln!(
                err,
                "warning: p is within 2% of the threshold {t}; expect heavy tails and censoring"
            )?;
        }
    }
    let outcomes = parallel::run_replicates(&config).map_err(sim_error)?;
    let est = aggregate(&outcomes);
    if let Some(path) = &a.trace {
        let rows: Vec<ReplicateRow> = outcomes
            .iter()
            .map(|o| ReplicateRow {
                index: o.index,
                extinction_time: (!o.censored()).then_some(o.time),
                max_colonies: o.max_colonies,
                censored: o.censored(),
            })
            .collect();
        write_csv(BufWriter::new(File::create(path)?), REPLICATE_HEADER, &rows)?;
    }
    if est.censored_fraction > 0.0 {
        writeln!(
            err,
            "{} of {} runs censored; the mean uses extinct runs only",
            config.replicates - est.replicates_used,
            config.replicates
        )?;
    }
    let row = SimulateRow {
        model: config.topology.to_string(),
        lambda: a.lambda.to_string(),
        p: a.p.to_string(),
        replicates: config.replicates,
        seed: config.seed,
        mean: finite(est.mean),
        std_error: finite(est.std_error),
        censored_fraction: est.censored_fraction,
        survival_fraction: est.survival_fraction,
    };
    write_rows(out, format, SIMULATE_HEADER, &[row])
}
