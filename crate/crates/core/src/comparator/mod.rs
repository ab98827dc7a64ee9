//! Certified comparison of the no-dispersion mean against a dispersion mean.
//!
//! Both sides are compared on the excess scale `E - 1`. The dispersion side
//! is a closed form evaluated in interval arithmetic; the no-dispersion side
//! brackets the q-product with the `(a, b)` truncation tail and refines the
//! truncation index `M` by doubling until the two enclosures are disjoint or
//! `M` reaches its cap.

use core::cmp::Ordering;
use core::fmt;

use thiserror::Error;

use crate::closed_forms::{free_excess_bracket, tree2_excess_bracket, tree3_excess_bracket};
use crate::interval::CertifiedInterval;
use crate::model::{compare_to_threshold, threshold, Topology};
use crate::params::ModelParams;
use crate::qproduct::{LogProduct, TailBound};

mod region;
mod trace;

pub use region::{region_at, scan_region, Grid, Region, RegionPoint};
pub use trace::{trace_crossings, trace_crossings_with, CrossingPair, Crossings, GRID_STEP};

/// Largest truncation index tried before giving up.
pub const DEFAULT_M_MAX: u32 = 4096;

/// First truncation index of the doubling schedule.
pub const M_START: u32 = 8;

/// Which mean is smaller. A strict verdict is backed by disjoint enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComparisonVerdict {
    /// `E[tau_A] < E[tau_d]`: dispersion lives longer.
    NoDispersionShorter,
    /// `E[tau_d] < E[tau_A]`: staying together lives longer.
    DispersionShorter,
    /// Enclosures still overlap at the given `M`.
    Indeterminate(u32),
}

impl ComparisonVerdict {
    pub fn is_strict(&self) -> bool {
        !matches!(self, ComparisonVerdict::Indeterminate(_))
    }
}

impl fmt::Display for ComparisonVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparisonVerdict::NoDispersionShorter => f.write_str("no-dispersion-shorter"),
            ComparisonVerdict::DispersionShorter => f.write_str("dispersion-shorter"),
            ComparisonVerdict::Indeterminate(m) => write!(f, "indeterminate at M={m}"),
        }
    }
}

/// Outcome of one comparison together with the enclosures behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub verdict: ComparisonVerdict,
    /// Enclosure of `E[tau_A]` at the last `M` tried.
    pub no_dispersion: CertifiedInterval,
    /// Enclosure of the dispersion mean. Its upper end is infinite only when
    /// rounding cannot separate the point from the critical curve.
    pub dispersion: CertifiedInterval,
    /// Truncation index of the last product bracket.
    pub terms: u32,
}

impl Comparison {
    /// Closed-form dispersion mean as a single float.
    pub fn dispersion_mean(&self) -> f64 {
        if self.dispersion.hi().is_finite() {
            self.dispersion.mid()
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComparatorError {
    #[error("p = {p} is not below the {topology} threshold {threshold}")]
    OutOfRegime {
        topology: Topology,
        p: f64,
        threshold: f64,
    },
    #[error("comparison needs d = 2, d = 3 or free dispersion, got {0}")]
    UnsupportedTopology(Topology),
    #[error("numerics report E[tau_*] < E[tau_A] at lambda = {lambda}, p = {p}")]
    FreeDispersionShorter { lambda: f64, p: f64 },
    #[error("no crossing found on the scan grid")]
    NoCrossing,
    #[error("comparisons stay indeterminate on [{lo}, {hi}] (width {width:e})")]
    IndeterminateBand { lo: f64, hi: f64, width: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
}

fn excess_bracket(params: &ModelParams, topo: Topology) -> CertifiedInterval {
    match topo {
        Topology::TreeDispersion(2) => tree2_excess_bracket(params),
        Topology::TreeDispersion(3) => tree3_excess_bracket(params),
        _ => free_excess_bracket(params),
    }
}

/// Certified comparison of `E[tau_A]` against the mean under `topo`, which
/// must be `TreeDispersion(2)`, `TreeDispersion(3)` or `FreeDispersion`.
pub fn compare(
    params: &ModelParams,
    topo: Topology,
    m_max: u32,
) -> Result<Comparison, ComparatorError> {
    let tail = TailBound::for_topology(topo).ok_or(ComparatorError::UnsupportedTopology(topo))?;
    if compare_to_threshold(params, topo) != Some(Ordering::Less) {
        return Err(ComparatorError::OutOfRegime {
            topology: topo,
            p: params.p(),
            threshold: threshold(topo, params.lambda()).unwrap_or(f64::NAN),
        });
    }
    // The tail condition p < a/(b lambda + a) coincides with the regime.
    debug_assert!(tail.admits(params));

    let rhs = excess_bracket(params, topo);
    let mut product = LogProduct::new(params);
    let mut m = M_START.min(m_max);
    loop {
        product.extend_to(m);
        let lhs = product.mean_excess(product.ratio_log_tail(tail));
        let verdict = if lhs.strictly_below(&rhs) {
            ComparisonVerdict::NoDispersionShorter
        } else if rhs.strictly_below(&lhs) {
            ComparisonVerdict::DispersionShorter
        } else if m >= m_max {
            ComparisonVerdict::Indeterminate(m)
        } else {
            m = m.saturating_mul(2).min(m_max);
            continue;
        };
        return Ok(Comparison {
            verdict,
            no_dispersion: 1.0 + lhs,
            dispersion: 1.0 + rhs,
            terms: m,
        });
    }
}

/// [`compare`] against the binary tree.
pub fn compare_d2(params: &ModelParams, m_max: u32) -> Result<Comparison, ComparatorError> {
    compare(params, Topology::TreeDispersion(2), m_max)
}

/// [`compare`] against the ternary tree.
pub fn compare_d3(params: &ModelParams, m_max: u32) -> Result<Comparison, ComparatorError> {
    compare(params, Topology::TreeDispersion(3), m_max)
}

/// [`compare`] against free dispersion. Below `p = 1/(lambda+1)` the
/// no-dispersion mean is known to be the smaller one, so a certified
/// `DispersionShorter` is reported as [`ComparatorError::FreeDispersionShorter`].
pub fn compare_free(params: &ModelParams, m_max: u32) -> Result<Comparison, ComparatorError> {
    let c = compare(params, Topology::FreeDispersion, m_max)?;
    if c.verdict == ComparisonVerdict::DispersionShorter {
        return Err(ComparatorError::FreeDispersionShorter {
            lambda: params.lambda(),
            p: params.p(),
        });
    }
    Ok(c)
}
