//! Crossing curves: values of `p` at fixed `lambda` where the no-dispersion
//! and dispersion means coincide.

use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{compare, ComparatorError, ComparisonVerdict, DEFAULT_M_MAX};
use crate::model::{compare_to_threshold, Topology};
use crate::params::{ModelParams, Scalar};

/// Spacing of the sign scan that brackets crossings before bisection.
pub const GRID_STEP: f64 = 1e-3;

/// The two crossings delimiting the band where dispersion is shorter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingPair {
    pub p_l: f64,
    pub p_u: f64,
    pub lambda: f64,
    pub topology: Topology,
    pub tol: f64,
}

/// Every crossing found along one `lambda` line, in increasing `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossings {
    pub lambda: f64,
    pub topology: Topology,
    pub tol: f64,
    pub points: Vec<f64>,
}

impl Crossings {
    /// The lower and upper crossing when exactly two were found.
    pub fn pair(&self) -> Option<CrossingPair> {
        match self.points[..] {
            [p_l, p_u] => Some(CrossingPair {
                p_l,
                p_u,
                lambda: self.lambda,
                topology: self.topology,
                tol: self.tol,
            }),
            _ => None,
        }
    }
}

struct Line {
    lambda: Scalar,
    topo: Topology,
    m_max: u32,
}

impl Line {
    fn verdict(&self, p: f64) -> Result<ComparisonVerdict, ComparatorError> {
        let params = ModelParams::new(self.lambda, p)
            .map_err(|_| ComparatorError::InvalidGrid("p left (0, 1)"))?;
        Ok(compare(&params, self.topo, self.m_max)?.verdict)
    }

    fn subcritical(&self, p: f64) -> bool {
        ModelParams::new(self.lambda, p)
            .map(|params| compare_to_threshold(&params, self.topo) == Some(Ordering::Less))
            .unwrap_or(false)
    }

    /// Shrinks `[lo, hi]` to width `tol` keeping `keep(verdict(lo))` true and
    /// `keep(verdict(hi))` false.
    fn bisect(
        &self,
        mut lo: f64,
        mut hi: f64,
        tol: f64,
        keep: impl Fn(ComparisonVerdict) -> bool,
    ) -> Result<(f64, f64, ComparisonVerdict), ComparatorError> {
        let mut hi_verdict = self.verdict(hi)?;
        while hi - lo > tol {
            let mid = lo + 0.5 * (hi - lo);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = self.verdict(mid)?;
            if keep(v) {
                lo = mid;
            } else {
                hi = mid;
                hi_verdict = v;
            }
        }
        Ok((lo, hi, hi_verdict))
    }

    /// Locates the crossing between `a` (verdict `va`) and `b` (verdict `vb`).
    fn refine(
        &self,
        a: f64,
        va: ComparisonVerdict,
        b: f64,
        vb: ComparisonVerdict,
        tol: f64,
    ) -> Result<f64, ComparatorError> {
        let (lo, mut hi, hv) = self.bisect(a, b, tol, |v| v == va)?;
        if hv != vb {
            // Landed in an undecidable stretch; find where `vb` resumes.
            let (_, h, _) = self.bisect(hi, b, tol, |v| v != vb)?;
            hi = h;
        }
        let width = hi - lo;
        if width > 2.0 * tol {
            return Err(ComparatorError::IndeterminateBand { lo, hi, width });
        }
        Ok(lo + 0.5 * width)
    }
}

/// Scans `p` on a [`GRID_STEP`] grid below the critical threshold, then
/// bisects every change of strict verdict down to `tol`. Grid points whose
/// verdict is indeterminate are skipped by the scan and resolved by the
/// bisection.
pub fn trace_crossings_with(
    lambda: impl Into<Scalar>,
    topo: Topology,
    tol: f64,
    m_max: u32,
) -> Result<Crossings, ComparatorError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(ComparatorError::InvalidGrid("tolerance must be positive"));
    }
    let lambda = lambda.into();
    let line = Line {
        lambda,
        topo,
        m_max,
    };
    // Validates lambda and the topology once.
    let probe = ModelParams::new(lambda, GRID_STEP)
        .map_err(|_| ComparatorError::InvalidGrid("lambda must be positive"))?;
    if let Err(e @ ComparatorError::UnsupportedTopology(_)) = compare(&probe, topo, 1) {
        return Err(e);
    }

    let mut points = Vec::new();
    let mut last: Option<(f64, ComparisonVerdict)> = None;
    let mut i = 1u32;
    loop {
        let p = i as f64 * GRID_STEP;
        if p >= 1.0 || !line.subcritical(p) {
            break;
        }
        let v = line.verdict(p)?;
        if v.is_strict() {
            if let Some((a, va)) = last {
                if va != v {
                    points.push(line.refine(a, va, p, v, tol)?);
                }
            }
            last = Some((p, v));
        }
        i += 1;
    }
    if points.is_empty() {
        return Err(ComparatorError::NoCrossing);
    }
    Ok(Crossings {
        lambda: lambda.value(),
        topology: topo,
        tol,
        points,
    })
}

/// [`trace_crossings_with`] at the default `M` cap.
pub fn trace_crossings(
    lambda: impl Into<Scalar>,
    topo: Topology,
    tol: f64,
) -> Result<Crossings, ComparatorError> {
    trace_crossings_with(lambda, topo, tol, DEFAULT_M_MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_tree_pair() {
        let c = trace_crossings(0.5, Topology::TreeDispersion(2), 1e-6).unwrap();
        let pair = c.pair().unwrap();
        assert!((pair.p_l - 0.388184220004325).abs() < 1e-6);
        assert!((pair.p_u - 0.756133911341248).abs() < 1e-6);
    }

    #[test]
    fn free_dispersion_never_crosses() {
        assert_eq!(
            trace_crossings(1.0, Topology::FreeDispersion, 1e-3),
            Err(ComparatorError::NoCrossing)
        );
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(trace_crossings(0.5, Topology::TreeDispersion(2), 0.0).is_err());
    }
}
