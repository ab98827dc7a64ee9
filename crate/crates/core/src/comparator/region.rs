//! Phase maps over a `(lambda, p)` grid.

use alloc::vec::Vec;
use core::fmt;

use super::{compare, ComparatorError, ComparisonVerdict};
use crate::model::{classify, Regime, Topology};
use crate::params::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `E[tau_A] < E[tau_d]`, including the critical curve where `E[tau_d]`
    /// is infinite.
    Gray,
    /// `E[tau_A] > E[tau_d]`.
    Yellow,
    /// The dispersing population survives with positive probability.
    White,
    /// The certified comparison did not separate the means.
    BoundaryBand,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Gray => "gray",
            Region::Yellow => "yellow",
            Region::White => "white",
            Region::BoundaryBand => "boundary",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub lambda: f64,
    pub p: f64,
    pub region: Region,
}

/// `steps` evenly spaced values from `start` to `end`, both included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    start: f64,
    end: f64,
    steps: usize,
}

impl Grid {
    pub fn new(start: f64, end: f64, steps: usize) -> Result<Self, ComparatorError> {
        if !(start.is_finite() && end.is_finite()) || start > end {
            return Err(ComparatorError::InvalidGrid("need finite start <= end"));
        }
        if steps == 0 {
            return Err(ComparatorError::InvalidGrid("need at least one step"));
        }
        if steps == 1 && start != end {
            return Err(ComparatorError::InvalidGrid("one step needs start == end"));
        }
        Ok(Grid { start, end, steps })
    }

    pub fn len(&self) -> usize {
        self.steps
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.steps == 1 {
            return self.start;
        }
        if i + 1 == self.steps {
            return self.end;
        }
        self.start + (self.end - self.start) * (i as f64 / (self.steps - 1) as f64)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(|i| self.value(i))
    }
}

/// Region of a single point.
pub fn region_at(
    params: &ModelParams,
    topo: Topology,
    m_max: u32,
) -> Result<Region, ComparatorError> {
    match classify(params, topo) {
        Regime::SupercriticalSurvival => Ok(Region::White),
        Regime::CriticalInfiniteMean => Ok(Region::Gray),
        Regime::SubcriticalFiniteMean => Ok(match compare(params, topo, m_max)?.verdict {
            ComparisonVerdict::NoDispersionShorter => Region::Gray,
            ComparisonVerdict::DispersionShorter => Region::Yellow,
            ComparisonVerdict::Indeterminate(_) => Region::BoundaryBand,
        }),
    }
}

/// Classifies every grid point, `lambda` major and `p` minor.
pub fn scan_region(
    lambda_grid: &Grid,
    p_grid: &Grid,
    topo: Topology,
    m_max: u32,
) -> Result<Vec<RegionPoint>, ComparatorError> {
    let mut out = Vec::with_capacity(lambda_grid.len() * p_grid.len());
    for lambda in lambda_grid.values() {
        for p in p_grid.values() {
            let params = ModelParams::new(lambda, p).map_err(|_| {
                ComparatorError::InvalidGrid("points must have lambda > 0 and 0 < p < 1")
            })?;
            out.push(RegionPoint {
                lambda,
                p,
                region: region_at(&params, topo, m_max)?,
            });
        }
    }
    Ok(out)
}
