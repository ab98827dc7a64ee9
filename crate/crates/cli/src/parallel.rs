//! Rayon drivers. Work items are independent and results are collected in
//! input order, so output does not depend on scheduling.

use dispersal_core::sim::{
    aggregate, run_replicate, ReplicateOutcome, SimConfig, SimError, SimEstimate,
};
use dispersal_core::{region_at, ComparatorError, Grid, ModelParams, RegionPoint, Topology};
use rayon::prelude::*;

/// [`dispersal_core::scan_region`] over all cores.
pub fn scan_region(
    lambda_grid: &Grid,
    p_grid: &Grid,
    topo: Topology,
    m_max: u32,
) -> Result<Vec<RegionPoint>, ComparatorError> {
    let cols = p_grid.len();
    (0..lambda_grid.len() * cols)
        .into_par_iter()
        .map(|i| {
            let lambda = lambda_grid.value(i / cols);
            let p = p_grid.value(i % cols);
            let params = ModelParams::new(lambda, p).map_err(|_| {
                ComparatorError::InvalidGrid("points must have lambda > 0 and 0 < p < 1")
            })?;
            Ok(RegionPoint {
                lambda,
                p,
                region: region_at(&params, topo, m_max)?,
            })
        })
        .collect()
}

/// Every replicate of `config`, in replicate order.
pub fn run_replicates(config: &SimConfig) -> Result<Vec<ReplicateOutcome>, SimError> {
    config.validate()?;
    Ok((0..config.replicates)
        .into_par_iter()
        .map(|i| run_replicate(config, i))
        .collect())
}

/// [`dispersal_core::simulate`] over all cores; identical result.
pub fn simulate(config: &SimConfig) -> Result<SimEstimate, SimError> {
    Ok(aggregate(&run_replicates(config)?))
}
