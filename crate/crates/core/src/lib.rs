//! Mean extinction times for growth models subject to binomial catastrophes.
//!
//! A colony grows by one individual at rate `lambda` and is hit by a
//! catastrophe at rate 1; each individual survives a catastrophe
//! independently with probability `p`. Three survivor rules are covered:
//!
//! * no dispersion: survivors stay in the same colony,
//! * tree dispersion on the `d`-ary tree: survivors pick one of `d` child
//!   sites and colliding survivors die,
//! * free dispersion: every survivor founds its own colony.
//!
//! The crate computes the exact mean extinction times of all three, decides
//! with certified floating-point brackets which strategy lives longer, traces
//! the curves where the two means coincide, and carries an independent
//! event-driven simulator used as an oracle.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod closed_forms;
pub mod comparator;
pub mod interval;
pub mod model;
pub mod params;
pub mod qproduct;
pub mod sim;

pub use closed_forms::{
    aux_g, branching_mean_binary, branching_mean_geometric, branching_mean_ternary,
    label_distribution, label_distribution_exact, mean_time_free, mean_time_no_dispersion,
    mean_time_tree2, mean_time_tree3, offspring_pmf, survivor_law, AuxG, ClosedFormError,
    OffspringPmf, SurvivorLaw,
};
pub use comparator::{
    compare, compare_d2, compare_d3, compare_free, region_at, scan_region, trace_crossings,
    trace_crossings_with, ComparatorError, Comparison, ComparisonVerdict, CrossingPair, Crossings,
    Grid, Region, RegionPoint, DEFAULT_M_MAX,
};
pub use interval::CertifiedInterval;
pub use model::{classify, MeanExtinction, Regime, Topology};
pub use params::{ModelParams, ParamError, Scalar};
pub use qproduct::{product_bounds, product_log_series, QProductError, TailBound};
pub use sim::{
    aggregate, run_replicate, simulate, simulate_free, simulate_no_dispersion, simulate_tree,
    Growth, ReplicateOutcome, SimConfig, SimError, SimEstimate, Status,
};
