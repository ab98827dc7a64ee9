//! Exact formulas: mean extinction times, the survivor law after a
//! catastrophe, offspring-colony distributions, and the generic
//! branching-process extinction times they plug into.

use thiserror::Error;

mod branching;
mod means;
mod pmf;
pub mod special;

pub use branching::{branching_mean_binary, branching_mean_geometric, branching_mean_ternary};
pub use means::{
    aux_g, free_excess, mean_time_free, mean_time_no_dispersion, mean_time_tree2, mean_time_tree3,
    tree2_excess, tree3_excess, AuxG, BOUNDARY_REL,
};
pub(crate) use means::{free_excess_bracket, tree2_excess_bracket, tree3_excess_bracket};
pub use pmf::{
    label_distribution, label_distribution_exact, offspring_pmf, surjections, survivor_law,
    OffspringPmf, SurvivorLaw,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error("tree dispersion needs d >= 2, got {0}")]
    InvalidDegree(u32),
    #[error("probabilities must lie in [0, 1] and sum to 1")]
    InvalidPmf,
    #[error("offspring mean {0} exceeds 1")]
    MeanAboveOne(f64),
}
