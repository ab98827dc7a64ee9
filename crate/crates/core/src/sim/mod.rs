//! Event-driven Monte Carlo for the three models, used as an oracle for the
//! closed forms.
//!
//! Without dispersion the full birth/catastrophe jump chain of the single
//! colony is simulated. With dispersion only catastrophes are events: a
//! colony founded at time `t` is hit at `t + J` with `J ~ Exp(1)`, holds
//! `1 + Poisson(lambda J)` individuals at that moment, and its
//! `Binomial(size, p)` survivors found new colonies, either one per distinct
//! label among `d` (tree) or one each (free).
//!
//! The closed forms describe a slightly different process: a branching
//! process whose offspring law is that of the colony above but whose
//! lifetimes are independent of it. There a long-lived colony is no larger
//! at its catastrophe than a short-lived one. [`Growth::Independent`]
//! simulates that process; [`Growth::ColonyAge`], the default, the colony
//! model itself.
//!
//! Replicate `i` draws from `ChaCha8Rng::seed_from_u64(seed ^ i)`, so any
//! split of the replicates over workers reproduces the serial run.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Exp1, Poisson};
use thiserror::Error;

use crate::model::Topology;
use crate::params::ModelParams;

pub const DEFAULT_REPLICATES: u64 = 100_000;
pub const DEFAULT_TIME_CAP: f64 = 1e4;
pub const DEFAULT_COLONY_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("need at least one replicate")]
    NoReplicates,
    #[error("caps must be positive")]
    BadCap,
    #[error("tree dispersion needs d >= 2, got {0}")]
    InvalidDegree(u32),
    #[error("expected {expected} topology, got {got}")]
    WrongTopology {
        expected: &'static str,
        got: Topology,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub params: ModelParams,
    pub topology: Topology,
    pub replicates: u64,
    pub seed: u64,
    /// Runs still alive past this time are censored.
    pub time_cap: f64,
    /// Runs that reach this many simultaneous colonies are stopped and
    /// counted as surviving.
    pub colony_cap: u64,
    pub growth: Growth,
}

/// How the size of a dispersing colony at its catastrophe is tied to its
/// lifetime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Growth {
    /// Size is `1 + Poisson(lambda J)` with `J` the colony's own lifetime.
    #[default]
    ColonyAge,
    /// Size uses an independent `Exp(1)` age, decoupling offspring from
    /// lifetime as in a Markov branching process.
    Independent,
}

impl SimConfig {
    pub fn new(params: ModelParams, topology: Topology) -> Self {
        SimConfig {
            params,
            topology,
            replicates: DEFAULT_REPLICATES,
            seed: 0,
            time_cap: DEFAULT_TIME_CAP,
            colony_cap: DEFAULT_COLONY_CAP,
            growth: Growth::ColonyAge,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.replicates == 0 {
            return Err(SimError::NoReplicates);
        }
        if self.time_cap.is_nan() || self.time_cap <= 0.0 || self.colony_cap == 0 {
            return Err(SimError::BadCap);
        }
        if let Topology::TreeDispersion(d) = self.topology {
            if d < 2 {
                return Err(SimError::InvalidDegree(d));
            }
        }
        Ok(())
    }

    /// Random stream of replicate `i`.
    pub fn rng(&self, i: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Extinct,
    /// Stopped by the time cap.
    TimeCapped,
    /// Stopped by the colony cap.
    ColonyCapped,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicateOutcome {
    pub index: u64,
    pub status: Status,
    /// Extinction time, or the time at which the run was stopped.
    pub time: f64,
    pub max_colonies: u64,
    /// Survivors of the first catastrophe without dispersion; colonies it
    /// founded with dispersion. `None` if the run was stopped before it.
    pub first_offspring: Option<u64>,
}

impl ReplicateOutcome {
    pub fn censored(&self) -> bool {
        self.status != Status::Extinct
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    /// Mean extinction time over the runs that went extinct.
    pub mean: f64,
    pub std_error: f64,
    /// Fraction of runs stopped by either cap.
    pub censored_fraction: f64,
    /// Fraction of runs stopped by the colony cap.
    pub survival_fraction: f64,
    /// Number of extinct runs behind `mean`.
    pub replicates_used: u64,
}

fn exp1(rng: &mut ChaCha8Rng) -> f64 {
    Exp1.sample(rng)
}

fn binomial(rng: &mut ChaCha8Rng, n: u64, p: f64) -> u64 {
    // Direct trials beat the sampler's setup cost for the small colonies
    // that dominate every run.
    if n <= 16 {
        return (0..n).filter(|_| rng.random::<f64>() < p).count() as u64;
    }
    Binomial::new(n, p).expect("p in (0, 1)").sample(rng)
}

fn poisson(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let x: f64 = Poisson::new(mean)
        .expect("finite positive mean")
        .sample(rng);
    x as u64
}

/// Number of distinct labels among `n` uniform draws from `d`.
fn distinct_labels(rng: &mut ChaCha8Rng, n: u64, d: u32) -> u64 {
    let mut seen = vec![false; d as usize];
    let mut count = 0u64;
    for _ in 0..n {
        let k = rng.random_range(0..d) as usize;
        if !seen[k] {
            seen[k] = true;
            count += 1;
            if count == d as u64 {
                break;
            }
        }
    }
    count
}

/// Colonies founded by one catastrophe of a colony that lived for `age`.
fn offspring_after(rng: &mut ChaCha8Rng, params: &ModelParams, topo: Topology, age: f64) -> u64 {
    let size = 1 + poisson(rng, params.lambda() * age);
    let survivors = binomial(rng, size, params.p());
    match topo {
        Topology::TreeDispersion(d) => distinct_labels(rng, survivors, d),
        _ => survivors,
    }
}

/// One draw of the offspring count at a catastrophe: colonies founded for
/// the dispersion models, survivors for the no-dispersion model.
pub fn catastrophe_offspring(rng: &mut ChaCha8Rng, params: &ModelParams, topo: Topology) -> u64 {
    let age = exp1(rng);
    offspring_after(rng, params, topo, age)
}

fn run_single_colony(config: &SimConfig, rng: &mut ChaCha8Rng, index: u64) -> ReplicateOutcome {
    let lambda = config.params.lambda();
    let p = config.params.p();
    let birth = lambda / (lambda + 1.0);
    let mut t = 0.0;
    let mut n = 1u64;
    let mut first = None;
    loop {
        t += exp1(rng) / (lambda + 1.0);
        if t > config.time_cap {
            return ReplicateOutcome {
                index,
                status: Status::TimeCapped,
                time: config.time_cap,
                max_colonies: 1,
                first_offspring: first,
            };
        }
        if rng.random::<f64>() < birth {
            n += 1;
            continue;
        }
        n = binomial(rng, n, p);
        first.get_or_insert(n);
        if n == 0 {
            return ReplicateOutcome {
                index,
                status: Status::Extinct,
                time: t,
                max_colonies: 1,
                first_offspring: first,
            };
        }
    }
}

/// Catastrophe time and age of a pending colony, ordered by time. Times are
/// nonnegative, so their bit patterns sort like the values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Pending {
    at_bits: u64,
    age_bits: u64,
}

impl Pending {
    fn new(at: f64, age: f64) -> Self {
        Pending {
            at_bits: at.to_bits(),
            age_bits: age.to_bits(),
        }
    }
}

fn growth_age(config: &SimConfig, rng: &mut ChaCha8Rng, lifetime: f64) -> f64 {
    match config.growth {
        Growth::ColonyAge => lifetime,
        Growth::Independent => exp1(rng),
    }
}

fn run_colonies(config: &SimConfig, rng: &mut ChaCha8Rng, index: u64) -> ReplicateOutcome {
    let mut queue = BinaryHeap::new();
    let age = exp1(rng);
    queue.push(Reverse(Pending::new(age, growth_age(config, rng, age))));
    let mut max_colonies = 1u64;
    let mut first = None;
    let mut t = 0.0;
    while let Some(Reverse(next)) = queue.pop() {
        t = f64::from_bits(next.at_bits);
        if t > config.time_cap {
            return ReplicateOutcome {
                index,
                status: Status::TimeCapped,
                time: config.time_cap,
                max_colonies,
                first_offspring: first,
            };
        }
        let k = offspring_after(
            rng,
            &config.params,
            config.topology,
            f64::from_bits(next.age_bits),
        );
        first.get_or_insert(k);
        for _ in 0..k {
            let age = exp1(rng);
            queue.push(Reverse(Pending::new(t + age, growth_age(config, rng, age))));
        }
        let alive = queue.len() as u64;
        max_colonies = max_colonies.max(alive);
        if alive >= config.colony_cap {
            return ReplicateOutcome {
                index,
                status: Status::ColonyCapped,
                time: t,
                max_colonies,
                first_offspring: first,
            };
        }
    }
    ReplicateOutcome {
        index,
        status: Status::Extinct,
        time: t,
        max_colonies,
        first_offspring: first,
    }
}

/// Runs replicate `i` of `config` on its own random stream.
pub fn run_replicate(config: &SimConfig, i: u64) -> ReplicateOutcome {
    let mut rng = config.rng(i);
    match config.topology {
        Topology::NoDispersion => run_single_colony(config, &mut rng, i),
        _ => run_colonies(config, &mut rng, i),
    }
}

/// Summary of outcomes listed in replicate order.
pub fn aggregate(outcomes: &[ReplicateOutcome]) -> SimEstimate {
    let total = outcomes.len() as f64;
    let times: Vec<f64> = outcomes
        .iter()
        .filter(|o| o.status == Status::Extinct)
        .map(|o| o.time)
        .collect();
    let used = times.len();
    let survived = outcomes
        .iter()
        .filter(|o| o.status == Status::ColonyCapped)
        .count();
    let censored = outcomes.len() - used;
    let (mean, std_error) = if used == 0 {
        (f64::NAN, f64::NAN)
    } else {
        let mean = times.iter().sum::<f64>() / used as f64;
        let var = if used > 1 {
            times.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (used - 1) as f64
        } else {
            0.0
        };
        (mean, libm::sqrt(var / used as f64))
    };
    SimEstimate {
        mean,
        std_error,
        censored_fraction: if total > 0.0 {
            censored as f64 / total
        } else {
            0.0
        },
        survival_fraction: if total > 0.0 {
            survived as f64 / total
        } else {
            0.0
        },
        replicates_used: used as u64,
    }
}

/// Runs all replicates in order on the calling thread.
pub fn simulate(config: &SimConfig) -> Result<SimEstimate, SimError> {
    config.validate()?;
    let outcomes: Vec<ReplicateOutcome> = (0..config.replicates)
        .map(|i| run_replicate(config, i))
        .collect();
    Ok(aggregate(&outcomes))
}

fn expect(config: &SimConfig, ok: bool, expected: &'static str) -> Result<SimEstimate, SimError> {
    if !ok {
        return Err(SimError::WrongTopology {
            expected,
            got: config.topology,
        });
    }
    simulate(config)
}

pub fn simulate_no_dispersion(config: &SimConfig) -> Result<SimEstimate, SimError> {
    expect(
        config,
        config.topology == Topology::NoDispersion,
        "no-dispersion",
    )
}

pub fn simulate_tree(config: &SimConfig) -> Result<SimEstimate, SimError> {
    expect(
        config,
        matches!(config.topology, Topology::TreeDispersion(_)),
        "tree",
    )
}

pub fn simulate_free(config: &SimConfig) -> Result<SimEstimate, SimError> {
    expect(config, config.topology == Topology::FreeDispersion, "free")
}
