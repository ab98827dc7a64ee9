//! Survivor counts after a catastrophe and the resulting number of new
//! colonies.
//!
//! A colony lives an `Exp(1)` time `J` and holds `1 + Poisson(lambda J)`
//! individuals when the catastrophe strikes. Binomial thinning of that
//! geometric size leaves `N` survivors with
//! `P(N = 0) = beta`, `P(N = n) = alpha c^n` for `n >= 1`.
//! Under tree dispersion each survivor picks one of `d` sites uniformly and
//! the number of distinct sites is the number of offspring colonies.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::ClosedFormError;
use crate::params::ModelParams;

/// Law of the survivor count right after a catastrophe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivorLaw {
    /// Mass at zero survivors.
    pub beta: f64,
    pub alpha: f64,
    /// Geometric ratio of the tail.
    pub c: f64,
}

impl SurvivorLaw {
    pub fn pmf(&self, n: u64) -> f64 {
        if n == 0 {
            self.beta
        } else {
            self.alpha * libm::pow(self.c, n as f64)
        }
    }

    /// `P(N >= n)` for `n >= 1`.
    pub fn tail(&self, n: u64) -> f64 {
        debug_assert!(n >= 1);
        self.alpha * libm::pow(self.c, n as f64) / (1.0 - self.c)
    }

    /// Total mass `beta + alpha c / (1 - c)`; 1 for a valid law.
    pub fn total_mass(&self) -> f64 {
        self.beta + self.alpha * self.c / (1.0 - self.c)
    }

    /// `E[N] = alpha c / (1 - c)^2`.
    pub fn mean(&self) -> f64 {
        self.alpha * self.c / ((1.0 - self.c) * (1.0 - self.c))
    }
}

/// `beta = (1-p)/(lambda p + 1)`, `alpha = (lambda+1)/(lambda (lambda p + 1))`,
/// `c = lambda p/(lambda p + 1)`.
pub fn survivor_law(params: &ModelParams) -> SurvivorLaw {
    let l = params.lambda();
    let p = params.p();
    let lp1 = l * p + 1.0;
    SurvivorLaw {
        beta: (1.0 - p) / lp1,
        alpha: (l + 1.0) / (l * lp1),
        c: l * p / lp1,
    }
}

/// Offspring-colony distribution `probs[k] = P(k colonies)`, `k = 0..=d`.
#[derive(Debug, Clone, PartialEq)]
pub struct OffspringPmf {
    pub d: u32,
    pub probs: Vec<f64>,
}

impl OffspringPmf {
    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(k, q)| k as f64 * q)
            .sum()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// Offspring distribution on the `d`-ary tree.
///
/// `d = 2, 3` use closed forms. Their last entry is written as the remaining
/// geometric mass `alpha c/(1-c) - sum_{0<j<d} p_j` simplified by hand
/// (`alpha c^2/((1-c)(2-c))` and `2 alpha c^3/((1-c)(3-2c)(3-c))`), which is
/// the same number as `1 - sum_{j<d} p_j` without the cancellation at small
/// `p`. Larger `d` sums the series over the survivor count with a bounded
/// geometric remainder.
pub fn offspring_pmf(params: &ModelParams, d: u32) -> Result<OffspringPmf, ClosedFormError> {
    if d < 2 {
        return Err(ClosedFormError::InvalidDegree(d));
    }
    let SurvivorLaw { beta, alpha, c } = survivor_law(params);
    let probs = match d {
        2 => vec![
            beta,
            2.0 * alpha * c / (2.0 - c),
            alpha * c * c / ((1.0 - c) * (2.0 - c)),
        ],
        3 => vec![
            beta,
            3.0 * alpha * c / (3.0 - c),
            6.0 * alpha * c * c / ((3.0 - 2.0 * c) * (3.0 - c)),
            2.0 * alpha * c * c * c / ((1.0 - c) * (3.0 - 2.0 * c) * (3.0 - c)),
        ],
        _ => offspring_series(beta, alpha, c, d),
    };
    Ok(OffspringPmf { d, probs })
}

/// Remainder of the survivor-count series below which summation stops.
const SERIES_TAIL: f64 = 1e-16;

/// `p_k = alpha sum_{n>=1} c^n P(k distinct labels | n survivors)`.
fn offspring_series(beta: f64, alpha: f64, c: f64, d: u32) -> Vec<f64> {
    let d = d as usize;
    let mut probs = vec![0.0; d + 1];
    probs[0] = beta;
    // occupancy[k] = P(k distinct labels after n draws)
    let mut occupancy = vec![0.0; d + 1];
    occupancy[0] = 1.0;
    let mut weight = alpha;
    let mut n = 0u64;
    loop {
        n += 1;
        weight *= c;
        occupancy_step(&mut occupancy, d);
        for (k, q) in occupancy.iter().enumerate().skip(1) {
            probs[k] += weight * q;
        }
        // sum_{m>n} alpha c^m
        let remainder = weight * c / (1.0 - c);
        if remainder < SERIES_TAIL || weight == 0.0 || n > 1_000_000 {
            break;
        }
    }
    probs
}

/// One more uniform draw among `d` labels.
fn occupancy_step(occupancy: &mut [f64], d: usize) {
    let df = d as f64;
    for k in (1..=d).rev() {
        occupancy[k] =
            occupancy[k] * (k as f64 / df) + occupancy[k - 1] * ((d - k + 1) as f64 / df);
    }
    occupancy[0] = 0.0;
}

/// Number of surjections from an `n`-set onto a `k`-set, by
/// inclusion-exclusion: `sum_{j=0}^{k} (-1)^j C(k,j) (k-j)^n`.
pub fn surjections(n: u32, k: u32) -> BigInt {
    let mut total = BigInt::zero();
    let mut binom = BigInt::one();
    for j in 0..=k {
        let term = &binom * num_traits::pow(BigInt::from(k - j), n as usize);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
    }
    total
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut b = BigInt::one();
    for j in 0..k {
        b = b * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    b
}

/// Exact `p_{n,k} = C(d,k) T(n,k) / d^n` for `k = 0..=min(n, d)`.
/// `n = 0` gives the point mass at `k = 0`.
pub fn label_distribution_exact(n: u32, d: u32) -> Vec<BigRational> {
    if n == 0 {
        return vec![BigRational::one()];
    }
    let top = n.min(d);
    let denom = num_traits::pow(BigInt::from(d), n as usize);
    (0..=top)
        .map(|k| {
            if k == 0 {
                BigRational::zero()
            } else {
                BigRational::new(binomial(d, k) * surjections(n, k), denom.clone())
            }
        })
        .collect()
}

/// Largest `n` evaluated through exact integers; beyond it the occupancy
/// recurrence (all terms positive) takes over.
const EXACT_LABEL_LIMIT: u32 = 64;

/// Probability of exactly `k` distinct labels when `n` items each receive one
/// of `d` labels uniformly; entry `k` of the result, `k = 0..=min(n, d)`.
pub fn label_distribution(n: u32, d: u32) -> Vec<f64> {
    if n <= EXACT_LABEL_LIMIT {
        return label_distribution_exact(n, d)
            .iter()
            .map(|r| r.to_f64().unwrap_or(0.0))
            .collect();
    }
    let du = d as usize;
    let mut occupancy = vec![0.0; du + 1];
    occupancy[0] = 1.0;
    for _ in 0..n {
        occupancy_step(&mut occupancy, du);
    }
    occupancy.truncate(n.min(d) as usize + 1);
    occupancy
}
