//! The q-product `f(p, lambda) = prod_{k>=0} (1 + lambda p^k)`.
//!
//! Truncations are accumulated as a sum of `ln(1 + lambda p^k)` in interval
//! arithmetic. Two certified tails close the bracket:
//!
//! * the `(a, b)` tail `exp((a/b) p^M)`, valid whenever `p < a / (b lambda + a)`,
//! * the geometric tail `exp(lambda p^(M+1) / (1 - p))`, valid for every `p`.
//!
//! The first one is the contract used by the comparator; the second one is
//! never looser and is what the no-dispersion mean uses.

use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::interval::CertifiedInterval;
use crate::model::{compare_to_threshold, Topology};
use crate::params::ModelParams;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QProductError {
    #[error("tail bound (a={a}, b={b}) needs p < a/(b*lambda + a)")]
    TailPrecondition { a: u32, b: u32 },
    #[error("log series needs lambda*p < 1 - p")]
    SeriesPrecondition,
}

/// Parameters `(a, b)` of the truncation tail `exp((a/b) p^M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailBound {
    pub a: u32,
    pub b: u32,
}

impl TailBound {
    /// Matches the `d = 2` subcritical region `p < 2/(lambda + 2)`.
    pub const TREE2: TailBound = TailBound { a: 2, b: 1 };
    /// Matches the `d = 3` subcritical region `p < 3/(2 lambda + 3)`.
    pub const TREE3: TailBound = TailBound { a: 3, b: 2 };
    /// Matches the free-dispersion region `p < 1/(lambda + 1)`.
    pub const FREE: TailBound = TailBound { a: 1, b: 1 };

    /// Default tail for a dispersion topology.
    pub fn for_topology(topo: Topology) -> Option<TailBound> {
        match topo {
            Topology::TreeDispersion(2) => Some(Self::TREE2),
            Topology::TreeDispersion(3) => Some(Self::TREE3),
            Topology::FreeDispersion => Some(Self::FREE),
            _ => None,
        }
    }

    /// Exact test of `p < a / (b lambda + a)`.
    pub fn admits(&self, params: &ModelParams) -> bool {
        let a = BigRational::from_integer(BigInt::from(self.a));
        let b = BigRational::from_integer(BigInt::from(self.b));
        let lambda = params.lambda_scalar().to_rational();
        let p = params.p_scalar().to_rational();
        p * (b * lambda + a.clone()) < a
    }

    /// Upper bound on `ln(f / P_M)`, namely `(a/b) p^M`.
    fn log_tail(&self, p_pow_m: CertifiedInterval) -> f64 {
        (p_pow_m * (self.a as f64) / (self.b as f64)).hi()
    }
}

/// Terms below this fraction of the running sum go to a separate accumulator.
const SMALL_RATIO: f64 = 1.0 / (1u64 << 20) as f64;

/// Running enclosure of `ln prod_{k=0}^{M} (1 + lambda p^k)`, extendable in `M`.
#[derive(Debug, Clone)]
pub struct LogProduct {
    lambda: CertifiedInterval,
    p: CertifiedInterval,
    one_minus_p: CertifiedInterval,
    /// `ln(1 + lambda)`, the `k = 0` factor.
    head: CertifiedInterval,
    /// `sum_{k=1}^{m} ln(1 + lambda p^k)` over the terms that still move it.
    rest: CertifiedInterval,
    /// Terms far below `rest`, kept apart so that adding them does not
    /// round `rest` outward once per term.
    small: CertifiedInterval,
    /// `p^m`.
    p_pow_m: CertifiedInterval,
    m: u32,
}

impl LogProduct {
    /// Starts at `M = 0`.
    pub fn new(params: &ModelParams) -> Self {
        let lambda = params.lambda_scalar().enclosure();
        let p = params.p_scalar().enclosure();
        LogProduct {
            lambda,
            p,
            one_minus_p: 1.0 - p,
            head: lambda.ln1p(),
            rest: CertifiedInterval::point(0.0),
            small: CertifiedInterval::point(0.0),
            p_pow_m: CertifiedInterval::point(1.0),
            m: 0,
        }
    }

    pub fn terms(&self) -> u32 {
        self.m
    }

    /// Adds factors until the last included index is `m`.
    pub fn extend_to(&mut self, m: u32) {
        while self.m < m {
            self.p_pow_m = self.p_pow_m * self.p;
            self.m += 1;
            if self.p_pow_m.hi() == 0.0 {
                // Remaining factors are exactly 1 in floating point and
                // p^m stays 0; only the index moves.
                self.m = m;
                break;
            }
            let x = self.lambda * self.p_pow_m;
            let term = CertifiedInterval::new(x.lo().max(0.0), x.hi()).ln1p();
            if term.hi() < self.rest.lo() * SMALL_RATIO {
                self.small = self.small + term;
            } else {
                self.rest = self.rest + term;
            }
        }
    }

    /// `sum_{k=1}^{m} ln(1 + lambda p^k)`.
    fn sum(&self) -> CertifiedInterval {
        self.rest + self.small
    }

    /// `ln P_M` where `P_M` is the truncated product.
    pub fn log_truncated(&self) -> CertifiedInterval {
        self.head + self.sum()
    }

    /// Upper bound on `ln(f / P_M)` from the geometric tail
    /// `sum_{k>M} lambda p^k = lambda p^(M+1) / (1-p)`.
    pub fn geometric_log_tail(&self) -> f64 {
        (self.lambda * self.p_pow_m * self.p / self.one_minus_p).hi()
    }

    fn log_bounds(&self, log_tail: f64) -> (CertifiedInterval, CertifiedInterval) {
        let lo = self.log_truncated();
        let hi = lo + CertifiedInterval::point(log_tail);
        (lo, hi)
    }

    fn exp_bounds(&self, log_tail: f64) -> CertifiedInterval {
        let (lo, hi) = self.log_bounds(log_tail);
        CertifiedInterval::new(lo.exp().lo(), hi.exp().hi())
    }

    /// Enclosure of `f` using the `(a, b)` tail. The caller checks
    /// [`TailBound::admits`].
    pub fn product_with_tail(&self, tail: TailBound) -> CertifiedInterval {
        self.exp_bounds(tail.log_tail(self.p_pow_m))
    }

    pub fn product_geometric(&self) -> CertifiedInterval {
        self.exp_bounds(self.geometric_log_tail())
    }

    /// Enclosure of `(f - 1)/lambda - 1`, the no-dispersion mean minus one,
    /// given an upper bound on `ln(f / P_M)`.
    ///
    /// Uses `f = (1 + lambda) exp(S)` with `S = sum_{k>=1} ln(1 + lambda p^k)`,
    /// so `(f - 1)/lambda - 1 = (1 + lambda)/lambda * expm1(S)` with no
    /// cancellation for small `p` or `lambda`.
    pub fn mean_excess(&self, log_tail: f64) -> CertifiedInterval {
        let s_lo = self.sum();
        let s_hi = s_lo + CertifiedInterval::point(log_tail);
        let s = CertifiedInterval::new(s_lo.lo().max(0.0), s_hi.hi());
        let factor = (1.0 + self.lambda) / self.lambda;
        factor * s.expm1()
    }

    /// Upper bound on `ln(f / P_M)` for the `(a, b)` tail.
    pub fn ratio_log_tail(&self, tail: TailBound) -> f64 {
        tail.log_tail(self.p_pow_m)
    }
}

/// Certified `[P_M, exp((a/b) p^M) P_M]` with `P_M = prod_{k=0}^{M} (1 + lambda p^k)`.
pub fn product_bounds(
    params: &ModelParams,
    tail: TailBound,
    m: u32,
) -> Result<CertifiedInterval, QProductError> {
    if !tail.admits(params) {
        return Err(QProductError::TailPrecondition {
            a: tail.a,
            b: tail.b,
        });
    }
    let mut acc = LogProduct::new(params);
    acc.extend_to(m);
    Ok(acc.product_with_tail(tail))
}

/// Certified bracket of `f` with the geometric tail, valid for every
/// `p` in `(0, 1)`.
pub fn product_bounds_geometric(params: &ModelParams, m: u32) -> CertifiedInterval {
    let mut acc = LogProduct::new(params);
    acc.extend_to(m);
    acc.product_geometric()
}

/// Certified lower bound `P_M <= f`, available for every `p`.
pub fn product_lower(params: &ModelParams, m: u32) -> f64 {
    let mut acc = LogProduct::new(params);
    acc.extend_to(m);
    acc.log_truncated().exp().lo()
}

/// `f` through its logarithmic series:
/// `(1 + lambda) exp(sum_{n=1}^{terms} (-1)^(n+1)/n * (lambda p)^n / (1 - p^n))`.
///
/// The series converges absolutely only when `lambda p < 1 - p`. Plain
/// floating point, used to cross-check [`product_bounds`].
pub fn product_log_series(params: &ModelParams, terms: u32) -> Result<f64, QProductError> {
    if compare_to_threshold(params, Topology::FreeDispersion) != Some(Ordering::Less) {
        return Err(QProductError::SeriesPrecondition);
    }
    let lambda = params.lambda();
    let p = params.p();
    let ln_p = libm::log(p);
    let lp = lambda * p;
    let mut pow = 1.0;
    let mut sum = 0.0;
    for n in 1..=terms {
        pow *= lp;
        let one_minus_pn = -libm::expm1(n as f64 * ln_p);
        let term = pow / (n as f64 * one_minus_pn);
        if n % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok((1.0 + lambda) * libm::exp(sum))
}

/// Bound on the absolute error of the truncated log series after `terms`
/// terms: `(lambda p)^(N+1) / ((N+1)(1-p)(1 - lambda p))`.
pub fn log_series_tail_bound(params: &ModelParams, terms: u32) -> f64 {
    let lp = params.lambda() * params.p();
    let n = terms as f64 + 1.0;
    libm::pow(lp, n) / (n * (1.0 - params.p()) * (1.0 - lp))
}
