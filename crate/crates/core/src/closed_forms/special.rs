//! Increasing auxiliary functions used by the mean-time formulas, with
//! certified interval versions.
//!
//! * `chi(u)   = -ln(1 - u) / u`,           `u` in `[0, 1)`
//! * `psi(y)   = atanh(sqrt y) / sqrt y`,   `y` in `[0, 1)`
//!
//! Both equal `1` at the origin and blow up at `1`. The `*_m1` variants
//! return the value minus one without cancellation.

use crate::interval::CertifiedInterval;

const EPS: f64 = f64::EPSILON;

/// Sum of `sum_{n>=1} y^n / (scale n + 1)` with `y < 1/2`. Returns the sum and
/// a relative error bound covering truncation and rounding.
///
/// `y^n` by repeated multiplication carries at most `n` roundings, so term
/// `n` is off by `(n + 1) u` relative; the running sum is compensated
/// (Neumaier), which keeps its own error to a couple of `u`.
fn positive_series(y: f64, scale: f64) -> (f64, f64) {
    if y == 0.0 {
        return (0.0, 0.0);
    }
    let u = 0.5 * EPS;
    let mut pow = y;
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut weighted = 0.0;
    let mut n = 1.0;
    loop {
        let term = pow / (scale * n + 1.0);
        let t = sum + term;
        comp += if sum >= term {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
        weighted += (n + 1.0) * term;
        pow *= y;
        n += 1.0;
        // Remaining terms are below pow / (scale n + 1) / (1 - y) <= 2 pow.
        let rest = 2.0 * pow / (scale * n + 1.0);
        if rest <= sum * (0.25 * EPS) || pow == 0.0 {
            let total = sum + comp;
            let abs_err = 1.01 * u * weighted + 3.0 * u * total + rest;
            return (total, abs_err / total);
        }
    }
}

/// `chi(u) - 1` with a relative error bound.
fn chi_m1_with_err(u: f64) -> (f64, f64) {
    if u < 0.5 {
        positive_series(u, 1.0)
    } else {
        // 1 - u is exact here.
        (-libm::log(1.0 - u) / u - 1.0, 16.0 * EPS)
    }
}

/// `psi(y) - 1` with a relative error bound.
fn psi_m1_with_err(y: f64) -> (f64, f64) {
    if y < 0.5 {
        positive_series(y, 2.0)
    } else {
        // Evaluated on the float sqrt(y); the interval caller passes
        // bracketing arguments so the sqrt rounding is accounted for there.
        let x = libm::sqrt(y);
        (atanh_over_x(x) - 1.0, 32.0 * EPS)
    }
}

fn atanh_over_x(x: f64) -> f64 {
    // atanh(x) = ln((1 + x)/(1 - x)) / 2, with 1 - x exact for x >= 1/2.
    0.5 * libm::log1p(2.0 * x / (1.0 - x)) / x
}

pub fn chi_m1(u: f64) -> f64 {
    chi_m1_with_err(u).0
}

pub fn chi(u: f64) -> f64 {
    1.0 + chi_m1(u)
}

pub fn psi_m1(y: f64) -> f64 {
    psi_m1_with_err(y).0
}

fn chi_m1_lower(u: f64) -> f64 {
    let (v, e) = chi_m1_with_err(u.max(0.0));
    CertifiedInterval::point(v).widen_rel(e).lo().max(0.0)
}

fn psi_m1_lower(y: f64) -> f64 {
    let y = y.max(0.0);
    let v = if y < 0.5 {
        let (v, e) = positive_series(y, 2.0);
        CertifiedInterval::point(v).widen_rel(e).lo()
    } else {
        let x = libm::sqrt(y).next_down();
        CertifiedInterval::point(atanh_over_x(x) - 1.0)
            .widen_rel(32.0 * EPS)
            .lo()
    };
    v.max(0.0)
}

/// Enclosure of `chi - 1` over `u`, with an infinite upper end when `u`
/// can reach 1. The lower end stays finite as long as `u.lo() < 1`.
pub fn chi_m1_bracket(u: CertifiedInterval) -> CertifiedInterval {
    if u.lo() >= 1.0 {
        return CertifiedInterval::new(f64::INFINITY, f64::INFINITY);
    }
    let lo = chi_m1_lower(u.lo());
    let hi = if u.hi() >= 1.0 {
        f64::INFINITY
    } else {
        let (v, e) = chi_m1_with_err(u.hi());
        CertifiedInterval::point(v).widen_rel(e).hi()
    };
    CertifiedInterval::new(lo, hi)
}

/// Enclosure of `psi - 1` over `y`, infinite above when `y` can reach 1.
pub fn psi_m1_bracket(y: CertifiedInterval) -> CertifiedInterval {
    if y.lo() >= 1.0 {
        return CertifiedInterval::new(f64::INFINITY, f64::INFINITY);
    }
    let lo = psi_m1_lower(y.lo());
    let hi = if y.hi() >= 1.0 {
        f64::INFINITY
    } else if y.hi() < 0.5 {
        let (v, e) = positive_series(y.hi(), 2.0);
        CertifiedInterval::point(v).widen_rel(e).hi()
    } else {
        let x = libm::sqrt(y.hi()).next_up();
        if x >= 1.0 {
            f64::INFINITY
        } else {
            CertifiedInterval::point(atanh_over_x(x) - 1.0)
                .widen_rel(32.0 * EPS)
                .hi()
        }
    };
    CertifiedInterval::new(lo, hi)
}

fn finite(c: CertifiedInterval) -> Option<CertifiedInterval> {
    c.hi().is_finite().then_some(c)
}

/// Interval image of `chi - 1`. `None` if the argument can reach 1.
pub fn chi_m1_interval(u: CertifiedInterval) -> Option<CertifiedInterval> {
    finite(chi_m1_bracket(u))
}

pub fn chi_interval(u: CertifiedInterval) -> Option<CertifiedInterval> {
    chi_m1_interval(u).map(|c| 1.0 + c)
}

/// Interval image of `psi - 1`. `None` if the argument can reach 1.
pub fn psi_m1_interval(y: CertifiedInterval) -> Option<CertifiedInterval> {
    finite(psi_m1_bracket(y))
}
