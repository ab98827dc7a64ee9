//! Closed intervals with outward rounding.
//!
//! Arithmetic results are rounded outward: the exact rounding error of each
//! `+ - * /` is recovered (two-sum or fused multiply-add) and the endpoint is
//! moved one ulp only when the exact value lies outside it. Elementary functions come
//! from `libm` (musl), whose documented error is below one ulp; their results
//! are pushed out by [`LIBM_ULPS`].

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

/// Outward ulps applied after each `libm` call.
pub const LIBM_ULPS: u32 = 2;

#[inline]
pub(crate) fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
pub(crate) fn up(x: f64) -> f64 {
    x.next_up()
}

/// Exact rounding error of `a + b`: `(s, e)` with `s + e == a + b`.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Pushes a rounded result down only when the exact value lies below it.
#[inline]
fn round_down(s: f64, err: f64) -> f64 {
    if err < 0.0 || !s.is_finite() {
        down(s)
    } else {
        s
    }
}

#[inline]
fn round_up(s: f64, err: f64) -> f64 {
    if err > 0.0 || !s.is_finite() {
        up(s)
    } else {
        s
    }
}

#[inline]
fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    round_down(s, e)
}

#[inline]
fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    round_up(s, e)
}

#[inline]
fn mul_down(a: f64, b: f64) -> f64 {
    let s = a * b;
    if s == 0.0 || !s.is_finite() || s.abs() < f64::MIN_POSITIVE * 4.0 {
        return down(s);
    }
    round_down(s, libm::fma(a, b, -s))
}

#[inline]
fn mul_up(a: f64, b: f64) -> f64 {
    let s = a * b;
    if s == 0.0 || !s.is_finite() || s.abs() < f64::MIN_POSITIVE * 4.0 {
        return up(s);
    }
    round_up(s, libm::fma(a, b, -s))
}

/// `a / b` rounded down, `b != 0`.
#[inline]
fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q == 0.0 || !q.is_finite() || q.abs() < f64::MIN_POSITIVE * 4.0 {
        return down(q);
    }
    // a - q b, exact; its sign relative to b says on which side q lies.
    let r = libm::fma(-q, b, a);
    round_down(q, if b > 0.0 { r } else { -r })
}

#[inline]
fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q == 0.0 || !q.is_finite() || q.abs() < f64::MIN_POSITIVE * 4.0 {
        return up(q);
    }
    let r = libm::fma(-q, b, a);
    round_up(q, if b > 0.0 { r } else { -r })
}

fn down_by(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

fn up_by(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

/// `[lo, hi]` containing the true value of some real quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedInterval {
    lo: f64,
    hi: f64,
}

impl CertifiedInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        CertifiedInterval { lo, hi }
    }

    /// Degenerate interval for an exactly known float.
    pub fn point(x: f64) -> Self {
        CertifiedInterval { lo: x, hi: x }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        self.lo + 0.5 * (self.hi - self.lo)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// True when every point of `self` is strictly below every point of `other`.
    pub fn strictly_below(&self, other: &CertifiedInterval) -> bool {
        self.hi < other.lo
    }

    pub fn overlaps(&self, other: &CertifiedInterval) -> bool {
        !(self.strictly_below(other) || other.strictly_below(self))
    }

    /// Image under an increasing function evaluated with at most `ulps`
    /// error at each endpoint.
    pub fn map_increasing(&self, f: impl Fn(f64) -> f64, ulps: u32) -> Self {
        CertifiedInterval::new(down_by(f(self.lo), ulps), up_by(f(self.hi), ulps))
    }

    pub fn exp(&self) -> Self {
        let r = self.map_increasing(libm::exp, LIBM_ULPS);
        CertifiedInterval::new(r.lo.max(0.0), r.hi)
    }

    pub fn expm1(&self) -> Self {
        self.map_increasing(libm::expm1, LIBM_ULPS)
    }

    pub fn ln1p(&self) -> Self {
        self.map_increasing(libm::log1p, LIBM_ULPS)
    }

    /// `sqrt` is correctly rounded, one ulp suffices.
    pub fn sqrt(&self) -> Self {
        CertifiedInterval::new(
            down(libm::sqrt(self.lo.max(0.0))).max(0.0),
            up(libm::sqrt(self.hi)),
        )
    }

    /// Widens both ends by the relative amount `rel`, for values computed by
    /// a routine with a known relative error bound.
    pub fn widen_rel(&self, rel: f64) -> Self {
        let lo = self.lo - self.lo.abs() * rel;
        let hi = self.hi + self.hi.abs() * rel;
        CertifiedInterval::new(down(lo), up(hi))
    }

    pub fn hull(&self, other: &CertifiedInterval) -> Self {
        CertifiedInterval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }
}

impl fmt::Display for CertifiedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl From<f64> for CertifiedInterval {
    fn from(x: f64) -> Self {
        CertifiedInterval::point(x)
    }
}

impl Add for CertifiedInterval {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        CertifiedInterval::new(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }
}

impl Sub for CertifiedInterval {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        CertifiedInterval::new(add_down(self.lo, -rhs.hi), add_up(self.hi, -rhs.lo))
    }
}

impl Neg for CertifiedInterval {
    type Output = Self;
    fn neg(self) -> Self {
        CertifiedInterval::new(-self.hi, -self.lo)
    }
}

impl Mul for CertifiedInterval {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.lo >= 0.0 && rhs.lo >= 0.0 {
            return CertifiedInterval::new(mul_down(self.lo, rhs.lo), mul_up(self.hi, rhs.hi));
        }
        let pairs = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let lo = pairs
            .iter()
            .map(|&(a, b)| mul_down(a, b))
            .fold(f64::INFINITY, f64::min);
        let hi = pairs
            .iter()
            .map(|&(a, b)| mul_up(a, b))
            .fold(f64::NEG_INFINITY, f64::max);
        CertifiedInterval::new(lo, hi)
    }
}

impl Div for CertifiedInterval {
    type Output = Self;
    /// The divisor must not contain zero.
    fn div(self, rhs: Self) -> Self {
        debug_assert!(
            rhs.lo > 0.0 || rhs.hi < 0.0,
            "division by interval containing 0"
        );
        let pairs = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let lo = pairs
            .iter()
            .map(|&(a, b)| div_down(a, b))
            .fold(f64::INFINITY, f64::min);
        let hi = pairs
            .iter()
            .map(|&(a, b)| div_up(a, b))
            .fold(f64::NEG_INFINITY, f64::max);
        CertifiedInterval::new(lo, hi)
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for CertifiedInterval {
            type Output = Self;
            fn $m(self, rhs: f64) -> Self {
                $tr::$m(self, CertifiedInterval::point(rhs))
            }
        }
        impl $tr<CertifiedInterval> for f64 {
            type Output = CertifiedInterval;
            fn $m(self, rhs: CertifiedInterval) -> CertifiedInterval {
                $tr::$m(CertifiedInterval::point(self), rhs)
            }
        }
    )*};
}

scalar_ops!(Add add, Sub sub, Mul mul, Div div);
