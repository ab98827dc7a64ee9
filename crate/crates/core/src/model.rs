//! Topologies, regimes and the tri-state mean extinction time.

use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::params::ModelParams;

/// How catastrophe survivors are redistributed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    /// Survivors stay in their colony.
    NoDispersion,
    /// Survivors choose among `d >= 2` child sites; collisions leave one colony.
    TreeDispersion(u32),
    /// Every survivor founds a new colony (the `d = infinity` limit).
    FreeDispersion,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::NoDispersion => f.write_str("A"),
            Topology::TreeDispersion(d) => write!(f, "d{d}"),
            Topology::FreeDispersion => f.write_str("star"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Extinction is certain and its mean is finite.
    SubcriticalFiniteMean,
    /// Extinction is certain but the mean time is infinite.
    CriticalInfiniteMean,
    /// The population survives with positive probability.
    SupercriticalSurvival,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanExtinction {
    Finite(f64),
    /// Certain extinction with infinite mean (critical boundary).
    Infinite,
    /// Survival has positive probability, so the mean is infinite too.
    UndefinedInfinite,
}

impl MeanExtinction {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            MeanExtinction::Finite(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, MeanExtinction::Finite(_))
    }
}

/// Critical survival probability for `topo` at growth rate `lambda`, as a
/// pair `(num, den)` of affine coefficients: the threshold is
/// `num / (num + slope * lambda)`. `None` for the no-dispersion model.
fn threshold_coefficients(topo: Topology) -> Option<(u64, u64)> {
    match topo {
        Topology::NoDispersion => None,
        Topology::TreeDispersion(d) => {
            debug_assert!(d >= 2, "tree dispersion needs d >= 2");
            Some((d as u64, d.saturating_sub(1) as u64))
        }
        Topology::FreeDispersion => Some((1, 1)),
    }
}

/// Threshold `p*` in floating point: `d / (d + (d-1) lambda)` on trees,
/// `1 / (1 + lambda)` for free dispersion.
pub fn threshold(topo: Topology, lambda: f64) -> Option<f64> {
    threshold_coefficients(topo).map(|(a, b)| a as f64 / (a as f64 + b as f64 * lambda))
}

/// Exact sign of `p - p*`: `Less` means subcritical.
pub fn compare_to_threshold(params: &ModelParams, topo: Topology) -> Option<Ordering> {
    let (a, b) = threshold_coefficients(topo)?;
    let a = BigRational::from_integer(BigInt::from(a));
    let b = BigRational::from_integer(BigInt::from(b));
    let lambda = params.lambda_scalar().to_rational();
    let p = params.p_scalar().to_rational();
    // p < a / (a + b lambda)  <=>  p (a + b lambda) < a
    Some((p * (a.clone() + b * lambda)).cmp(&a))
}

/// Which of the three phase regions `(params, topo)` lies in. The comparison
/// is exact for both fractional and float inputs.
pub fn classify(params: &ModelParams, topo: Topology) -> Regime {
    match compare_to_threshold(params, topo) {
        None | Some(Ordering::Less) => Regime::SubcriticalFiniteMean,
        Some(Ordering::Equal) => Regime::CriticalInfiniteMean,
        Some(Ordering::Greater) => Regime::SupercriticalSurvival,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Scalar;

    fn frac(n: i128, d: i128) -> Scalar {
        Scalar::ratio(n, d).unwrap()
    }

    #[test]
    fn boundary_examples() {
        let half = frac(1, 2);
        let fifth = frac(1, 5);
        let at = |l, p| ModelParams::new(l, p).unwrap();
        assert_eq!(
            classify(&at(half, Scalar::Float(0.5)), Topology::TreeDispersion(2)),
            Regime::SubcriticalFiniteMean
        );
        assert_eq!(
            classify(&at(half, frac(4, 5)), Topology::TreeDispersion(2)),
            Regime::CriticalInfiniteMean
        );
        assert_eq!(
            classify(&at(half, Scalar::Float(0.81)), Topology::TreeDispersion(2)),
            Regime::SupercriticalSurvival
        );
        assert_eq!(
            classify(&at(fifth, frac(15, 17)), Topology::TreeDispersion(3)),
            Regime::CriticalInfiniteMean
        );
        assert_eq!(
            classify(
                &at(Scalar::Float(3.0), Scalar::Float(0.9)),
                Topology::NoDispersion
            ),
            Regime::SubcriticalFiniteMean
        );
        assert_eq!(
            classify(
                &at(Scalar::Float(1.0), Scalar::Float(0.5)),
                Topology::FreeDispersion
            ),
            Regime::CriticalInfiniteMean
        );
    }

    #[test]
    fn float_inputs_compare_exactly() {
        // 0.8 as a float is slightly above 4/5.
        let p = ModelParams::new(0.5, 0.8).unwrap();
        assert_eq!(
            classify(&p, Topology::TreeDispersion(2)),
            Regime::SupercriticalSurvival
        );
        let p = ModelParams::new(0.5, "0.8".parse::<Scalar>().unwrap()).unwrap();
        assert_eq!(
            classify(&p, Topology::TreeDispersion(2)),
            Regime::CriticalInfiniteMean
        );
    }

    #[test]
    fn thresholds_decrease_with_d() {
        for i in 1..=400 {
            let lambda = i as f64 * 0.05;
            let t2 = threshold(Topology::TreeDispersion(2), lambda).unwrap();
            let t3 = threshold(Topology::TreeDispersion(3), lambda).unwrap();
            let t4 = threshold(Topology::TreeDispersion(4), lambda).unwrap();
            let ts = threshold(Topology::FreeDispersion, lambda).unwrap();
            // d / (d + (d-1) lambda) = 1 / (1 + (1 - 1/d) lambda)
            assert!(t2 > t3 && t3 > t4 && t4 > ts, "lambda = {lambda}");
        }
    }

    #[test]
    fn regime_flips_at_threshold() {
        let eps = 1e-12;
        for i in 1..=50 {
            let lambda = i as f64 * 0.2;
            for topo in [
                Topology::TreeDispersion(2),
                Topology::TreeDispersion(3),
                Topology::FreeDispersion,
            ] {
                let t = threshold(topo, lambda).unwrap();
                let below = ModelParams::new(lambda, t - eps).unwrap();
                let above = ModelParams::new(lambda, t + eps).unwrap();
                assert_eq!(classify(&below, topo), Regime::SubcriticalFiniteMean);
                assert_eq!(classify(&above, topo), Regime::SupercriticalSurvival);
            }
        }
    }
}
