//! Mean extinction times of the four models.
//!
//! Every formula is rearranged as `1 + excess` with an excess built from
//! positive terms only:
//!
//! * tree, `d = 2`: `u = lambda p^2 (lambda+1) / ((1-p)(lambda p+2))`,
//!   `E - 1 = [p(lambda+1) + (lambda p+1)(chi(u) - 1)] / (1-p)`
//! * tree, `d = 3`: `A = 3 - 3p - lambda p`, `y = (g/A)^2`,
//!   `E - 1 = 3p(lambda+1)/A + (2 lambda p+3)/A * (psi(y) - 1)`
//! * free: `x = lambda p/(1-p)`, `E - 1 = (lambda+1) p/(1-p) * chi(x)`
//!
//! with `chi(u) = -ln(1-u)/u` and `psi(y) = atanh(sqrt y)/sqrt y`. These are
//! algebraically identical to the logarithmic closed forms and stay accurate
//! as `p -> 0`. The excesses are computed as certified intervals; the point
//! values are their midpoints.

use super::special::{chi_m1_bracket, psi_m1_bracket};
use crate::interval::CertifiedInterval;
use crate::model::{classify, threshold, MeanExtinction, Regime, Topology};
use crate::params::ModelParams;
use crate::qproduct::LogProduct;

/// Inside this relative distance below a critical threshold the mean is
/// reported as infinite.
pub const BOUNDARY_REL: f64 = 1e-12;

/// The non-finite outcome for `(params, topo)`, if any.
pub(crate) fn non_finite(params: &ModelParams, topo: Topology) -> Option<MeanExtinction> {
    match classify(params, topo) {
        Regime::SupercriticalSurvival => Some(MeanExtinction::UndefinedInfinite),
        Regime::CriticalInfiniteMean => Some(MeanExtinction::Infinite),
        Regime::SubcriticalFiniteMean => {
            let t = threshold(topo, params.lambda())?;
            ((t - params.p()) <= BOUNDARY_REL * t).then_some(MeanExtinction::Infinite)
        }
    }
}

struct Inputs {
    l: CertifiedInterval,
    p: CertifiedInterval,
    lp: CertifiedInterval,
    one_m_p: CertifiedInterval,
}

impl Inputs {
    fn new(params: &ModelParams) -> Self {
        let l = params.lambda_scalar().enclosure();
        let p = params.p_scalar().enclosure();
        Inputs {
            l,
            p,
            lp: l * p,
            one_m_p: 1.0 - p,
        }
    }
}

/// Enclosure of `E[tau_2] - 1` for a subcritical point, unbounded above when
/// rounding cannot keep the log argument away from its pole.
pub(crate) fn tree2_excess_bracket(params: &ModelParams) -> CertifiedInterval {
    let Inputs { l, p, lp, one_m_p } = Inputs::new(params);
    let u = lp * p * (l + 1.0) / (one_m_p * (lp + 2.0));
    let chi_m1 = chi_m1_bracket(u);
    (p * (l + 1.0) + (lp + 1.0) * chi_m1) / one_m_p
}

/// Certified `E[tau_2] - 1`; `None` when the mean is not finite.
pub fn tree2_excess(params: &ModelParams) -> Option<CertifiedInterval> {
    if non_finite(params, Topology::TreeDispersion(2)).is_some() {
        return None;
    }
    finite(tree2_excess_bracket(params))
}

/// Squared auxiliary function
/// `g^2 = lambda^2 p^3 (lambda+1)(6 + lambda p - 3p) / ((lambda p + 3)(lambda p + 1))`.
fn g_squared(i: &Inputs) -> CertifiedInterval {
    let Inputs { l, p, lp, .. } = *i;
    lp * lp * p * (l + 1.0) * (6.0 + lp - 3.0 * p) / ((lp + 3.0) * (lp + 1.0))
}

pub(crate) fn tree3_excess_bracket(params: &ModelParams) -> CertifiedInterval {
    let inputs = Inputs::new(params);
    let Inputs { l, p, lp, one_m_p } = inputs;
    let a = 3.0 * one_m_p - lp;
    if a.lo() <= 0.0 {
        return CertifiedInterval::new(0.0, f64::INFINITY);
    }
    let y = g_squared(&inputs) / (a * a);
    let psi_m1 = psi_m1_bracket(y);
    3.0 * p * (l + 1.0) / a + (2.0 * lp + 3.0) / a * psi_m1
}

/// Certified `E[tau_3] - 1`; `None` when the mean is not finite.
pub fn tree3_excess(params: &ModelParams) -> Option<CertifiedInterval> {
    if non_finite(params, Topology::TreeDispersion(3)).is_some() {
        return None;
    }
    finite(tree3_excess_bracket(params))
}

pub(crate) fn free_excess_bracket(params: &ModelParams) -> CertifiedInterval {
    let Inputs { l, p, lp, one_m_p } = Inputs::new(params);
    let x = lp / one_m_p;
    let chi = 1.0 + chi_m1_bracket(x);
    (l + 1.0) * p / one_m_p * chi
}

/// Certified `E[tau_*] - 1`; `None` when the mean is not finite.
pub fn free_excess(params: &ModelParams) -> Option<CertifiedInterval> {
    if non_finite(params, Topology::FreeDispersion).is_some() {
        return None;
    }
    finite(free_excess_bracket(params))
}

fn finite(c: CertifiedInterval) -> Option<CertifiedInterval> {
    c.hi().is_finite().then_some(c)
}

fn finish(
    params: &ModelParams,
    topo: Topology,
    excess: Option<CertifiedInterval>,
) -> MeanExtinction {
    if let Some(nf) = non_finite(params, topo) {
        return nf;
    }
    match excess {
        Some(e) => MeanExtinction::Finite(1.0 + e.mid()),
        None => MeanExtinction::Infinite,
    }
}

/// `E[tau_2]`: finite below `p = 2/(lambda+2)`, infinite at it, undefined
/// (positive survival) above.
pub fn mean_time_tree2(params: &ModelParams) -> MeanExtinction {
    finish(params, Topology::TreeDispersion(2), tree2_excess(params))
}

/// `E[tau_3]`: finite below `p = 3/(2 lambda+3)`.
pub fn mean_time_tree3(params: &ModelParams) -> MeanExtinction {
    finish(params, Topology::TreeDispersion(3), tree3_excess(params))
}

/// `E[tau_*] = 1 - (lambda+1)/lambda * ln(1 - lambda p/(1-p))`, finite below
/// `p = 1/(lambda+1)`.
pub fn mean_time_free(params: &ModelParams) -> MeanExtinction {
    finish(params, Topology::FreeDispersion, free_excess(params))
}

/// Certified `E[tau_A] = (f(p, lambda) - 1)/lambda` from the first `terms`
/// factors of the product and the geometric tail bound. Always finite.
pub fn mean_time_no_dispersion(params: &ModelParams, terms: u32) -> CertifiedInterval {
    let mut acc = LogProduct::new(params);
    acc.extend_to(terms);
    1.0 + acc.mean_excess(acc.geometric_log_tail())
}

/// Value of the auxiliary function `g(lambda, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxG {
    pub value: f64,
}

pub fn aux_g(params: &ModelParams) -> AuxG {
    let inputs = Inputs::new(params);
    AuxG {
        value: libm::sqrt(g_squared(&inputs).mid().max(0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Scalar;

    fn at(l: f64, p: f64) -> ModelParams {
        ModelParams::new(l, p).unwrap()
    }

    fn frac(n: i128, d: i128) -> Scalar {
        Scalar::ratio(n, d).unwrap()
    }

    #[test]
    fn boundary_cases() {
        let p = ModelParams::new(frac(1, 2), frac(4, 5)).unwrap();
        assert_eq!(mean_time_tree2(&p), MeanExtinction::Infinite);
        let p = ModelParams::new(frac(1, 5), frac(15, 17)).unwrap();
        assert_eq!(mean_time_tree3(&p), MeanExtinction::Infinite);
        assert_eq!(mean_time_free(&at(1.0, 0.5)), MeanExtinction::Infinite);
        assert_eq!(
            mean_time_free(&at(1.0, 0.6)),
            MeanExtinction::UndefinedInfinite
        );
        assert_eq!(
            mean_time_tree2(&at(0.5, 0.9)),
            MeanExtinction::UndefinedInfinite
        );
        assert_eq!(
            mean_time_tree3(&at(0.2, 0.9)),
            MeanExtinction::UndefinedInfinite
        );
    }

    #[test]
    fn within_relative_gap_is_infinite() {
        let t = 2.0 / 2.5;
        let p = t * (1.0 - 0.5e-12);
        assert_eq!(mean_time_tree2(&at(0.5, p)), MeanExtinction::Infinite);
        let p = t * (1.0 - 1e-9);
        assert!(mean_time_tree2(&at(0.5, p)).is_finite());
    }

    #[test]
    fn free_example() {
        let e = mean_time_free(&at(1.0, 0.25)).finite().unwrap();
        let expected = 1.0 + 2.0 * libm::log(1.5);
        assert!((e - expected).abs() < 1e-15);
        assert!((e - 1.8109302162163288).abs() < 1e-15);
    }

    #[test]
    fn aux_g_examples() {
        let g = aux_g(&at(1.0, 0.5)).value;
        // g^2 = (1/8) * 2 * (6 + 1/2 - 3/2) / ((7/2)(3/2)) = (5/4)/(21/4) = 5/21
        assert!((g - libm::sqrt(5.0 / 21.0)).abs() < 1e-15);
        assert!(aux_g(&at(3.0, 1e-9)).value < 1e-12);
        let p = at(0.2, 0.7);
        let g = aux_g(&p).value;
        assert!(g > 0.0 && g < 3.0 - 3.0 * 0.7 - 0.2 * 0.7);
    }

    #[test]
    fn no_dispersion_reference_value() {
        // 50-digit reference: prod_{k>=0} (1 + 2^-k) - 1 = 3.76846205806274344829...
        let e = mean_time_no_dispersion(&at(1.0, 0.5), 200);
        assert!(e.contains(3.7684620580627434), "{e}");
        assert!(e.width() < 4e-14, "{e}");
    }

    #[test]
    fn all_means_tend_to_one() {
        let p = 1e-8;
        for l in [0.1, 1.0, 7.0] {
            let params = at(l, p);
            assert!((mean_time_tree2(&params).finite().unwrap() - 1.0).abs() < 1e-6);
            assert!((mean_time_tree3(&params).finite().unwrap() - 1.0).abs() < 1e-6);
            assert!((mean_time_free(&params).finite().unwrap() - 1.0).abs() < 1e-6);
            assert!((mean_time_no_dispersion(&params, 64).mid() - 1.0).abs() < 1e-6);
        }
    }
}
