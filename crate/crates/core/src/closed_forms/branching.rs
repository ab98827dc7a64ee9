//! Mean extinction time of a rate-1 continuous-time branching process with
//! three offspring families: at most two children, at most three children,
//! and a zero-modified geometric law.
//!
//! These take the offspring law as plain numbers and do not know about
//! catastrophes, which makes them an independent route to the tree and free
//! dispersion means.

use super::pmf::SurvivorLaw;
use super::ClosedFormError;
use crate::model::MeanExtinction;

/// Tolerance on normalisation and on the critical mean `f'(1) = 1`.
const PMF_TOL: f64 = 1e-12;

fn check_pmf(probs: &[f64]) -> Result<f64, ClosedFormError> {
    if probs.iter().any(|q| !(0.0..=1.0).contains(q)) {
        return Err(ClosedFormError::InvalidPmf);
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > PMF_TOL {
        return Err(ClosedFormError::InvalidPmf);
    }
    Ok(probs.iter().enumerate().map(|(k, q)| k as f64 * q).sum())
}

/// Classifies the offspring mean; `Ok(None)` means subcritical.
fn gate(mean: f64) -> Result<Option<MeanExtinction>, ClosedFormError> {
    if mean > 1.0 + PMF_TOL {
        Err(ClosedFormError::MeanAboveOne(mean))
    } else if mean >= 1.0 - PMF_TOL {
        Ok(Some(MeanExtinction::Infinite))
    } else {
        Ok(None)
    }
}

/// `E[tau] = ln(p0 / (p0 - p2)) / p2` for offspring supported on `{0, 1, 2}`.
pub fn branching_mean_binary(p0: f64, p1: f64, p2: f64) -> Result<MeanExtinction, ClosedFormError> {
    let mean = check_pmf(&[p0, p1, p2])?;
    if p2 <= 0.0 {
        return Err(ClosedFormError::InvalidPmf);
    }
    if let Some(nf) = gate(mean)? {
        return Ok(nf);
    }
    Ok(MeanExtinction::Finite(-libm::log1p(-p2 / p0) / p2))
}

/// Offspring supported on `{0, 1, 2, 3}`, with `R = sqrt(4 p0 p3 + (p2+p3)^2)`
/// and `B = 2 p0 - p2 - p3`: `E[tau] = ln((B + R)/(B - R)) / R`.
pub fn branching_mean_ternary(
    p0: f64,
    p1: f64,
    p2: f64,
    p3: f64,
) -> Result<MeanExtinction, ClosedFormError> {
    let mean = check_pmf(&[p0, p1, p2, p3])?;
    if p3 <= 0.0 {
        return Err(ClosedFormError::InvalidPmf);
    }
    if let Some(nf) = gate(mean)? {
        return Ok(nf);
    }
    let r = libm::sqrt(4.0 * p0 * p3 + (p2 + p3) * (p2 + p3));
    let b = 2.0 * p0 - p2 - p3;
    if b <= r {
        return Ok(MeanExtinction::Infinite);
    }
    Ok(MeanExtinction::Finite(libm::log1p(2.0 * r / (b - r)) / r))
}

/// Zero-modified geometric offspring `p0 = beta`, `p_n = alpha c^n`:
/// `E[tau] = 1 - (1-beta)/c * ln(1 - c/beta)`.
///
/// With the law normalised, `f'(1) = alpha c/(1-c)^2 = (1-beta)/(1-c)`, so the
/// subcritical condition `f'(1) < 1` reads `c < beta`.
pub fn branching_mean_geometric(law: &SurvivorLaw) -> Result<MeanExtinction, ClosedFormError> {
    let SurvivorLaw { beta, alpha, c } = *law;
    if !(beta > 0.0 && alpha > 0.0 && c > 0.0 && c < 1.0 && beta <= 1.0) {
        return Err(ClosedFormError::InvalidPmf);
    }
    if (law.total_mass() - 1.0).abs() > PMF_TOL {
        return Err(ClosedFormError::InvalidPmf);
    }
    if let Some(nf) = gate(law.mean())? {
        return Ok(nf);
    }
    Ok(MeanExtinction::Finite(
        1.0 - (1.0 - beta) / c * libm::log1p(-c / beta),
    ))
}
