//! Period 1: safe/unsafe coordination under heterogeneous present bias.
//!
//! A player with present bias `beta` below `beta* = u / (EV_L - EV_H)` is
//! "hot" and prefers unsafe coordination. Pairs with aligned preferences
//! play their common favourite; mixed pairs pick the option maximizing the
//! pair's joint decision utility, which reduces to `beta_1 + beta_2 < 2 beta*`
//! for unsafe.

use crate::distributions::DistributionSpec;
use crate::error::{Assumption, ModelError, QuadratureError};
use crate::quadrature::DEFAULT_TOL;
use crate::signaling::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOutcome {
    Safe,
    Unsafe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `u < EV_L - EV_H`: hot and cold players coexist.
    Interior,
    /// `u >= EV_L - EV_H`: every pair coordinates on unsafe sex.
    AllUnsafe,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Interior => "interior",
            Regime::AllUnsafe => "all_unsafe",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Period1Outcome {
    pub hot_threshold: f64,
    pub hot_share: f64,
    pub high_risk_share: f64,
    pub regime: Regime,
}

pub fn hot_threshold(safe_sex_cost: f64, gap: f64) -> Result<f64, ModelError> {
    if gap > 0.0 {
        Ok(safe_sex_cost / gap)
    } else {
        Err(ModelError::AssumptionViolated {
            assumption: Assumption::UtilityGap,
            detail: format!("continuation gap EV_L - EV_H = {gap} is not positive"),
        })
    }
}

pub fn hot_fraction(present_bias: &DistributionSpec, beta_star: f64) -> f64 {
    present_bias.cdf(beta_star.min(1.0))
}

/// Players with `beta == beta*` count as cold and a pair sum of exactly
/// `2 beta*` resolves to safe.
pub fn pair_outcome(beta_1: f64, beta_2: f64, beta_star: f64) -> PairOutcome {
    let hot_1 = beta_1 < beta_star;
    let hot_2 = beta_2 < beta_star;
    match (hot_1, hot_2) {
        (true, true) => PairOutcome::Unsafe,
        (false, false) => PairOutcome::Safe,
        _ if beta_1 + beta_2 < 2.0 * beta_star => PairOutcome::Unsafe,
        _ => PairOutcome::Safe,
    }
}

/// Share of players ending period 1 in an unsafe pair:
/// `H^2 + 2 ∫_{beta*}^{2 beta*} F(2 beta* - b) dF(b)`.
///
/// The outer limit is clamped to the top of the support of `F`.
pub fn high_risk_fraction(present_bias: &DistributionSpec, beta_star: f64) -> Result<f64, QuadratureError> {
    if beta_star <= 0.0 {
        return Ok(0.0);
    }
    let h = hot_fraction(present_bias, beta_star);
    let upper = (2.0 * beta_star).min(present_bias.support_hi());
    let mixed =
        present_bias.integrate_against(|b| present_bias.cdf(2.0 * beta_star - b), beta_star, upper, DEFAULT_TOL)?;
    Ok((h * h + 2.0 * mixed).clamp(0.0, 1.0))
}

pub fn period1_outcome(params: &ModelParams, gap: f64) -> Result<Period1Outcome, ModelError> {
    let beta_star = hot_threshold(params.safe_sex_cost, gap)?;
    if params.safe_sex_cost >= gap {
        return Ok(Period1Outcome {
            hot_threshold: beta_star,
            hot_share: 1.0,
            high_risk_share: 1.0,
            regime: Regime::AllUnsafe,
        });
    }
    Ok(Period1Outcome {
        hot_threshold: beta_star,
        hot_share: hot_fraction(&params.present_bias, beta_star),
        high_risk_share: high_risk_fraction(&params.present_bias, beta_star)?,
        regime: Regime::Interior,
    })
}
