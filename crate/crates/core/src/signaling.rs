//! Period 2: HIV testing and social interaction.
//!
//! Player A (risk type `theta`, interaction valuation `y_a`) decides whether
//! to take a publicly observed test; player B (valuation `y_b`) then decides
//! whether to interact. In the partially separating equilibrium only some
//! high-risk players test, so a test reveals `theta_high`, and the share of B
//! players who reject anyone observed testing is the stigma index `S`.

use crate::coordination;
use crate::distributions::DistributionSpec;
use crate::error::{Assumption, ModelError};

/// Exogenous inputs of the two-period game.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Infection probability of a player who coordinated on safe sex.
    pub theta_low: f64,
    /// Infection probability of a player who coordinated on unsafe sex.
    pub theta_high: f64,
    /// Health benefit of treatment after a positive test.
    pub treatment_benefit: f64,
    /// Direct cost of taking the test.
    pub test_cost: f64,
    /// Extra cost of being infected; never affects the testing decision.
    pub infection_cost: f64,
    /// Player B's health cost once infected.
    pub partner_health_cost: f64,
    /// Period-1 payoff premium of unsafe over safe coordination.
    pub safe_sex_cost: f64,
    /// Period-1 payoff of successful coordination. Additive constant.
    pub coordination_payoff: f64,
    /// Transmission probability perceived by population B; the policy lever.
    pub perceived_risk: f64,
    /// Actual transmission probability. Welfare is only defined at 0.
    pub true_risk: f64,
    /// Present-bias weight on period-2 payoffs, supported within [0, 1].
    pub present_bias: DistributionSpec,
    /// Valuation of social interaction, shared by both populations.
    pub valuation: DistributionSpec,
}

impl ModelParams {
    /// The numeric example's parameter set at `perceived_risk = 0.5`.
    pub fn example() -> Self {
        Self {
            theta_low: 0.2,
            theta_high: 0.8,
            treatment_benefit: 1.0,
            test_cost: 0.55,
            infection_cost: 1.0,
            partner_health_cost: 2.5,
            safe_sex_cost: 0.1,
            coordination_payoff: 1.0,
            perceived_risk: 0.5,
            true_risk: 0.0,
            present_bias: DistributionSpec::uniform(0.0, 1.0).expect("valid"),
            valuation: DistributionSpec::uniform(0.0, 2.0).expect("valid"),
        }
    }

    pub fn with_perceived_risk(&self, tau_hat: f64) -> Self {
        Self { perceived_risk: tau_hat, ..self.clone() }
    }

    /// Range checks plus the testing-participation condition. The utility-gap condition is checked where it is
    /// needed, see [`ModelParams::require_utility_gap`].
    pub fn validate(&self) -> Result<(), ModelError> {
        let probability = |name, x: f64| {
            if (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                Err(ModelError::invalid(name, format!("{x} is not in [0, 1]")))
            }
        };
        let non_negative = |name, x: f64| {
            if x.is_finite() && x >= 0.0 {
                Ok(())
            } else {
                Err(ModelError::invalid(name, format!("{x} must be finite and >= 0")))
            }
        };
        if !(0.0 < self.theta_low && self.theta_low < 1.0) {
            return Err(ModelError::invalid("theta_L", format!("{} is not in (0, 1)", self.theta_low)));
        }
        if !(self.theta_low < self.theta_high && self.theta_high < 1.0) {
            return Err(ModelError::invalid(
                "theta_H",
                format!("{} must lie in (theta_L, 1) = ({}, 1)", self.theta_high, self.theta_low),
            ));
        }
        non_negative("v", self.treatment_benefit)?;
        non_negative("c", self.test_cost)?;
        non_negative("c_h", self.infection_cost)?;
        non_negative("z", self.partner_health_cost)?;
        non_negative("u", self.safe_sex_cost)?;
        non_negative("M", self.coordination_payoff)?;
        probability("tau_hat", self.perceived_risk)?;
        probability("tau_true", self.true_risk)?;
        if self.present_bias.support_lo() < 0.0 || self.present_bias.support_hi() > 1.0 {
            return Err(ModelError::invalid(
                "dist_beta",
                format!("support of {} must lie within [0, 1]", self.present_bias),
            ));
        }
        if self.valuation.support_lo() < 0.0 {
            return Err(ModelError::invalid("dist_y", format!("support of {} must be non-negative", self.valuation)));
        }
        let low = self.theta_low * self.treatment_benefit;
        let high = self.theta_high * self.treatment_benefit;
        if !(low < self.test_cost && self.test_cost < high) {
            return Err(ModelError::AssumptionViolated {
                assumption: Assumption::ParticipationOfTesting,
                detail: format!(
                    "`c` = {} must lie strictly between theta_L*v = {low} and theta_H*v = {high}",
                    self.test_cost
                ),
            });
        }
        Ok(())
    }

    pub fn require_utility_gap(&self) -> Result<(), ModelError> {
        let bound = self.infection_cost_bound();
        if self.infection_cost > bound {
            Ok(())
        } else {
            Err(ModelError::AssumptionViolated {
                assumption: Assumption::UtilityGap,
                detail: format!(
                    "need c_h > (theta_H*v - c)/(theta_H - theta_L) = {bound}, got {}",
                    self.infection_cost
                ),
            })
        }
    }

    /// Expected net health gain of testing for a player of type `theta`.
    pub fn testing_gain(&self, theta: f64) -> f64 {
        theta * self.treatment_benefit - self.test_cost
    }

    /// Smallest infection cost that keeps low risk strictly preferable.
    pub fn infection_cost_bound(&self) -> f64 {
        self.testing_gain(self.theta_high) / (self.theta_high - self.theta_low)
    }

    /// Valuation below which player B rejects a tested partner.
    pub fn rejection_cutoff(&self) -> f64 {
        self.perceived_risk * self.theta_high * self.partner_health_cost
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Risk {
    Low,
    High,
}

impl Risk {
    pub fn theta(self, params: &ModelParams) -> f64 {
        match self {
            Risk::Low => params.theta_low,
            Risk::High => params.theta_high,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestingRates {
    /// Share of high-risk players who test.
    pub high_risk: f64,
    /// Share of all A players who test.
    pub population: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationValues {
    pub low: f64,
    pub high: f64,
    /// `low - high`; positive under the utility-gap condition.
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Period2Outcome {
    pub stigma: f64,
    /// `+inf` when there is no stigma.
    pub testing_threshold: f64,
    pub testing_rate_high: f64,
    pub testing_rate: f64,
    pub ev_low: f64,
    pub ev_high: f64,
    pub gap: f64,
    /// Share of HIV-positive A players, `r*theta_H + (1-r)*theta_L`.
    pub infected_share: f64,
    /// B's posterior risk for a tested partner.
    pub belief_tested: f64,
    /// Bounds on B's posterior risk for an untested partner.
    pub belief_untested: (f64, f64),
}

/// Stigma index: the share of B players whose valuation is below the
/// rejection cutoff.
pub fn stigma_level(params: &ModelParams) -> f64 {
    params.valuation.cdf(params.rejection_cutoff())
}

/// High-risk players test iff their valuation is below this threshold.
pub fn testing_threshold(params: &ModelParams, stigma: f64) -> f64 {
    if stigma <= 0.0 {
        f64::INFINITY
    } else {
        params.testing_gain(params.theta_high) / stigma
    }
}

pub fn testing_rates(params: &ModelParams, stigma: f64, high_risk_share: f64) -> TestingRates {
    let high_risk = params.valuation.cdf(testing_threshold(params, stigma));
    TestingRates { high_risk, population: high_risk_share * high_risk }
}

pub fn best_response_test(theta: f64, valuation: f64, stigma: f64, params: &ModelParams) -> bool {
    params.testing_gain(theta) - stigma * valuation > 0.0
}

/// Untested partners are always accepted; tested ones only by B players
/// whose valuation beats the expected infection cost.
pub fn best_response_interact(partner_tested: bool, valuation: f64, params: &ModelParams) -> bool {
    !partner_tested || valuation > params.rejection_cutoff()
}

pub fn continuation_values(params: &ModelParams, stigma: f64) -> ContinuationValues {
    let g = &params.valuation;
    let mean = g.mean();
    let low = mean - params.theta_low * params.infection_cost;
    let gain = params.testing_gain(params.theta_high);
    let top = testing_threshold(params, stigma).min(g.support_hi());
    // ∫_0^top (gain - S y) dG, with the S = 0 branch kept exact.
    let bonus = if stigma <= 0.0 { gain } else { gain * g.cdf(top) - stigma * g.partial_expectation(top) };
    let high = mean - params.theta_high * params.infection_cost + bonus;
    ContinuationValues { low, high, gap: low - high }
}

/// Period-2 payoff of an A player with valuation `y` entering as `risk`.
pub fn pointwise_continuation(params: &ModelParams, stigma: f64, valuation: f64, risk: Risk) -> f64 {
    let theta = risk.theta(params);
    let base = valuation - theta * params.infection_cost;
    match risk {
        Risk::Low => base,
        Risk::High if valuation < testing_threshold(params, stigma) => {
            base + params.testing_gain(theta) - valuation * stigma
        }
        Risk::High => base,
    }
}

pub fn infected_share(params: &ModelParams, high_risk_share: f64) -> f64 {
    high_risk_share * params.theta_high + (1.0 - high_risk_share) * params.theta_low
}

/// Bundles the period-2 quantities given the period-1 high-risk share.
pub fn period2_outcome(params: &ModelParams, high_risk_share: f64) -> Period2Outcome {
    let stigma = stigma_level(params);
    let ev = continuation_values(params, stigma);
    let rates = testing_rates(params, stigma, high_risk_share);
    let h_bar = infected_share(params, high_risk_share);
    Period2Outcome {
        stigma,
        testing_threshold: testing_threshold(params, stigma),
        testing_rate_high: rates.high_risk,
        testing_rate: rates.population,
        ev_low: ev.low,
        ev_high: ev.high,
        gap: ev.gap,
        infected_share: h_bar,
        belief_tested: params.theta_high,
        belief_untested: (params.theta_low, h_bar),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    /// Testing participation: `theta_L v < c < theta_H v`.
    pub participation_of_testing: bool,
    /// `(c - theta_L v, theta_H v - c)`; both positive when satisfied.
    pub testing_margins: (f64, f64),
    /// Share of HIV-positive A players used for the interaction-consent check.
    pub infected_share: f64,
    /// Interaction consent: mass of B players who would refuse a random partner,
    /// `G(tau_hat * h_bar * z)`. Zero means satisfied.
    pub interaction_violating_mass: f64,
    /// Utility gap at zero lower support: `c_h (theta_H - theta_L) > theta_H v - c`.
    pub utility_gap: bool,
    /// `(theta_H v - c) / (theta_H - theta_L)`, the bound `c_h` must beat.
    pub infection_cost_bound: f64,
}

impl AssumptionReport {
    pub fn interaction_participation(&self) -> bool {
        self.interaction_violating_mass == 0.0
    }
}

pub fn check_assumptions(params: &ModelParams) -> AssumptionReport {
    let low = params.theta_low * params.treatment_benefit;
    let high = params.theta_high * params.treatment_benefit;
    let bound = params.infection_cost_bound();
    let utility_gap = params.infection_cost > bound;

    // h_bar needs the period-1 composition. Without a positive gap everyone
    // prefers unsafe coordination.
    let ev = continuation_values(params, stigma_level(params));
    let r = if ev.gap > 0.0 {
        coordination::period1_outcome(params, ev.gap).map(|o| o.high_risk_share).unwrap_or(1.0)
    } else {
        1.0
    };
    let h_bar = infected_share(params, r);
    let mass = params.valuation.cdf(params.perceived_risk * h_bar * params.partner_health_cost);

    AssumptionReport {
        participation_of_testing: low < params.test_cost && params.test_cost < high,
        testing_margins: (params.test_cost - low, high - params.test_cost),
        infected_share: h_bar,
        interaction_violating_mass: mass,
        utility_gap,
        infection_cost_bound: bound,
    }
}
