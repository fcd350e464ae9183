//! Agent-based check of the analytic chain.
//!
//! A finite population is pushed through both periods using only the
//! individual decision rules: pairs form, coordinate, test, and meet B
//! partners. The only analytic input is the hot threshold `beta*`, since the
//! pre-play negotiation has no operational protocol to simulate. Payoffs are
//! expected values over the infection draw, so HIV status is never sampled.
//!
//! Pair `i` draws from its own ChaCha stream `(seed, i)`, and partial sums
//! are merged in chunk order, so results do not depend on thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::coordination::{self, PairOutcome};
use crate::error::ModelError;
use crate::signaling::{self, ModelParams};
use crate::welfare::{self, Convention};

const CHUNK: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub n_pairs: u64,
    pub seed: u64,
    pub tau_hat: f64,
    pub convention: Convention,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    /// Distance to `target` in standard errors. Exact hits with zero
    /// standard error give 0.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.mean - target).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairCounts {
    pub hot_hot: u64,
    pub cold_cold: u64,
    pub hot_cold_unsafe: u64,
    pub hot_cold_safe: u64,
}

impl PairCounts {
    fn merge(&mut self, o: &PairCounts) {
        self.hot_hot += o.hot_hot;
        self.cold_cold += o.cold_cold;
        self.hot_cold_unsafe += o.hot_cold_unsafe;
        self.hot_cold_safe += o.hot_cold_safe;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    pub n_pairs: u64,
    pub high_risk_share: Estimate,
    pub testing_rate: Estimate,
    pub testing_rate_high: Estimate,
    pub stigma: Estimate,
    /// Per-capita experience utility of A plus that of B.
    pub welfare: Estimate,
    pub counts: PairCounts,
    /// Low-risk players who tested. Zero under testing participation.
    pub low_risk_tests: u64,
    /// Untested players whose B partner refused. Always zero.
    pub untested_rejections: u64,
}

/// Analytic values the simulation should reproduce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticTargets {
    pub high_risk_share: f64,
    pub testing_rate: f64,
    pub testing_rate_high: f64,
    pub stigma: f64,
    pub welfare: f64,
}

pub fn analytic_targets(
    params: &ModelParams,
    tau_hat: f64,
    convention: Convention,
) -> Result<AnalyticTargets, ModelError> {
    let row = welfare::evaluate(params, tau_hat, convention)?.row();
    Ok(AnalyticTargets {
        high_risk_share: row.high_risk_share,
        testing_rate: row.testing_rate,
        testing_rate_high: row.testing_rate_high,
        stigma: row.stigma,
        welfare: row.welfare,
    })
}

/// Running mean and centered second moment, mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, o: &Moments) {
        if o.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *o;
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        self.mean += d * o.n as f64 / n as f64;
        self.m2 += o.m2 + d * d * self.n as f64 * o.n as f64 / n as f64;
        self.n = n;
    }

    fn estimate(&self) -> Estimate {
        let var = if self.n > 1 { self.m2 / (self.n - 1) as f64 } else { 0.0 };
        Estimate { mean: self.mean, std_error: (var / self.n as f64).sqrt() }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    unsafe_pairs: Moments,
    tests: Moments,
    stigma: Moments,
    welfare: Moments,
    high_risk_agents: u64,
    high_risk_tests: u64,
    counts: PairCounts,
    low_risk_tests: u64,
    untested_rejections: u64,
}

impl Tally {
    fn merge(&mut self, o: &Tally) {
        self.unsafe_pairs.merge(&o.unsafe_pairs);
        self.tests.merge(&o.tests);
        self.stigma.merge(&o.stigma);
        self.welfare.merge(&o.welfare);
        self.high_risk_agents += o.high_risk_agents;
        self.high_risk_tests += o.high_risk_tests;
        self.counts.merge(&o.counts);
        self.low_risk_tests += o.low_risk_tests;
        self.untested_rejections += o.untested_rejections;
    }
}

struct PairSimulator<'a> {
    params: &'a ModelParams,
    base: ChaCha8Rng,
    beta_star: f64,
    stigma: f64,
    convention: Convention,
}

impl PairSimulator<'_> {
    fn run_chunk(&self, start: u64, end: u64) -> Tally {
        let mut tally = Tally::default();
        for i in start..end {
            self.run_pair(i, &mut tally);
        }
        tally
    }

    fn run_pair(&self, index: u64, tally: &mut Tally) {
        let p = self.params;
        let mut rng = self.base.clone();
        rng.set_stream(index);

        let b1 = p.present_bias.sample(&mut rng);
        let b2 = p.present_bias.sample(&mut rng);
        let outcome = coordination::pair_outcome(b1, b2, self.beta_star);
        let hot = (b1 < self.beta_star, b2 < self.beta_star);
        match (hot, outcome) {
            ((true, true), _) => tally.counts.hot_hot += 1,
            ((false, false), _) => tally.counts.cold_cold += 1,
            (_, PairOutcome::Unsafe) => tally.counts.hot_cold_unsafe += 1,
            (_, PairOutcome::Safe) => tally.counts.hot_cold_safe += 1,
        }
        let (theta, period1) = match outcome {
            PairOutcome::Unsafe => (p.theta_high, p.coordination_payoff),
            PairOutcome::Safe => (p.theta_low, p.coordination_payoff - p.safe_sex_cost),
        };
        let is_high = outcome == PairOutcome::Unsafe;

        let mut tests = 0u32;
        let mut discriminators = 0u32;
        let mut utility = 0.0;
        for _ in 0..2 {
            let y_a = p.valuation.sample(&mut rng);
            let y_b = p.valuation.sample(&mut rng);
            let tested = signaling::best_response_test(theta, y_a, self.stigma, p);
            let accepted = signaling::best_response_interact(tested, y_b, p);
            let discriminator = !signaling::best_response_interact(true, y_b, p);

            if tested {
                tests += 1;
                if is_high {
                    tally.high_risk_tests += 1;
                } else {
                    tally.low_risk_tests += 1;
                }
            } else if !accepted {
                tally.untested_rejections += 1;
            }
            if is_high {
                tally.high_risk_agents += 1;
            }
            discriminators += discriminator as u32;

            let gain = if tested { p.testing_gain(theta) } else { 0.0 };
            let a_utility = period1 - theta * p.infection_cost + gain + if accepted { y_a } else { 0.0 };
            let b_utility = match self.convention {
                Convention::Corrected => {
                    if accepted {
                        y_b
                    } else {
                        0.0
                    }
                }
                Convention::Literal => {
                    if !discriminator || tested {
                        y_b
                    } else {
                        0.0
                    }
                }
            };
            utility += a_utility + b_utility;
        }

        tally.unsafe_pairs.push(if is_high { 1.0 } else { 0.0 });
        tally.tests.push(tests as f64 / 2.0);
        tally.stigma.push(discriminators as f64 / 2.0);
        tally.welfare.push(utility / 2.0);
    }
}

pub fn simulate(params: &ModelParams, config: &SimConfig) -> Result<SimResult, ModelError> {
    if config.n_pairs == 0 {
        return Err(ModelError::NoPairs);
    }
    let params = params.with_perceived_risk(config.tau_hat);
    params.validate()?;
    params.require_utility_gap()?;
    if params.true_risk != 0.0 {
        return Err(ModelError::NonZeroTrueRisk(params.true_risk));
    }
    let eq = welfare::equilibrium(&params)?;
    let sim = PairSimulator {
        params: &params,
        base: ChaCha8Rng::seed_from_u64(config.seed),
        beta_star: eq.period1.hot_threshold,
        stigma: eq.period2.stigma,
        convention: config.convention,
    };

    let n_chunks = config.n_pairs.div_ceil(CHUNK);
    let chunk = |c: u64| sim.run_chunk(c * CHUNK, ((c + 1) * CHUNK).min(config.n_pairs));
    #[cfg(feature = "parallel")]
    let partials: Vec<Tally> = (0..n_chunks).into_par_iter().map(chunk).collect();
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<Tally> = (0..n_chunks).map(chunk).collect();

    let mut total = Tally::default();
    for t in &partials {
        total.merge(t);
    }

    let testing_rate_high = if total.high_risk_agents == 0 {
        Estimate { mean: f64::NAN, std_error: f64::NAN }
    } else {
        let n = total.high_risk_agents as f64;
        let p = total.high_risk_tests as f64 / n;
        Estimate { mean: p, std_error: (p * (1.0 - p) / n).sqrt() }
    };

    Ok(SimResult {
        n_pairs: config.n_pairs,
        high_risk_share: total.unsafe_pairs.estimate(),
        testing_rate: total.tests.estimate(),
        testing_rate_high,
        stigma: total.stigma.estimate(),
        welfare: total.welfare.estimate(),
        counts: total.counts,
        low_risk_tests: total.low_risk_tests,
        untested_rejections: total.untested_rejections,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n_pairs: u64,
    pub result: SimResult,
    pub targets: AnalyticTargets,
}

impl ConvergenceRow {
    pub fn welfare_gap(&self) -> f64 {
        (self.result.welfare.mean - self.targets.welfare).abs()
    }

    pub fn high_risk_gap(&self) -> f64 {
        (self.result.high_risk_share.mean - self.targets.high_risk_share).abs()
    }
}

/// Runs the simulation at each batch size with the same seed. Batches share
/// their leading pairs because streams are indexed by pair.
pub fn convergence_report(
    params: &ModelParams,
    config: &SimConfig,
    batch_sizes: &[u64],
) -> Result<Vec<ConvergenceRow>, ModelError> {
    let targets = analytic_targets(params, config.tau_hat, config.convention)?;
    batch_sizes
        .iter()
        .map(|&n| {
            let result = simulate(params, &SimConfig { n_pairs: n, ..*config })?;
            Ok(ConvergenceRow { n_pairs: n, result, targets })
        })
        .collect()
}
