//! Utilitarian welfare over both populations, evaluated with experience
//! utility (present bias treated as an error, so every A player weighs
//! period 2 fully).
//!
//! The chain for a perceived risk `tau_hat` is
//! `tau_hat -> S -> (EV_L, EV_H) -> (beta*, H, r) -> (R_H, R) -> W`.

use std::fmt;
use std::str::FromStr;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::coordination::{self, Period1Outcome};
use crate::error::ModelError;
use crate::signaling::{self, ModelParams, Period2Outcome};

/// How B players who would reject a tested partner are credited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// Discriminators earn `R * y_b`, as the welfare function is written.
    Literal,
    /// Discriminators earn `(1 - R) * y_b`: they only lose the interaction
    /// when matched with a tested partner.
    #[default]
    Corrected,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Literal => "paper",
            Convention::Corrected => "corrected",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "paper" | "paper_literal" => Ok(Convention::Literal),
            "corrected" => Ok(Convention::Corrected),
            other => Err(format!("unknown convention `{other}` (expected `paper` or `corrected`)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelfareComponents {
    /// `r (M + EV_H)`
    pub high_risk: f64,
    /// `(1 - r)(M - u + EV_L)`
    pub low_risk: f64,
    pub b_discriminators: f64,
    pub b_accepters: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelfareReport {
    pub welfare_a: f64,
    pub welfare_b: f64,
    pub total: f64,
    pub components: WelfareComponents,
    pub convention: Convention,
}

/// Both periods solved at one perceived risk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub perceived_risk: f64,
    pub period1: Period1Outcome,
    pub period2: Period2Outcome,
}

pub fn equilibrium(params: &ModelParams) -> Result<Equilibrium, ModelError> {
    let stigma = signaling::stigma_level(params);
    let ev = signaling::continuation_values(params, stigma);
    let period1 = coordination::period1_outcome(params, ev.gap)?;
    let period2 = signaling::period2_outcome(params, period1.high_risk_share);
    Ok(Equilibrium { perceived_risk: params.perceived_risk, period1, period2 })
}

fn ensure_welfare_preconditions(params: &ModelParams) -> Result<(), ModelError> {
    params.validate()?;
    params.require_utility_gap()?;
    if params.true_risk != 0.0 {
        return Err(ModelError::NonZeroTrueRisk(params.true_risk));
    }
    Ok(())
}

fn report_for(params: &ModelParams, eq: &Equilibrium, convention: Convention) -> WelfareReport {
    let m = params.coordination_payoff;
    let r = eq.period1.high_risk_share;
    let high_risk = r * (m + eq.period2.ev_high);
    let low_risk = (1.0 - r) * (m - params.safe_sex_cost + eq.period2.ev_low);

    let g = &params.valuation;
    let discriminated = g.partial_expectation(params.rejection_cutoff());
    let testing_rate = eq.period2.testing_rate;
    let b_discriminators = match convention {
        Convention::Corrected => (1.0 - testing_rate) * discriminated,
        Convention::Literal => testing_rate * discriminated,
    };
    let b_accepters = g.mean() - discriminated;

    let welfare_a = high_risk + low_risk;
    let welfare_b = b_discriminators + b_accepters;
    WelfareReport {
        welfare_a,
        welfare_b,
        total: welfare_a + welfare_b,
        components: WelfareComponents { high_risk, low_risk, b_discriminators, b_accepters },
        convention,
    }
}

pub fn welfare(params: &ModelParams, tau_hat: f64, convention: Convention) -> Result<WelfareReport, ModelError> {
    let params = params.with_perceived_risk(tau_hat);
    ensure_welfare_preconditions(&params)?;
    let eq = equilibrium(&params)?;
    Ok(report_for(&params, &eq, convention))
}

/// Welfare without either error: no present bias and no misperceived risk.
/// Everyone coordinates on safe sex and every interaction happens.
pub fn first_best_benchmark(params: &ModelParams) -> WelfareReport {
    let mean = params.valuation.mean();
    let low_risk = params.coordination_payoff - params.safe_sex_cost + mean - params.theta_low * params.infection_cost;
    WelfareReport {
        welfare_a: low_risk,
        welfare_b: mean,
        total: low_risk + mean,
        components: WelfareComponents { high_risk: 0.0, low_risk, b_discriminators: 0.0, b_accepters: mean },
        convention: Convention::Corrected,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresentBiasLoss {
    /// High-risk share at zero stigma.
    pub high_risk_share: f64,
    /// Continuation gap at zero stigma.
    pub gap: f64,
    /// `r (EV_L - EV_H)`: period-2 loss of the players who coordinated on unsafe sex.
    pub period2_loss: f64,
    /// Benchmark welfare minus zero-stigma welfare, `r (EV_L - EV_H - u)`.
    /// Smaller than `period2_loss` because unsafe pairs skip the cost `u`.
    pub benchmark_gap: f64,
}

pub fn present_bias_loss(params: &ModelParams) -> Result<PresentBiasLoss, ModelError> {
    let at_zero = params.with_perceived_risk(0.0);
    ensure_welfare_preconditions(&at_zero)?;
    let eq = equilibrium(&at_zero)?;
    let r = eq.period1.high_risk_share;
    let gap = eq.period2.gap;
    Ok(PresentBiasLoss {
        high_risk_share: r,
        gap,
        period2_loss: r * gap,
        benchmark_gap: r * (gap - params.safe_sex_cost),
    })
}

/// Welfare change of moving from `tau_hat = 0` to a positive perceived risk,
/// split into the three channels and compared against the exact change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyDecomposition {
    /// `(r(0) - r(tau)) (EV_L - EV_H(tau))`
    pub deterrence_gain: f64,
    /// `r(tau) (EV_H(tau) - EV_H(0))`, non-positive.
    pub suppression_loss: f64,
    /// `-R(tau) E[y_b; y_b < cutoff]`, non-positive.
    pub b_loss: f64,
    pub channel_sum: f64,
    /// `W(tau) - W(0)` under the corrected convention.
    pub exact_delta: f64,
    /// `exact_delta - channel_sum`; contains the switchers' period-1 cost.
    pub residual: f64,
}

pub fn decomposition(params: &ModelParams, tau_hat: f64) -> Result<PolicyDecomposition, ModelError> {
    let base_params = params.with_perceived_risk(0.0);
    let policy_params = params.with_perceived_risk(tau_hat);
    ensure_welfare_preconditions(&base_params)?;
    ensure_welfare_preconditions(&policy_params)?;
    let base = equilibrium(&base_params)?;
    let policy = equilibrium(&policy_params)?;

    let (r0, r1) = (base.period1.high_risk_share, policy.period1.high_risk_share);
    let deterrence_gain = (r0 - r1) * (policy.period2.ev_low - policy.period2.ev_high);
    let suppression_loss = r1 * (policy.period2.ev_high - base.period2.ev_high);
    let b_loss = -policy.period2.testing_rate * params.valuation.partial_expectation(policy_params.rejection_cutoff());
    let channel_sum = deterrence_gain + suppression_loss + b_loss;

    let exact_delta = report_for(&policy_params, &policy, Convention::Corrected).total
        - report_for(&base_params, &base, Convention::Corrected).total;
    Ok(PolicyDecomposition {
        deterrence_gain,
        suppression_loss,
        b_loss,
        channel_sum,
        exact_delta,
        residual: exact_delta - channel_sum,
    })
}

/// One row of the policy sweep. Column order matches the CSV schema.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub tau_hat: f64,
    pub stigma: f64,
    pub gap: f64,
    pub hot_share: f64,
    pub high_risk_share: f64,
    pub testing_rate_high: f64,
    pub testing_rate: f64,
    pub welfare_a: f64,
    pub welfare_b: f64,
    pub welfare: f64,
}

impl SweepRow {
    pub const HEADER: [&'static str; 10] = ["tau_hat", "S", "gap", "H", "r", "R_H", "R", "W_A", "W_B", "W"];

    pub fn values(&self) -> [f64; 10] {
        [
            self.tau_hat,
            self.stigma,
            self.gap,
            self.hot_share,
            self.high_risk_share,
            self.testing_rate_high,
            self.testing_rate,
            self.welfare_a,
            self.welfare_b,
            self.welfare,
        ]
    }
}

/// Full evaluation at one perceived risk, including the welfare split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub equilibrium: Equilibrium,
    pub welfare: WelfareReport,
}

impl Evaluation {
    pub fn row(&self) -> SweepRow {
        let eq = &self.equilibrium;
        SweepRow {
            tau_hat: eq.perceived_risk,
            stigma: eq.period2.stigma,
            gap: eq.period2.gap,
            hot_share: eq.period1.hot_share,
            high_risk_share: eq.period1.high_risk_share,
            testing_rate_high: eq.period2.testing_rate_high,
            testing_rate: eq.period2.testing_rate,
            welfare_a: self.welfare.welfare_a,
            welfare_b: self.welfare.welfare_b,
            welfare: self.welfare.total,
        }
    }
}

pub fn evaluate(params: &ModelParams, tau_hat: f64, convention: Convention) -> Result<Evaluation, ModelError> {
    let params = params.with_perceived_risk(tau_hat);
    ensure_welfare_preconditions(&params)?;
    let equilibrium = equilibrium(&params)?;
    let welfare = report_for(&params, &equilibrium, convention);
    Ok(Evaluation { equilibrium, welfare })
}

/// `n` evenly spaced points on `[0, 1]`, computed as `i / (n - 1)`.
pub fn unit_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn sweep_evaluations(
    params: &ModelParams,
    grid: &[f64],
    convention: Convention,
) -> Result<Vec<Evaluation>, ModelError> {
    let one = |&tau: &f64| {
        evaluate(params, tau, convention).map_err(|e| ModelError::SweepRow { tau_hat: tau, source: Box::new(e) })
    };
    #[cfg(feature = "parallel")]
    let rows = grid.par_iter().map(one).collect();
    #[cfg(not(feature = "parallel"))]
    let rows = grid.iter().map(one).collect();
    rows
}

pub fn sweep(params: &ModelParams, grid: &[f64], convention: Convention) -> Result<Vec<SweepRow>, ModelError> {
    Ok(sweep_evaluations(params, grid, convention)?.iter().map(Evaluation::row).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchPhase {
    Grid,
    Golden,
}

impl SearchPhase {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchPhase::Grid => "grid",
            SearchPhase::Golden => "golden",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub phase: SearchPhase,
    pub tau_hat: f64,
    /// Welfare net of the coordination payoff `M`.
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub tau_star: f64,
    pub welfare_star: f64,
    /// Every objective evaluation, in order.
    pub trace: Vec<TracePoint>,
}

pub const DEFAULT_OPTIMIZER_GRID: usize = 101;

pub fn optimize(params: &ModelParams, convention: Convention, tol: f64) -> Result<Optimum, ModelError> {
    optimize_with_grid(params, convention, tol, DEFAULT_OPTIMIZER_GRID)
}

/// Coarse scan of `[0, 1]` followed by golden-section refinement of the
/// bracket around the best grid point. Ties go to the smaller `tau_hat`.
///
/// `M` shifts welfare by a constant, so the search runs with `M = 0` and the
/// argmax is exactly independent of it; `welfare_star` is then evaluated
/// with the caller's `M`.
pub fn optimize_with_grid(
    params: &ModelParams,
    convention: Convention,
    tol: f64,
    grid_points: usize,
) -> Result<Optimum, ModelError> {
    assert!(tol > 0.0, "tolerance must be positive");
    let shifted = ModelParams { coordination_payoff: 0.0, ..params.clone() };
    let grid = unit_grid(grid_points.max(2));
    let rows = sweep(&shifted, &grid, convention)?;
    let mut trace: Vec<TracePoint> = rows
        .iter()
        .map(|r| TracePoint { phase: SearchPhase::Grid, tau_hat: r.tau_hat, objective: r.welfare })
        .collect();

    let mut best = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.welfare > rows[best].welfare {
            best = i;
        }
    }
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(grid.len() - 1)];

    let mut eval = |tau: f64| -> Result<f64, ModelError> {
        let w = welfare(&shifted, tau, convention)?.total;
        trace.push(TracePoint { phase: SearchPhase::Golden, tau_hat: tau, objective: w });
        Ok(w)
    };

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2)?;
        }
    }

    let (tau_star, _) = trace.iter().fold((f64::NAN, f64::NEG_INFINITY), |(bt, bw), p| {
        if p.objective > bw || (p.objective == bw && p.tau_hat < bt) {
            (p.tau_hat, p.objective)
        } else {
            (bt, bw)
        }
    });
    let welfare_star = welfare(params, tau_star, convention)?.total;
    Ok(Optimum { tau_star, welfare_star, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DistributionSpec;
    use crate::error::Assumption;

    fn example() -> ModelParams {
        ModelParams::example()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn welfare_at_zero_stigma() {
        let w = welfare(&example(), 0.0, Convention::Corrected).unwrap();
        // r = 2 (0.1/0.35)^2, W_A = M + r EV_H + (1 - r)(EV_L - u)
        let r = 2.0 * (0.1f64 / 0.35).powi(2);
        let wa = 1.0 + r * 0.45 + (1.0 - r) * 0.7;
        assert!(close(w.welfare_a, wa, 1e-12));
        assert!(close(w.welfare_a, 1.659_184, 1e-6));
        assert_eq!(w.welfare_b, 1.0);
        assert!(close(w.total, 2.659_184, 1e-6));
    }

    #[test]
    fn welfare_at_full_stigma() {
        let w = welfare(&example(), 1.0, Convention::Corrected).unwrap();
        let r = 2.0 * (0.1f64 / 0.584375).powi(2);
        let testing_rate = r * 0.125;
        let expected = 1.0 + r * 0.215625 + (1.0 - r) * 0.7 + 1.0 - testing_rate;
        assert!(close(w.total, expected, 1e-12));
        assert!(close(w.total, 2.664_311, 1e-6));
        assert!(w.total > welfare(&example(), 0.0, Convention::Corrected).unwrap().total);
    }

    #[test]
    fn report_identities() {
        for conv in [Convention::Corrected, Convention::Literal] {
            for tau in [0.0, 0.3, 0.7, 1.0] {
                let w = welfare(&example(), tau, conv).unwrap();
                assert_eq!(w.total, w.welfare_a + w.welfare_b);
                assert_eq!(w.welfare_a, w.components.high_risk + w.components.low_risk);
                assert_eq!(w.welfare_b, w.components.b_discriminators + w.components.b_accepters);
                assert_eq!(w.convention, conv);
            }
        }
        assert_eq!(welfare(&example(), 0.0, Convention::Corrected).unwrap().welfare_b, example().valuation.mean());
    }

    #[test]
    fn welfare_preconditions() {
        let p = ModelParams { true_risk: 0.1, ..example() };
        assert_eq!(welfare(&p, 0.5, Convention::Corrected).unwrap_err(), ModelError::NonZeroTrueRisk(0.1));
        let p = ModelParams { infection_cost: 0.3, ..example() };
        assert_eq!(welfare(&p, 0.5, Convention::Corrected).unwrap_err().assumption(), Some(Assumption::UtilityGap));
        let p = ModelParams { test_cost: 0.9, ..example() };
        assert_eq!(
            welfare(&p, 0.5, Convention::Corrected).unwrap_err().assumption(),
            Some(Assumption::ParticipationOfTesting)
        );
    }

    #[test]
    fn benchmark_examples() {
        let b = first_best_benchmark(&example());
        assert!(close(b.welfare_a, 1.7, 1e-15));
        assert_eq!(b.welfare_b, 1.0);
        assert!(close(b.total, 2.7, 1e-15));
        let b0 = first_best_benchmark(&ModelParams { coordination_payoff: 0.0, ..example() });
        assert!(close(b0.welfare_a, 0.7, 1e-15));
    }

    #[test]
    fn benchmark_dominates_sweep() {
        let bench = first_best_benchmark(&example()).total;
        for row in sweep(&example(), &unit_grid(101), Convention::Corrected).unwrap() {
            assert!(bench >= row.welfare);
        }
    }

    #[test]
    fn present_bias_loss_examples() {
        let loss = present_bias_loss(&example()).unwrap();
        let r = 2.0 * (0.1f64 / 0.35).powi(2);
        assert!(close(loss.period2_loss, r * 0.35, 1e-12));
        assert!(close(loss.period2_loss, 0.057_143, 1e-6));
        assert!(close(loss.benchmark_gap, r * 0.25, 1e-12));
        // benchmark gap is the exact welfare difference
        let exact =
            first_best_benchmark(&example()).total - welfare(&example(), 0.0, Convention::Corrected).unwrap().total;
        assert!(close(loss.benchmark_gap, exact, 1e-12));
        assert!(close(loss.period2_loss, loss.benchmark_gap + loss.high_risk_share * 0.1, 1e-12));
    }

    #[test]
    fn present_bias_loss_vanishes_without_hot_players() {
        // beta concentrated on [0.99, 1]: beta*(0) = 0.2857 leaves nobody hot
        let p = ModelParams {
            present_bias: DistributionSpec::piecewise(vec![(0.99, 0.0), (1.0, 1.0)]).unwrap(),
            ..example()
        };
        let loss = present_bias_loss(&p).unwrap();
        assert_eq!(loss.high_risk_share, 0.0);
        assert_eq!(loss.period2_loss, 0.0);
    }

    #[test]
    fn present_bias_loss_shrinks_near_gap_boundary() {
        // c_h just above the assumption-3 bound: gap -> 0+, so u >= gap and r = 1
        let p = ModelParams { infection_cost: 0.25 / 0.6 + 1e-9, ..example() };
        let loss = present_bias_loss(&p).unwrap();
        assert_eq!(loss.high_risk_share, 1.0);
        assert!(loss.period2_loss < 1e-8);
    }

    #[test]
    fn decomposition_examples() {
        let d = decomposition(&example(), 0.5).unwrap();
        let r0 = 2.0 * (0.1f64 / 0.35).powi(2);
        let r5 = 2.0 * (0.1f64 / 0.56875).powi(2);
        assert!(close(d.deterrence_gain, (r0 - r5) * 0.56875, 1e-12));
        assert!(close(d.deterrence_gain, 0.057_692, 1e-6));
        assert!(close(d.b_loss, -(r5 * 0.25) * 0.25, 1e-12));
        assert!(close(d.b_loss, -0.003_864, 1e-6));
        assert!(close(d.suppression_loss, r5 * (0.23125 - 0.45), 1e-12));
        assert_eq!(d.channel_sum, d.deterrence_gain + d.suppression_loss + d.b_loss);
        assert_eq!(d.residual, d.exact_delta - d.channel_sum);
    }

    #[test]
    fn decomposition_residual_identity() {
        // W_A(tau) - W_A(0) = (r0 - r)(gap(tau) - u) + r0 (EV_H(tau) - EV_H(0)),
        // so residual = (r0 - r)(EV_H(tau) - EV_H(0) - u).
        let p = example();
        for tau in [0.1, 0.25, 0.5, 0.9, 1.0] {
            let d = decomposition(&p, tau).unwrap();
            let e0 = equilibrium(&p.with_perceived_risk(0.0)).unwrap();
            let e1 = equilibrium(&p.with_perceived_risk(tau)).unwrap();
            let dr = e0.period1.high_risk_share - e1.period1.high_risk_share;
            let expected = dr * (e1.period2.ev_high - e0.period2.ev_high - p.safe_sex_cost);
            assert!(close(d.residual, expected, 1e-12), "tau = {tau}");
        }
    }

    #[test]
    fn decomposition_is_continuous_at_baseline() {
        let d = decomposition(&example(), 1e-6).unwrap();
        assert!(d.exact_delta.abs() < 1e-4);
        assert!(d.channel_sum.abs() < 1e-4);
        assert!(d.deterrence_gain.abs() < 1e-4 && d.suppression_loss.abs() < 1e-4 && d.b_loss.abs() < 1e-4);
    }

    #[test]
    fn sweep_examples() {
        let rows = sweep(&example(), &[0.0, 0.5, 1.0], Convention::Corrected).unwrap();
        let s: Vec<f64> = rows.iter().map(|r| r.stigma).collect();
        assert_eq!(s, vec![0.0, 0.5, 1.0]);

        let rows = sweep(&example(), &unit_grid(401), Convention::Corrected).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].high_risk_share < w[0].high_risk_share);
            assert!(w[1].testing_rate_high <= w[0].testing_rate_high);
        }
        for r in rows.iter().filter(|r| r.tau_hat <= 0.125) {
            assert_eq!(r.testing_rate_high, 1.0);
        }
    }

    #[test]
    fn sweep_rows_match_single_point() {
        let grid = unit_grid(21);
        let rows = sweep(&example(), &grid, Convention::Corrected).unwrap();
        for (row, &tau) in rows.iter().zip(&grid) {
            assert_eq!(*row, evaluate(&example(), tau, Convention::Corrected).unwrap().row());
            assert_eq!(row.welfare, welfare(&example(), tau, Convention::Corrected).unwrap().total);
        }
    }

    #[test]
    fn sweep_error_names_row() {
        let p = ModelParams { infection_cost: 0.3, ..example() };
        match sweep(&p, &[0.0, 0.5], Convention::Corrected).unwrap_err() {
            ModelError::SweepRow { tau_hat, .. } => assert_eq!(tau_hat, 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn optimizer_on_example_params() {
        let opt = optimize(&example(), Convention::Corrected, 1e-8).unwrap();
        assert!((0.25..=0.5).contains(&opt.tau_star), "{}", opt.tau_star);
        let w0 = welfare(&example(), 0.0, Convention::Corrected).unwrap().total;
        let w1 = welfare(&example(), 1.0, Convention::Corrected).unwrap().total;
        assert!(opt.welfare_star >= w0.max(w1) - 1e-8);
        // nothing evaluated beats the reported optimum
        let best = opt.trace.iter().map(|p| p.objective).fold(f64::NEG_INFINITY, f64::max);
        assert!(opt.trace.iter().any(|p| p.tau_hat == opt.tau_star && p.objective == best));
        // deterministic
        assert_eq!(opt, optimize(&example(), Convention::Corrected, 1e-8).unwrap());
    }

    #[test]
    fn optimizer_without_deterrence_picks_zero() {
        let p = ModelParams { present_bias: DistributionSpec::uniform(0.6, 1.0).unwrap(), ..example() };
        let opt = optimize(&p, Convention::Corrected, 1e-8).unwrap();
        assert_eq!(opt.tau_star, 0.0);
    }

    #[test]
    fn optimizer_is_invariant_to_coordination_payoff() {
        let a = optimize(&ModelParams { coordination_payoff: 0.0, ..example() }, Convention::Corrected, 1e-9).unwrap();
        let b = optimize(&ModelParams { coordination_payoff: 7.5, ..example() }, Convention::Corrected, 1e-9).unwrap();
        assert_eq!(a.tau_star, b.tau_star);
        assert!((b.welfare_star - a.welfare_star - 7.5).abs() < 1e-12);
    }

    #[test]
    fn corrected_convention_brackets_literal() {
        for row in unit_grid(101) {
            let c = welfare(&example(), row, Convention::Corrected).unwrap();
            let l = welfare(&example(), row, Convention::Literal).unwrap();
            let eq = equilibrium(&example().with_perceived_risk(row)).unwrap();
            assert!(eq.period2.testing_rate < 0.2);
            assert!(c.welfare_b >= l.welfare_b);
            assert_eq!(c.welfare_a, l.welfare_a);
        }
    }

    #[test]
    fn convention_parsing() {
        assert_eq!("paper".parse::<Convention>().unwrap(), Convention::Literal);
        assert_eq!("paper_literal".parse::<Convention>().unwrap(), Convention::Literal);
        assert_eq!("corrected".parse::<Convention>().unwrap(), Convention::Corrected);
        assert!("other".parse::<Convention>().is_err());
        assert_eq!(Convention::default(), Convention::Corrected);
    }
}
