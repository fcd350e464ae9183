//! Browser bindings. Every export takes the model parameters as a JSON object
//! keyed like the CLI config file and returns a JSON string.

use serde::{Deserialize, Serialize};
use stigma_core::montecarlo::{analytic_targets, simulate};
use stigma_core::signaling::{pointwise_continuation, testing_threshold};
use stigma_core::welfare::{optimize_with_grid, sweep, unit_grid};
use stigma_core::{Convention, DistributionSpec, ModelParams, Risk, SimConfig};
use wasm_bindgen::prelude::*;

/// Upper bound on simulated pairs per call; keeps the page responsive.
pub const MAX_PAIRS: u64 = 2_000_000;
pub const MAX_POINTS: usize = 5_001;

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsInput {
    #[serde(rename = "theta_L")]
    pub theta_low: f64,
    #[serde(rename = "theta_H")]
    pub theta_high: f64,
    pub v: f64,
    pub c: f64,
    pub c_h: f64,
    pub z: f64,
    pub u: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub tau_hat: f64,
    pub dist_beta: String,
    pub dist_y: String,
}

impl Default for ParamsInput {
    fn default() -> Self {
        let p = ModelParams::example();
        ParamsInput {
            theta_low: p.theta_low,
            theta_high: p.theta_high,
            v: p.treatment_benefit,
            c: p.test_cost,
            c_h: p.infection_cost,
            z: p.partner_health_cost,
            u: p.safe_sex_cost,
            m: p.coordination_payoff,
            tau_hat: p.perceived_risk,
            dist_beta: p.present_bias.to_string(),
            dist_y: p.valuation.to_string(),
        }
    }
}

impl ParamsInput {
    pub fn to_params(&self) -> Result<ModelParams, String> {
        let dist = |key: &str, s: &str| s.parse::<DistributionSpec>().map_err(|e| format!("{key}: {e}"));
        let params = ModelParams {
            theta_low: self.theta_low,
            theta_high: self.theta_high,
            treatment_benefit: self.v,
            test_cost: self.c,
            infection_cost: self.c_h,
            partner_health_cost: self.z,
            safe_sex_cost: self.u,
            coordination_payoff: self.m,
            perceived_risk: self.tau_hat,
            true_risk: 0.0,
            present_bias: dist("dist_beta", &self.dist_beta)?,
            valuation: dist("dist_y", &self.dist_y)?,
        };
        params.validate().map_err(|e| e.to_string())?;
        Ok(params)
    }
}

fn parse_params(json: &str) -> Result<ModelParams, String> {
    let input: ParamsInput = if json.trim().is_empty() {
        ParamsInput::default()
    } else {
        serde_json::from_str(json).map_err(|e| format!("parameters: {e}"))?
    };
    input.to_params()
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    s.parse()
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct CurvePoint {
    pub tau_hat: f64,
    #[serde(rename = "S")]
    pub stigma: f64,
    pub gap: f64,
    #[serde(rename = "H")]
    pub hot_share: f64,
    pub r: f64,
    #[serde(rename = "R_H")]
    pub testing_rate_high: f64,
    #[serde(rename = "R")]
    pub testing_rate: f64,
    #[serde(rename = "W_A")]
    pub welfare_a: f64,
    #[serde(rename = "W_B")]
    pub welfare_b: f64,
    #[serde(rename = "W")]
    pub welfare: f64,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct WelfareCurve {
    pub convention: String,
    pub rows: Vec<CurvePoint>,
    pub tau_star: f64,
    pub welfare_star: f64,
}

pub fn welfare_curve_json(params_json: &str, grid: usize, convention: &str) -> Result<String, String> {
    if !(2..=MAX_POINTS).contains(&grid) {
        return Err(format!("grid must be between 2 and {MAX_POINTS}"));
    }
    let params = parse_params(params_json)?;
    let convention = parse_convention(convention)?;
    let rows = sweep(&params, &unit_grid(grid), convention).map_err(|e| e.to_string())?;
    let opt = optimize_with_grid(&params, convention, 1e-8, grid).map_err(|e| e.to_string())?;
    to_json(&WelfareCurve {
        convention: convention.as_str().into(),
        rows: rows
            .iter()
            .map(|r| CurvePoint {
                tau_hat: r.tau_hat,
                stigma: r.stigma,
                gap: r.gap,
                hot_share: r.hot_share,
                r: r.high_risk_share,
                testing_rate_high: r.testing_rate_high,
                testing_rate: r.testing_rate,
                welfare_a: r.welfare_a,
                welfare_b: r.welfare_b,
                welfare: r.welfare,
            })
            .collect(),
        tau_star: opt.tau_star,
        welfare_star: opt.welfare_star,
    })
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ContinuationCurves {
    #[serde(rename = "S")]
    pub stigma: f64,
    /// `null` when nobody is deterred from testing.
    pub y_star: Option<f64>,
    pub y: Vec<f64>,
    #[serde(rename = "V_L")]
    pub low: Vec<f64>,
    #[serde(rename = "V_H")]
    pub high: Vec<f64>,
}

pub fn continuation_curves_json(params_json: &str, stigma: f64, points: usize) -> Result<String, String> {
    if !(0.0..=1.0).contains(&stigma) {
        return Err(format!("stigma must lie in [0, 1], got {stigma}"));
    }
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("points must be between 2 and {MAX_POINTS}"));
    }
    let params = parse_params(params_json)?;
    let (lo, hi) = (params.valuation.support_lo(), params.valuation.support_hi());
    let y: Vec<f64> = (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect();
    let threshold = testing_threshold(&params, stigma);
    to_json(&ContinuationCurves {
        stigma,
        y_star: threshold.is_finite().then_some(threshold),
        low: y.iter().map(|&v| pointwise_continuation(&params, stigma, v, Risk::Low)).collect(),
        high: y.iter().map(|&v| pointwise_continuation(&params, stigma, v, Risk::High)).collect(),
        y,
    })
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct Comparison {
    pub name: String,
    pub simulated: f64,
    pub std_error: f64,
    pub analytic: f64,
    pub z: f64,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SimulationReport {
    pub n_pairs: u64,
    pub seed: u64,
    pub tau_hat: f64,
    pub convention: String,
    pub comparisons: Vec<Comparison>,
}

pub fn simulate_json(
    params_json: &str,
    tau_hat: f64,
    pairs: u64,
    seed: u64,
    convention: &str,
) -> Result<String, String> {
    if pairs == 0 || pairs > MAX_PAIRS {
        return Err(format!("pairs must be between 1 and {MAX_PAIRS}"));
    }
    let params = parse_params(params_json)?.with_perceived_risk(tau_hat);
    params.validate().map_err(|e| e.to_string())?;
    let convention = parse_convention(convention)?;
    let sim = simulate(&params, &SimConfig { n_pairs: pairs, seed, tau_hat, convention }).map_err(|e| e.to_string())?;
    let t = analytic_targets(&params, tau_hat, convention).map_err(|e| e.to_string())?;
    let comparisons = [
        ("r", sim.high_risk_share, t.high_risk_share),
        ("R", sim.testing_rate, t.testing_rate),
        ("R_H", sim.testing_rate_high, t.testing_rate_high),
        ("S", sim.stigma, t.stigma),
        ("W", sim.welfare, t.welfare),
    ]
    .into_iter()
    .map(|(name, est, analytic)| Comparison {
        name: name.into(),
        simulated: est.mean,
        std_error: est.std_error,
        analytic,
        z: est.z_score(analytic),
    })
    .collect();
    to_json(&SimulationReport { n_pairs: pairs, seed, tau_hat, convention: convention.as_str().into(), comparisons })
}

/// Welfare and equilibrium quantities over an even `tau_hat` grid, plus the optimum.
#[wasm_bindgen(js_name = welfareCurve)]
pub fn welfare_curve(params_json: &str, grid: usize, convention: &str) -> Result<String, JsError> {
    welfare_curve_json(params_json, grid, convention).map_err(|e| JsError::new(&e))
}

/// Low- and high-risk continuation values against the valuation at stigma `stigma`.
#[wasm_bindgen(js_name = continuationCurves)]
pub fn continuation_curves(params_json: &str, stigma: f64, points: usize) -> Result<String, JsError> {
    continuation_curves_json(params_json, stigma, points).map_err(|e| JsError::new(&e))
}

/// Monte Carlo estimates next to their analytic values.
#[wasm_bindgen(js_name = simulateVsAnalytic)]
pub fn simulate_vs_analytic(
    params_json: &str,
    tau_hat: f64,
    pairs: u32,
    seed: u32,
    convention: &str,
) -> Result<String, JsError> {
    simulate_json(params_json, tau_hat, pairs.into(), seed.into(), convention).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_input_is_the_bundled_example() {
        assert_eq!(ParamsInput::default().to_params().unwrap(), ModelParams::example());
    }

    #[test]
    fn conventions_parse_by_name() {
        assert_eq!(parse_convention("paper"), Ok(Convention::Literal));
        assert_eq!(parse_convention("corrected"), Ok(Convention::Corrected));
        assert!(parse_convention("").is_err());
    }
}
