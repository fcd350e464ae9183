//! Equilibrium and welfare engine for a two-period game of HIV testing
//! stigma.
//!
//! Period 1 is a safe/unsafe coordination game among players with
//! heterogeneous present bias; period 2 is a signalling game in which a
//! public HIV test reveals high risk and draws rejection from partners who
//! overestimate transmission risk. The perceived transmission risk
//! `tau_hat` is the policy lever, and stigma acts through two channels:
//! it suppresses testing and it deters unsafe coordination.
//!
//! Modules, bottom-up:
//! - [`distributions`] and [`quadrature`]: the one-dimensional laws of
//!   present bias and interaction valuations.
//! - [`signaling`]: stigma, testing, and continuation values.
//! - [`coordination`]: hot/cold thresholds and the high-risk share.
//! - [`welfare`]: experience-utility welfare, sweeps, and the optimizer.
//! - [`montecarlo`]: an agent-based oracle for the analytic chain.

pub mod coordination;
pub mod distributions;
pub mod error;
pub mod montecarlo;
pub mod quadrature;
pub mod signaling;
pub mod welfare;

pub use coordination::{PairOutcome, Period1Outcome, Regime};
pub use distributions::{DistributionKind, DistributionSpec};
pub use error::{Assumption, DistributionError, ModelError, QuadratureError};
pub use montecarlo::{SimConfig, SimResult};
pub use signaling::{AssumptionReport, ModelParams, Period2Outcome, Risk};
pub use welfare::{Convention, Optimum, PolicyDecomposition, SweepRow, WelfareReport};
