use thiserror::Error;

/// Rejections raised while constructing a [`crate::DistributionSpec`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error("support must satisfy lo < hi with finite bounds, got ({lo}, {hi})")]
    InvalidSupport { lo: f64, hi: f64 },
    #[error("piecewise CDF needs at least two knots, got {0}")]
    TooFewKnots(usize),
    #[error("knot x values must be finite and strictly increasing (knot {index})")]
    KnotsNotIncreasing { index: usize },
    #[error("knot probabilities must be non-decreasing within [0, 1] (knot {index})")]
    ProbabilitiesNotMonotone { index: usize },
    #[error("piecewise CDF must start at p = 0 and end at p = 1")]
    ProbabilityEndpoints,
    #[error("cannot parse distribution `{0}`")]
    Syntax(String),
}

/// Adaptive quadrature gave up before reaching the requested tolerance.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
pub struct QuadratureError {
    pub estimate: f64,
    pub error_bound: f64,
}

/// Which modelling assumption a computation tripped over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assumption {
    /// theta_L * v < c < theta_H * v
    ParticipationOfTesting,
    /// c_h * (theta_H - theta_L) > theta_H * v - c
    UtilityGap,
}

impl std::fmt::Display for Assumption {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Assumption::ParticipationOfTesting => f.write_str("testing participation"),
            Assumption::UtilityGap => f.write_str("utility gap"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("{assumption} violated: {detail}")]
    AssumptionViolated { assumption: Assumption, detail: String },
    #[error("welfare is defined for a true transmission risk of 0, got {0}")]
    NonZeroTrueRisk(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("sweep failed at tau_hat = {tau_hat}: {source}")]
    SweepRow {
        tau_hat: f64,
        #[source]
        source: Box<ModelError>,
    },
    #[error("simulation needs at least one pair")]
    NoPairs,
}

impl ModelError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        ModelError::InvalidParameter { name, reason: reason.into() }
    }

    /// The assumption behind this error, looking through sweep wrappers.
    pub fn assumption(&self) -> Option<Assumption> {
        match self {
            ModelError::AssumptionViolated { assumption, .. } => Some(*assumption),
            ModelError::SweepRow { source, .. } => source.assumption(),
            _ => None,
        }
    }
}
