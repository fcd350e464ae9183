//! One-dimensional distributions for present bias and interaction valuations.
//!
//! Two families are supported: a uniform law and a piecewise-linear CDF
//! defined by knots. Both have bounded support, and every moment the model
//! needs (CDF, mean, truncated first moment) has a closed form. Sampling is
//! by CDF inversion so a seeded stream reproduces draws exactly.
//!
//! Support is treated as half-open, `[lo, hi)`: `cdf(lo) = 0` and
//! `cdf(hi) = 1`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{DistributionError, QuadratureError};
use crate::quadrature;

#[derive(Debug, Clone, PartialEq)]
pub enum DistributionKind {
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// Knots `(x, p)` with strictly increasing `x`, non-decreasing `p`,
    /// first `p = 0` and last `p = 1`.
    PiecewiseLinearCdf {
        knots: Vec<(f64, f64)>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSpec {
    kind: DistributionKind,
    support_lo: f64,
    support_hi: f64,
}

impl DistributionSpec {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self, DistributionError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(DistributionError::InvalidSupport { lo, hi });
        }
        Ok(Self { kind: DistributionKind::Uniform { lo, hi }, support_lo: lo, support_hi: hi })
    }

    pub fn piecewise(knots: Vec<(f64, f64)>) -> Result<Self, DistributionError> {
        if knots.len() < 2 {
            return Err(DistributionError::TooFewKnots(knots.len()));
        }
        for (i, &(x, p)) in knots.iter().enumerate() {
            if !x.is_finite() || (i > 0 && x <= knots[i - 1].0) {
                return Err(DistributionError::KnotsNotIncreasing { index: i });
            }
            if !(0.0..=1.0).contains(&p) || (i > 0 && p < knots[i - 1].1) {
                return Err(DistributionError::ProbabilitiesNotMonotone { index: i });
            }
        }
        if knots[0].1 != 0.0 || knots[knots.len() - 1].1 != 1.0 {
            return Err(DistributionError::ProbabilityEndpoints);
        }
        let support_lo = knots[0].0;
        let support_hi = knots[knots.len() - 1].0;
        Ok(Self { kind: DistributionKind::PiecewiseLinearCdf { knots }, support_lo, support_hi })
    }

    /// Parses two-column `x,p` CSV text. A non-numeric first line is taken
    /// as a header; blank lines and `#` comments are skipped.
    pub fn piecewise_from_csv(text: &str) -> Result<Self, DistributionError> {
        let mut knots = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (Some(x), Some(p), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(DistributionError::Syntax(format!("line {}: expected `x,p`", lineno + 1)));
            };
            match (x.parse::<f64>(), p.parse::<f64>()) {
                (Ok(x), Ok(p)) => knots.push((x, p)),
                _ if knots.is_empty() && lineno == 0 => continue,
                _ => return Err(DistributionError::Syntax(format!("line {}: `{line}`", lineno + 1))),
            }
        }
        Self::piecewise(knots)
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    pub fn support_lo(&self) -> f64 {
        self.support_lo
    }

    pub fn support_hi(&self) -> f64 {
        self.support_hi
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x <= self.support_lo {
            return 0.0;
        }
        if x >= self.support_hi {
            return 1.0;
        }
        match &self.kind {
            DistributionKind::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            DistributionKind::PiecewiseLinearCdf { knots } => {
                let i = segment_of(knots, x);
                let (x0, p0) = knots[i];
                let (x1, p1) = knots[i + 1];
                (p0 + (p1 - p0) * (x - x0) / (x1 - x0)).clamp(0.0, 1.0)
            }
        }
    }

    /// Density with respect to Lebesgue measure (piecewise constant).
    pub fn density(&self, x: f64) -> f64 {
        if x < self.support_lo || x >= self.support_hi {
            return 0.0;
        }
        match &self.kind {
            DistributionKind::Uniform { lo, hi } => 1.0 / (hi - lo),
            DistributionKind::PiecewiseLinearCdf { knots } => {
                let i = segment_of(knots, x);
                let (x0, p0) = knots[i];
                let (x1, p1) = knots[i + 1];
                (p1 - p0) / (x1 - x0)
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match &self.kind {
            DistributionKind::Uniform { lo, hi } => 0.5 * (lo + hi),
            DistributionKind::PiecewiseLinearCdf { knots } => {
                knots.windows(2).map(|w| (w[1].1 - w[0].1) * 0.5 * (w[0].0 + w[1].0)).sum()
            }
        }
    }

    /// Truncated first moment `E[X; X <= t]`.
    pub fn partial_expectation(&self, t: f64) -> f64 {
        if t <= self.support_lo {
            return 0.0;
        }
        if t >= self.support_hi {
            return self.mean();
        }
        match &self.kind {
            DistributionKind::Uniform { lo, hi } => (t * t - lo * lo) / (2.0 * (hi - lo)),
            DistributionKind::PiecewiseLinearCdf { knots } => {
                let mut acc = 0.0;
                for w in knots.windows(2) {
                    let ((x0, p0), (x1, p1)) = (w[0], w[1]);
                    if t >= x1 {
                        acc += (p1 - p0) * 0.5 * (x0 + x1);
                    } else {
                        let slope = (p1 - p0) / (x1 - x0);
                        acc += slope * 0.5 * (t * t - x0 * x0);
                        break;
                    }
                }
                acc
            }
        }
    }

    /// Inverse CDF on `[0, 1)`. Flat stretches of the CDF are skipped.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match &self.kind {
            DistributionKind::Uniform { lo, hi } => lo + u * (hi - lo),
            DistributionKind::PiecewiseLinearCdf { knots } => {
                if u >= 1.0 {
                    return self.support_hi;
                }
                let idx = knots.partition_point(|&(_, p)| p <= u);
                let (x0, p0) = knots[idx - 1];
                let (x1, p1) = knots[idx];
                x0 + (u - p0) / (p1 - p0) * (x1 - x0)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }

    /// Points where the density may jump, including the support ends.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            DistributionKind::Uniform { lo, hi } => vec![*lo, *hi],
            DistributionKind::PiecewiseLinearCdf { knots } => knots.iter().map(|k| k.0).collect(),
        }
    }

    /// Stieltjes integral `∫_a^b f dF`, split at the density breakpoints so
    /// each quadrature panel sees a constant density.
    pub fn integrate_against<F>(&self, f: F, a: f64, b: f64, tol: f64) -> Result<f64, QuadratureError>
    where
        F: Fn(f64) -> f64,
    {
        let lo = a.max(self.support_lo);
        let hi = b.min(self.support_hi);
        if lo >= hi {
            return Ok(0.0);
        }
        let mut cuts = vec![lo];
        cuts.extend(self.breakpoints().into_iter().filter(|&x| x > lo && x < hi));
        cuts.push(hi);
        let pieces = (cuts.len() - 1) as f64;
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let d = self.density(0.5 * (w[0] + w[1]));
            if d == 0.0 {
                continue;
            }
            total += d * quadrature::integrate(&f, w[0], w[1], tol / pieces)?;
        }
        Ok(total)
    }
}

/// Index `i` of the knot segment `[x_i, x_{i+1})` containing `x`.
fn segment_of(knots: &[(f64, f64)], x: f64) -> usize {
    knots.partition_point(|&(kx, _)| kx <= x).saturating_sub(1).min(knots.len() - 2)
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DistributionKind::Uniform { lo, hi } => write!(f, "uniform({lo},{hi})"),
            DistributionKind::PiecewiseLinearCdf { knots } => {
                write!(f, "piecewise(")?;
                for (i, (x, p)) in knots.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{x}:{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Parses `uniform(lo,hi)` and the inline `piecewise(x:p;x:p;...)` form
/// produced by `Display`. File-backed `piecewise:<path>` specs are resolved
/// by the caller, which knows the base directory.
impl FromStr for DistributionSpec {
    type Err = DistributionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let syntax = || DistributionError::Syntax(s.to_string());
        if let Some(args) = s.strip_prefix("uniform(").and_then(|r| r.strip_suffix(')')) {
            let (lo, hi) = args.split_once(',').ok_or_else(syntax)?;
            let lo: f64 = lo.trim().parse().map_err(|_| syntax())?;
            let hi: f64 = hi.trim().parse().map_err(|_| syntax())?;
            return Self::uniform(lo, hi);
        }
        if let Some(args) = s.strip_prefix("piecewise(").and_then(|r| r.strip_suffix(')')) {
            let knots = args
                .split(';')
                .map(|kp| {
                    let (x, p) = kp.split_once(':')?;
                    Some((x.trim().parse().ok()?, p.trim().parse().ok()?))
                })
                .collect::<Option<Vec<_>>>()
                .ok_or_else(syntax)?;
            return Self::piecewise(knots);
        }
        Err(syntax())
    }
}
