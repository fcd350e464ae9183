//! Adaptive Simpson quadrature.
//!
//! Every integrand in the model is piecewise polynomial of low order, so
//! Simpson's rule is exact on each smooth piece and refinement only has to
//! chase the kinks.

use crate::error::QuadratureError;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_DEPTH: u32 = 60;

/// Minimum number of bisection levels before a panel may be accepted.
/// Guards against a coincidental agreement of the coarse and refined rules.
const MIN_DEPTH: u32 = 4;
const MAX_PANELS: usize = 2_000_000;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    integrate_with_depth(f, a, b, tol, DEFAULT_MAX_DEPTH)
}

pub fn integrate_with_depth<F>(f: F, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<f64, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    assert!(a <= b, "integration bounds out of order: [{a}, {b}]");
    assert!(tol > 0.0, "tolerance must be positive");
    if a == b {
        return Ok(0.0);
    }

    struct Panel {
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    }

    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let mut stack = vec![Panel { a, b, fa, fm, fb, whole: simpson(a, b, fa, fm, fb), tol, depth: 0 }];

    let mut total = 0.0;
    let mut error_bound = 0.0;
    let mut converged = true;
    let mut panels = 0usize;

    while let Some(p) = stack.pop() {
        panels += 1;
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;

        if p.depth >= MIN_DEPTH && delta.abs() <= 15.0 * p.tol {
            total += left + right + delta / 15.0;
            error_bound += delta.abs() / 15.0;
        } else if p.depth >= max_depth || panels >= MAX_PANELS {
            total += left + right + delta / 15.0;
            error_bound += delta.abs();
            converged = false;
        } else {
            let half = 0.5 * p.tol;
            // Right pushed first so the left half is summed first.
            stack.push(Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
                tol: half,
                depth: p.depth + 1,
            });
            stack.push(Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left, tol: half, depth: p.depth + 1 });
        }
    }

    if converged {
        Ok(total)
    } else {
        Err(QuadratureError { estimate: total, error_bound })
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}
