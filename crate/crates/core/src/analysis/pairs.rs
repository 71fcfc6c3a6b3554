use crate::domain::{CheckReport, Grid, MarginTracker, RealFunction};
use crate::error::{Error, Result};
use crate::error_fn::ErrorFunction;

/// Slack of `f(x) ≤ f(y) + Φ(y−x)` given `fx`, `fy` and `Φ(y−x)`.
#[inline]
pub fn monotone_slack(fx: f64, fy: f64, phi_d: f64) -> f64 {
    fy + phi_d - fx
}

/// Slack of `|f(x) − f(y)| ≤ Φ(|y−x|)`; the smaller of the monotone slacks
/// of `f` and `−f`, so it agrees bit for bit with checking both.
#[inline]
pub fn holder_slack(fx: f64, fy: f64, phi_d: f64) -> f64 {
    monotone_slack(fx, fy, phi_d).min(monotone_slack(-fx, -fy, phi_d))
}

pub(crate) fn check_lag_range(grid: &Grid, phi: &ErrorFunction) -> Result<()> {
    let span = grid.diameter();
    if span >= phi.domain_length() {
        return Err(Error::OutOfRange { t: span, length: phi.domain_length() });
    }
    Ok(())
}

fn check_pairs(
    f: &RealFunction,
    phi: &ErrorFunction,
    grid: &Grid,
    tol: f64,
    slack: fn(f64, f64, f64) -> f64,
) -> Result<CheckReport> {
    check_lag_range(grid, phi)?;
    let pts = grid.points();
    let vals = f.sample(pts)?;
    let mut tracker = MarginTracker::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = phi.eval(pts[j] - pts[i])?;
            tracker.observe(pts[i], pts[j], slack(vals[i], vals[j], d));
        }
    }
    Ok(tracker.finish(tol))
}

/// `f(x) ≤ f(y) + Φ(y−x)` over all grid pairs `x < y`.
pub fn check_phi_monotone(
    f: &RealFunction,
    phi: &ErrorFunction,
    grid: &Grid,
    tol: f64,
) -> Result<CheckReport> {
    check_pairs(f, phi, grid, tol, monotone_slack)
}

/// `|f(x) − f(y)| ≤ Φ(|x−y|)` over all grid pairs.
pub fn check_phi_holder(f: &RealFunction, phi: &ErrorFunction, grid: &Grid, tol: f64) -> Result<CheckReport> {
    check_pairs(f, phi, grid, tol, holder_slack)
}
