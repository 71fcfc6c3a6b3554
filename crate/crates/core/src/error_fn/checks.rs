use super::ErrorFunction;
use crate::domain::{CheckReport, LagGrid, MarginTracker};
use crate::error::{Error, Result};

fn values(phi: &ErrorFunction, grid: &LagGrid) -> Result<Vec<f64>> {
    if grid.domain_length() > phi.domain_length() {
        return Err(Error::OutOfRange { t: grid.domain_length(), length: phi.domain_length() });
    }
    grid.points().iter().map(|&t| phi.eval(t)).collect()
}

/// `Φ(t) ≥ 0` at every grid point.
pub fn check_nonnegative(phi: &ErrorFunction, grid: &LagGrid, tol: f64) -> Result<CheckReport> {
    let vals = values(phi, grid)?;
    let mut tracker = MarginTracker::new();
    for (&t, &v) in grid.points().iter().zip(&vals) {
        tracker.observe(t, t, v);
    }
    Ok(tracker.finish(tol))
}

/// `Φ(s) ≤ Φ(t)` for all grid pairs `s < t`.
pub fn check_nondecreasing(phi: &ErrorFunction, grid: &LagGrid, tol: f64) -> Result<CheckReport> {
    let vals = values(phi, grid)?;
    let pts = grid.points();
    let mut tracker = MarginTracker::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            tracker.observe(pts[i], pts[j], vals[j] - vals[i]);
        }
    }
    Ok(tracker.finish(tol))
}

/// `Φ(u+v) ≤ Φ(u) + Φ(v)` for grid pairs `u ≤ v` with `u+v` inside the
/// grid's lag domain.
pub fn check_subadditive(phi: &ErrorFunction, grid: &LagGrid, tol: f64) -> Result<CheckReport> {
    let vals = values(phi, grid)?;
    let pts = grid.points();
    let mut tracker = MarginTracker::new();
    for i in 0..pts.len() {
        for j in i..pts.len() {
            if let Some(slack) = sum_slack(phi, grid, pts[i], pts[j], vals[i], vals[j])? {
                tracker.observe(pts[i], pts[j], slack);
            }
        }
    }
    Ok(tracker.finish(tol))
}

/// `Φ(|u+v|) ≤ Φ(|u|) + Φ(|v|)` over signed grid values. Up to a global
/// sign flip the pairs are `(u, v)` and `(u, -v)`.
pub fn check_absolutely_subadditive(phi: &ErrorFunction, grid: &LagGrid, tol: f64) -> Result<CheckReport> {
    let vals = values(phi, grid)?;
    let pts = grid.points();
    let mut tracker = MarginTracker::new();
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let (u, v) = (pts[i], pts[j]);
            if let Some(slack) = sum_slack(phi, grid, u, v, vals[i], vals[j])? {
                tracker.observe(u, v, slack);
            }
            let diff = phi.eval(v - u)?;
            tracker.observe(u, -v, vals[i] + vals[j] - diff);
        }
    }
    Ok(tracker.finish(tol))
}

fn sum_slack(phi: &ErrorFunction, grid: &LagGrid, u: f64, v: f64, pu: f64, pv: f64) -> Result<Option<f64>> {
    let s = u + v;
    if s >= grid.domain_length() {
        return Ok(None);
    }
    Ok(Some(pu + pv - phi.eval(s)?))
}
