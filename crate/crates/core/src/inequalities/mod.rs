//! Hermite–Hadamard and Ostrowski type inequalities for Φ-monotone and
//! Φ-Hölder functions, their sharpness witnesses, and the converse checks.

mod certificate;
mod converse;
mod hh;
mod ostrowski;

pub use certificate::{BoundCertificate, BoundKind};
pub use converse::{
    check_converse_conclusion, check_converse_premise, converse_error_function, iterate_t, iterate_t_with,
    ConclusionReport, ConverseVariant, IterationOptions,
};
pub use hh::{check_generalized_hh, hh_bounds, hh_sharpness, power_case_bounds, GhhVariant};
pub use ostrowski::{ostrowski_bound, ostrowski_sharpness};

use crate::domain::{Grid, Interval, RealFunction};
use crate::error::{Error, Result};

const SCREEN_POINTS: usize = 41;

fn ordered(x: f64, y: f64) -> Result<()> {
    if x < y {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("need x < y, got x = {x}, y = {y}")))
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    let mut v: Vec<f64> = (0..n).map(|k| a + (b - a) * k as f64 / last).collect();
    v[n - 1] = b;
    v
}

/// Points of `[x, y]` on which a hypothesis of `f` is re-screened.
fn screen_grid(f: &RealFunction, x: f64, y: f64) -> Result<Grid> {
    let dom = f.domain();
    dom.check(x)?;
    dom.check(y)?;
    Grid::from_points(dom, linspace(x, y, SCREEN_POINTS))
}

/// Open interval around `[x, y]` on which extremal witnesses live, kept
/// within the lag range of `Φ`.
fn witness_domain(x: f64, y: f64, lag_limit: f64) -> Result<Interval> {
    let width = y - x;
    if width >= lag_limit {
        return Err(Error::OutOfRange { t: width, length: lag_limit });
    }
    let pad = (1e-3 * width).min(0.25 * (lag_limit - width));
    Interval::new(x - pad, y + pad)
}
