use std::fmt;
use std::sync::Arc;

use crate::domain::{CheckReport, Grid, MarginTracker, RealFunction};
use crate::error::{Error, Result};
use crate::numerics::{inf_over, sup_over};

/// Largest grid for which [`TwoPointFunction::with_cache`] stores a dense
/// table.
pub const MAX_CACHE_POINTS: usize = 201;

/// A function of two variables checked against the min/max functional
/// equations.
pub trait TwoPoint {
    fn h_at(&self, x: f64, y: f64) -> Result<f64>;
}

/// `H(x,y) = inf_{[x,y]} f` for `x < y`, `f(x)` on the diagonal and
/// `sup_{[y,x]} f` for `x > y`.
pub struct TwoPointFunction {
    source: RealFunction,
    resolution: usize,
    cache: Option<DenseCache>,
}

struct DenseCache {
    grid: Grid,
    /// Row-major `H(gᵢ, gⱼ)`.
    values: Vec<f64>,
}

pub fn build_two_point(f: &RealFunction, resolution: usize) -> Result<TwoPointFunction> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!("resolution must be ≥ 2, got {resolution}")));
    }
    Ok(TwoPointFunction { source: f.clone(), resolution, cache: None })
}

impl TwoPointFunction {
    /// Tabulates `H` on `grid`. Off-diagonal entries are running minima and
    /// maxima of per-cell extrema, so composition over nested grid intervals
    /// is exact.
    pub fn with_cache(mut self, grid: &Grid) -> Result<Self> {
        let n = grid.len();
        if n > MAX_CACHE_POINTS {
            return Err(Error::InvalidArgument(format!(
                "dense cache limited to {MAX_CACHE_POINTS} points, got {n}"
            )));
        }
        if grid.interval() != self.source.domain() {
            return Err(Error::InvalidArgument("cache grid must share the source domain".into()));
        }
        let pts = grid.points();
        let diag = self.source.sample(pts)?;
        let mut cell_min = Vec::with_capacity(n.saturating_sub(1));
        let mut cell_max = Vec::with_capacity(n.saturating_sub(1));
        for w in pts.windows(2) {
            cell_min.push(inf_over(&self.source, w[0], w[1], self.resolution)?.to_f64());
            cell_max.push(sup_over(&self.source, w[0], w[1], self.resolution)?.to_f64());
        }
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            values[i * n + i] = diag[i];
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for j in i + 1..n {
                lo = lo.min(cell_min[j - 1]);
                hi = hi.max(cell_max[j - 1]);
                values[i * n + j] = lo;
                values[j * n + i] = hi;
            }
        }
        self.cache = Some(DenseCache { grid: grid.clone(), values });
        Ok(self)
    }

    pub fn source(&self) -> &RealFunction {
        &self.source
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn cached_grid(&self) -> Option<&Grid> {
        self.cache.as_ref().map(|c| &c.grid)
    }

    pub fn h_at(&self, x: f64, y: f64) -> Result<f64> {
        if let Some(c) = &self.cache {
            if let (Some(i), Some(j)) = (c.grid.index_of(x), c.grid.index_of(y)) {
                return Ok(c.values[i * c.grid.len() + j]);
            }
        }
        if x == y {
            return self.source.eval(x);
        }
        let v = if x < y {
            inf_over(&self.source, x, y, self.resolution)?
        } else {
            sup_over(&self.source, y, x, self.resolution)?
        };
        Ok(v.to_f64())
    }

    /// The section `x ↦ H(x, p)`, nondecreasing in `x`.
    pub fn section(self: &Arc<Self>, p: f64) -> Result<RealFunction> {
        self.source.domain().check(p)?;
        Ok(RealFunction::section(Arc::clone(self), p))
    }
}

impl TwoPoint for TwoPointFunction {
    fn h_at(&self, x: f64, y: f64) -> Result<f64> {
        TwoPointFunction::h_at(self, x, y)
    }
}

impl fmt::Debug for TwoPointFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwoPointFunction")
            .field("domain", &self.source.domain())
            .field("resolution", &self.resolution)
            .field("cached_points", &self.cache.as_ref().map(|c| c.grid.len()))
            .finish()
    }
}

/// A two-point function given by a closure.
#[derive(Clone)]
pub struct ClosedFormTwoPoint {
    name: &'static str,
    f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl ClosedFormTwoPoint {
    pub fn new(name: &'static str, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        ClosedFormTwoPoint { name, f: Arc::new(f) }
    }

    /// `sign(x − y)`, with `sign(0) = 0`.
    pub fn sign_difference() -> Self {
        Self::new("sign(x-y)", |x, y| sign(x - y))
    }

    /// `sign(y − x)`.
    pub fn sign_reversed() -> Self {
        Self::new("sign(y-x)", |x, y| sign(y - x))
    }

    pub fn zero() -> Self {
        Self::new("0", |_, _| 0.0)
    }

    pub fn name(&self) -> &'static str {
        self.name
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl TwoPoint for ClosedFormTwoPoint {
    fn h_at(&self, x: f64, y: f64) -> Result<f64> {
        Ok((self.f)(x, y))
    }
}

impl fmt::Debug for ClosedFormTwoPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClosedFormTwoPoint({})", self.name)
    }
}

/// `(x, y) ↦ −H(x, y)`.
#[derive(Debug, Clone)]
pub struct Negated<T>(pub T);

impl<T: TwoPoint> TwoPoint for Negated<T> {
    fn h_at(&self, x: f64, y: f64) -> Result<f64> {
        Ok(-self.0.h_at(x, y)?)
    }
}

impl<T: TwoPoint + ?Sized> TwoPoint for &T {
    fn h_at(&self, x: f64, y: f64) -> Result<f64> {
        (**self).h_at(x, y)
    }
}

impl<T: TwoPoint + ?Sized> TwoPoint for Arc<T> {
    fn h_at(&self, x: f64, y: f64) -> Result<f64> {
        (**self).h_at(x, y)
    }
}

fn tabulate(h: &dyn TwoPoint, pts: &[f64]) -> Result<Vec<f64>> {
    let mut m = Vec::with_capacity(pts.len() * pts.len());
    for &x in pts {
        for &y in pts {
            m.push(h.h_at(x, y)?);
        }
    }
    Ok(m)
}

/// `min(H(x,y), H(y,z)) = H(x,z)` and `max(H(z,y), H(y,x)) = H(z,x)` for
/// all grid triples `x ≤ y ≤ z`; the slack is minus the larger absolute
/// residual.
pub fn check_feh_equations(h: &dyn TwoPoint, grid: &Grid, tol: f64) -> Result<CheckReport> {
    let pts = grid.points();
    let n = pts.len();
    let m = tabulate(h, pts)?;
    let at = |i: usize, j: usize| m[i * n + j];
    let mut tracker = MarginTracker::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let r_min = (at(i, j).min(at(j, k)) - at(i, k)).abs();
                let r_max = (at(k, j).max(at(j, i)) - at(k, i)).abs();
                tracker.observe_triple(pts[i], pts[j], pts[k], -r_min.max(r_max));
            }
        }
    }
    Ok(tracker.finish(tol))
}

/// `H(x,y) ≤ min_{t∈[x,y]} H(t,t)` and `H(y,x) ≥ max_{t∈[x,y]} H(t,t)` over
/// grid pairs `x < y`, the extrema taken over grid points `t`. With
/// `continuous_diagonal` both must also be equalities, up to the largest
/// jump of the diagonal between neighbouring grid points.
pub fn check_diagonal_bounds(
    h: &dyn TwoPoint,
    grid: &Grid,
    continuous_diagonal: bool,
    tol: f64,
) -> Result<CheckReport> {
    let pts = grid.points();
    let n = pts.len();
    let m = tabulate(h, pts)?;
    let diag: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let allowance = diag.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    let mut tracker = MarginTracker::new();
    for i in 0..n {
        let (mut dmin, mut dmax) = (diag[i], diag[i]);
        for j in i + 1..n {
            dmin = dmin.min(diag[j]);
            dmax = dmax.max(diag[j]);
            let (below, above) = (m[i * n + j], m[j * n + i]);
            let mut slack = (dmin - below).min(above - dmax);
            if continuous_diagonal {
                slack = slack.min(allowance - (below - dmin).abs()).min(allowance - (above - dmax).abs());
            }
            tracker.observe(pts[i], pts[j], slack);
        }
    }
    Ok(tracker.finish(tol))
}

/// `max(G(x,y), G(y,z)) = G(x,z)` and `min(G(z,y), G(y,x)) = G(z,x)`,
/// checked as the min/max equations for `−G`.
pub fn check_feg_equations(g: &dyn TwoPoint, grid: &Grid, tol: f64) -> Result<CheckReport> {
    check_feh_equations(&Negated(g), grid, tol)
}
