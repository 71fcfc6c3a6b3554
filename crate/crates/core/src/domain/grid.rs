use crate::error::{Error, Result};

use super::Interval;

/// Right cut-off used when sampling intervals of infinite length.
pub const DEFAULT_HORIZON: f64 = 10.0;

/// Fraction of the interval length kept clear of each endpoint by default.
pub const DEFAULT_MARGIN_FRACTION: f64 = 1e-3;

/// Strictly increasing sample points lying strictly inside an open interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    interval: Interval,
    points: Vec<f64>,
    margin: f64,
}

impl Grid {
    /// `n` equally spaced points on `[lo + margin, hi − margin]`, with
    /// unbounded intervals cut at [`DEFAULT_HORIZON`].
    pub fn uniform(interval: Interval, n: usize, margin: f64) -> Result<Self> {
        Self::uniform_with_horizon(interval, n, margin, DEFAULT_HORIZON)
    }

    pub fn uniform_with_horizon(interval: Interval, n: usize, margin: f64, horizon: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("grid needs at least 2 points, got {n}")));
        }
        if !(margin > 0.0) || !margin.is_finite() {
            return Err(Error::InvalidArgument(format!("grid margin must be positive, got {margin}")));
        }
        let start = interval.lo() + margin;
        let end = if interval.is_bounded() {
            if margin >= interval.length() / 2.0 {
                return Err(Error::DegenerateInterval(format!(
                    "margin {margin} leaves nothing of {interval}"
                )));
            }
            interval.hi() - margin
        } else {
            horizon
        };
        if !(end > start) {
            return Err(Error::DegenerateInterval(format!(
                "clipped range [{start}, {end}] of {interval} is empty"
            )));
        }
        let span = end - start;
        let last = (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|k| start + span * (k as f64) / last).collect();
        points[n - 1] = end;
        Ok(Grid { interval, points, margin })
    }

    /// Uniform grid using the default margin (`length/1000`, or
    /// `(horizon − lo)/1000` when the interval is unbounded).
    pub fn with_default_margin(interval: Interval, n: usize) -> Result<Self> {
        let span = if interval.is_bounded() { interval.length() } else { DEFAULT_HORIZON - interval.lo() };
        Self::uniform(interval, n, span * DEFAULT_MARGIN_FRACTION)
    }

    /// Grid from explicit points; the margin is the smallest endpoint distance.
    pub fn from_points(interval: Interval, points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument("grid needs at least 2 points".into()));
        }
        for &p in &points {
            interval.check(p)?;
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("grid points must be strictly increasing".into()));
        }
        let first = points[0] - interval.lo();
        let margin =
            if interval.is_bounded() { first.min(interval.hi() - points[points.len() - 1]) } else { first };
        Ok(Grid { interval, points, margin })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn diameter(&self) -> f64 {
        self.last() - self.first()
    }

    pub fn max_spacing(&self) -> f64 {
        self.points.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Index of a point that is bit-for-bit on the grid.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        self.points.binary_search_by(|p| p.total_cmp(&x)).ok()
    }

    /// Same interval, with the midpoint of every cell inserted.
    pub fn refined(&self) -> Grid {
        let mut points = Vec::with_capacity(2 * self.points.len() - 1);
        for w in self.points.windows(2) {
            points.push(w[0]);
            points.push(0.5 * (w[0] + w[1]));
        }
        points.push(self.last());
        Grid { interval: self.interval, points, margin: self.margin }
    }
}

/// Sample points on the half-open lag domain `[0, ℓ)` of an error function.
#[derive(Debug, Clone, PartialEq)]
pub struct LagGrid {
    domain_length: f64,
    points: Vec<f64>,
}

impl LagGrid {
    /// `n` points `0, ℓ/n, …, (n−1)ℓ/n`; for `ℓ = ∞`, `n` points spanning
    /// `[0, DEFAULT_HORIZON]`.
    pub fn uniform(domain_length: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("grid needs at least 2 points, got {n}")));
        }
        if !(domain_length > 0.0) {
            return Err(Error::DegenerateInterval(format!("lag domain [0, {domain_length})")));
        }
        let points = if domain_length.is_finite() {
            let step = domain_length / n as f64;
            (0..n).map(|k| k as f64 * step).collect()
        } else {
            let last = (n - 1) as f64;
            (0..n).map(|k| DEFAULT_HORIZON * k as f64 / last).collect()
        };
        Ok(LagGrid { domain_length, points })
    }

    /// `n` points `0, s/(n−1), …, s` with `s < ℓ`.
    pub fn spanning(domain_length: f64, span: f64, n: usize) -> Result<Self> {
        if n < 2 || !(span > 0.0) || !(span < domain_length) {
            return Err(Error::InvalidArgument(format!(
                "lag grid span {span} with {n} points in [0, {domain_length})"
            )));
        }
        let last = (n - 1) as f64;
        let points = (0..n).map(|k| span * k as f64 / last).collect();
        Ok(LagGrid { domain_length, points })
    }

    pub fn from_points(domain_length: f64, points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument("grid needs at least 2 points".into()));
        }
        if let Some(&t) = points.iter().find(|&&t| !(t >= 0.0 && t < domain_length)) {
            return Err(Error::OutOfRange { t, length: domain_length });
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("grid points must be strictly increasing".into()));
        }
        Ok(LagGrid { domain_length, points })
    }

    pub fn domain_length(&self) -> f64 {
        self.domain_length
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
