//! Error functions `Φ : [0, ℓ) → ℝ₊` and their structural properties.

mod checks;
mod spec;
mod transform;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::domain::{RealFunction, SampledTable};
use crate::error::{Error, Result};
use crate::numerics::{integrate_piecewise, QuadratureSpec};

pub use checks::{check_absolutely_subadditive, check_nondecreasing, check_nonnegative, check_subadditive};
pub use spec::ErrorSpec;
pub use transform::{transform_psi_to_phi, verify_cphi_identity, PowerFit, TransformMethod};

#[derive(Clone)]
pub struct ErrorFunction {
    domain_length: f64,
    body: Arc<ErrorBody>,
}

enum ErrorBody {
    /// `c·t^p`
    Power {
        c: f64,
        p: f64,
    },
    Closed(RealFunction),
    Table(SampledTable),
    Transformed(transform::Transformed),
}

impl ErrorFunction {
    /// `Φ(t) = c·t^p` on `[0, ∞)`.
    pub fn power(c: f64, p: f64) -> Result<Self> {
        Self::power_on(c, p, f64::INFINITY)
    }

    pub fn power_on(c: f64, p: f64, domain_length: f64) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::InvalidArgument(format!("power coefficient must be ≥ 0, got {c}")));
        }
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::InvalidArgument(format!("power exponent must be > 0, got {p}")));
        }
        Self::with_body(domain_length, ErrorBody::Power { c, p })
    }

    /// The identically zero error function.
    pub fn zero() -> Self {
        Self::power(0.0, 1.0).expect("valid")
    }

    /// Closed-form `Φ` given as a function on `(0, ℓ)`; it is also evaluated
    /// at `t = 0`.
    pub fn tabulated(f: RealFunction) -> Result<Self> {
        let dom = f.domain();
        if dom.lo() != 0.0 {
            return Err(Error::InvalidArgument(format!("error function must live on (0, ℓ), got {dom}")));
        }
        Self::with_body(dom.hi(), ErrorBody::Closed(f))
    }

    /// Sampled `Φ`; samples must lie in `[0, ℓ)`.
    pub fn from_table(domain_length: f64, table: SampledTable) -> Result<Self> {
        if let Some(&t) = table.xs().iter().find(|&&t| !(t >= 0.0 && t < domain_length)) {
            return Err(Error::OutOfRange { t, length: domain_length });
        }
        Self::with_body(domain_length, ErrorBody::Table(table))
    }

    fn with_body(domain_length: f64, body: ErrorBody) -> Result<Self> {
        if !(domain_length > 0.0) {
            return Err(Error::InvalidArgument(format!("domain length must be > 0, got {domain_length}")));
        }
        Ok(ErrorFunction { domain_length, body: Arc::new(body) })
    }

    /// Same body with a different domain bound.
    pub fn restricted(&self, domain_length: f64) -> Result<Self> {
        if !(domain_length > 0.0) {
            return Err(Error::InvalidArgument(format!("domain length must be > 0, got {domain_length}")));
        }
        Ok(ErrorFunction { domain_length, body: Arc::clone(&self.body) })
    }

    pub fn domain_length(&self) -> f64 {
        self.domain_length
    }

    /// `(c, p)` when the body is a pure power.
    pub fn as_power(&self) -> Option<(f64, f64)> {
        match *self.body {
            ErrorBody::Power { c, p } => Some((c, p)),
            _ => None,
        }
    }

    pub fn is_transformed(&self) -> bool {
        matches!(*self.body, ErrorBody::Transformed(_))
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t < self.domain_length) {
            return Err(Error::OutOfRange { t, length: self.domain_length });
        }
        self.eval_in_range(t)
    }

    fn eval_in_range(&self, t: f64) -> Result<f64> {
        match &*self.body {
            ErrorBody::Power { c, p } => Ok(if t == 0.0 { 0.0 } else { c * t.powf(*p) }),
            ErrorBody::Closed(f) => f.eval_unchecked(t),
            ErrorBody::Table(tab) => Ok(tab.eval(t)),
            ErrorBody::Transformed(tr) => tr.eval(t),
        }
    }

    pub(crate) fn knots(&self) -> Vec<f64> {
        match &*self.body {
            ErrorBody::Power { .. } => Vec::new(),
            ErrorBody::Closed(f) => f.knots().to_vec(),
            ErrorBody::Table(t) => t.xs().to_vec(),
            ErrorBody::Transformed(tr) => tr.base().knots(),
        }
    }

    /// `∫₀ᵘ Φ`, in closed form for power bodies.
    pub fn integral_from_zero(&self, u: f64, quad: &QuadratureSpec) -> Result<f64> {
        self.integral(0.0, u, quad)
    }

    /// `∫_a^b Φ` for `0 ≤ a ≤ b < ℓ`.
    pub fn integral(&self, a: f64, b: f64, quad: &QuadratureSpec) -> Result<f64> {
        for t in [a, b] {
            if !(t >= 0.0 && t < self.domain_length) {
                return Err(Error::OutOfRange { t, length: self.domain_length });
            }
        }
        if a > b {
            return Err(Error::InvalidArgument(format!("integral bounds [{a}, {b}] reversed")));
        }
        if a == b {
            return Ok(0.0);
        }
        if let ErrorBody::Power { c, p } = *self.body {
            return Ok(c * (b.powf(p + 1.0) - a.powf(p + 1.0)) / (p + 1.0));
        }
        if let ErrorBody::Table(t) = &*self.body {
            return Ok(t.integral(a, b));
        }
        integrate_piecewise(|t| self.eval_in_range(t), a, b, &self.knots(), quad)
    }

    /// Integral average of `Φ` over the hull of `{a, b}` (`a, b ≥ 0`).
    pub fn average(&self, a: f64, b: f64, quad: &QuadratureSpec) -> Result<f64> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if lo == hi {
            return self.eval(lo);
        }
        Ok(self.integral(lo, hi, quad)? / (hi - lo))
    }

    /// Integral average of `t ↦ Φ(|t|)` over the hull of `{a, b}`.
    pub fn symmetric_average(&self, a: f64, b: f64, quad: &QuadratureSpec) -> Result<f64> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if lo == hi {
            return self.eval(lo.abs());
        }
        let total = if lo >= 0.0 {
            self.integral(lo, hi, quad)?
        } else if hi <= 0.0 {
            self.integral(-hi, -lo, quad)?
        } else {
            self.integral(0.0, -lo, quad)? + self.integral(0.0, hi, quad)?
        };
        Ok(total / (hi - lo))
    }
}

impl fmt::Debug for ErrorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.body {
            ErrorBody::Power { c, p } => write!(f, "power(c={c}, p={p})")?,
            ErrorBody::Closed(_) => write!(f, "closed-form")?,
            ErrorBody::Table(t) => write!(f, "table({} samples)", t.xs().len())?,
            ErrorBody::Transformed(tr) => write!(f, "transform[{:?}]({:?})", tr.method(), tr.base())?,
        }
        write!(f, " on [0, {})", self.domain_length)
    }
}

/// Bounded memo shared by clones of one transformed body.
#[derive(Default)]
pub(crate) struct Memo {
    values: Mutex<HashMap<u64, f64>>,
}

impl Memo {
    const CAPACITY: usize = 1 << 16;

    pub(crate) fn get_or_compute(&self, t: f64, f: impl FnOnce() -> Result<f64>) -> Result<f64> {
        let key = t.to_bits();
        if let Some(v) = self.values.lock().expect("memo poisoned").get(&key) {
            return Ok(*v);
        }
        let v = f()?;
        let mut map = self.values.lock().expect("memo poisoned");
        if map.len() >= Self::CAPACITY {
            map.clear();
        }
        map.insert(key, v);
        Ok(v)
    }
}
