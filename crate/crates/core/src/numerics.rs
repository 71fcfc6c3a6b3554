//! Quadrature and interval extrema.
//!
//! All integrals go through a composite rule refined by interval halving
//! until two successive estimates agree to within the requested tolerance.
//! Function bodies are split at their declared knots first, and each
//! smooth piece is integrated after the substitution
//! `u = a + (b − a)·ψ(r)`, `ψ(r) = r³(10 − 15r + 6r²)`, whose derivative
//! vanishes to second order at both ends. That keeps the rules convergent
//! on pieces with `(u − a)^p` endpoint behaviour and never samples a
//! piece exactly at a knot, where step bodies jump.

use crate::domain::{ExtendedReal, RealFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    CompositeSimpson,
    CompositeTrapezoid,
}

impl QuadratureRule {
    pub fn as_str(self) -> &'static str {
        match self {
            QuadratureRule::CompositeSimpson => "composite-simpson",
            QuadratureRule::CompositeTrapezoid => "composite-trapezoid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rule: QuadratureRule,
    pub initial_subdivisions: usize,
    pub tolerance: f64,
    pub max_refinements: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rule: QuadratureRule::CompositeSimpson,
            initial_subdivisions: 16,
            tolerance: 1e-10,
            max_refinements: 18,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerance(tolerance: f64) -> Self {
        QuadratureSpec { tolerance, ..Self::default() }
    }

    pub fn trapezoid(self) -> Self {
        QuadratureSpec { rule: QuadratureRule::CompositeTrapezoid, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidArgument("quadrature tolerance must be positive".into()));
        }
        if self.initial_subdivisions < 4 {
            return Err(Error::InvalidArgument("need at least 4 initial subdivisions".into()));
        }
        if self.rule == QuadratureRule::CompositeSimpson && !self.initial_subdivisions.is_multiple_of(2) {
            return Err(Error::InvalidArgument("simpson needs an even subdivision count".into()));
        }
        Ok(())
    }
}

/// Default number of points used by [`inf_over`] / [`sup_over`].
pub const DEFAULT_RESOLUTION: usize = 201;

/// Composite rule on `[a, b]` (`a < b`) for a generic integrand.
pub fn integrate<F>(mut g: F, a: f64, b: f64, quad: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    quad.validate()?;
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(g, b, a, quad).map(|v| -v);
    }
    let simpson = quad.rule == QuadratureRule::CompositeSimpson;
    // Trapezoid sums are nested under halving, so each refinement only
    // evaluates the new midpoints; Simpson is the Richardson combination.
    let mut n = if simpson { quad.initial_subdivisions / 2 } else { quad.initial_subdivisions };
    let mut h = (b - a) / n as f64;
    let edge_sum = 0.5 * (g(a)? + g(b)?);
    let mut inner = 0.0;
    for k in 1..n {
        inner += g(a + h * k as f64)?;
    }
    let mut trap = h * (edge_sum + inner);
    let mut refine = |n: &mut usize, h: &mut f64, inner: &mut f64, trap: &mut f64| -> Result<f64> {
        let prev = *trap;
        let mut mids = 0.0;
        for k in 0..*n {
            mids += g(a + *h * (k as f64 + 0.5))?;
        }
        *inner += mids;
        *n *= 2;
        *h *= 0.5;
        *trap = *h * (edge_sum + *inner);
        Ok(if simpson { (4.0 * *trap - prev) / 3.0 } else { *trap })
    };
    let mut estimate = if simpson { refine(&mut n, &mut h, &mut inner, &mut trap)? } else { trap };
    let mut last_change = f64::INFINITY;
    for _ in 0..quad.max_refinements {
        let next = refine(&mut n, &mut h, &mut inner, &mut trap)?;
        last_change = (next - estimate).abs();
        if !last_change.is_finite() {
            break;
        }
        if last_change <= quad.tolerance.max(1e-13 * next.abs()) {
            // one more Richardson step on the converged pair
            let order = if simpson { 15.0 } else { 3.0 };
            return Ok(next + (next - estimate) / order);
        }
        estimate = next;
    }
    Err(Error::QuadratureNonConvergence { a, b, last_change })
}

/// Integral over `[a, b]` after the endpoint-clustering substitution.
pub fn integrate_clustered<F>(mut g: F, a: f64, b: f64, quad: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let width = b - a;
    let result = integrate(
        |r| {
            let dpsi = 30.0 * r * r * (1.0 - r) * (1.0 - r);
            if dpsi == 0.0 {
                return Ok(0.0);
            }
            let psi = r * r * r * (10.0 + r * (-15.0 + 6.0 * r));
            Ok(g(a + width * psi)? * width * dpsi)
        },
        0.0,
        1.0,
        quad,
    );
    result.map_err(|e| match e {
        Error::QuadratureNonConvergence { last_change, .. } => {
            Error::QuadratureNonConvergence { a, b, last_change }
        }
        other => other,
    })
}

/// Splits `[a, b]` at every knot strictly inside and sums the pieces.
pub fn integrate_piecewise<F>(mut g: F, a: f64, b: f64, knots: &[f64], quad: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a > b {
        return integrate_piecewise(g, b, a, knots, quad).map(|v| -v);
    }
    let mut sum = 0.0;
    let mut left = a;
    for &k in knots.iter().filter(|&&k| k > a && k < b) {
        sum += integrate_clustered(&mut g, left, k, quad)?;
        left = k;
    }
    Ok(sum + integrate_clustered(&mut g, left, b, quad)?)
}

/// `∫_a^b f`, exact for sampled tables, knot-split quadrature otherwise.
pub fn integrate_function(f: &RealFunction, a: f64, b: f64, quad: &QuadratureSpec) -> Result<f64> {
    let dom = f.domain();
    dom.check(a)?;
    dom.check(b)?;
    if a == b {
        return Ok(0.0);
    }
    if let Some(t) = f.as_table() {
        return Ok(if a < b { t.integral(a, b) } else { -t.integral(b, a) });
    }
    integrate_piecewise(|x| f.eval(x), a, b, f.knots(), quad)
}

/// Mean of `f` over the convex hull of `{a, b}`; `f(a)` when `a = b`.
pub fn integral_average(f: &RealFunction, a: f64, b: f64, quad: &QuadratureSpec) -> Result<f64> {
    if a == b {
        return f.eval(a);
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    Ok(integrate_function(f, lo, hi, quad)? / (hi - lo))
}

/// Minimum of `f` over a `resolution`-point closed grid on `[a, b]` plus
/// the knots of `f` inside it. This over-estimates the true infimum except
/// for sampled tables, where the candidate set is exact.
pub fn inf_over(f: &RealFunction, a: f64, b: f64, resolution: usize) -> Result<ExtendedReal> {
    extremum(f, a, b, resolution, f64::min)
}

/// Mirror of [`inf_over`].
pub fn sup_over(f: &RealFunction, a: f64, b: f64, resolution: usize) -> Result<ExtendedReal> {
    extremum(f, a, b, resolution, f64::max)
}

fn extremum(
    f: &RealFunction,
    a: f64,
    b: f64,
    resolution: usize,
    pick: fn(f64, f64) -> f64,
) -> Result<ExtendedReal> {
    if !(a <= b) {
        return Err(Error::InvalidArgument(format!("extremum over [{a}, {b}] needs a ≤ b")));
    }
    if resolution < 2 {
        return Err(Error::InvalidArgument("resolution must be at least 2".into()));
    }
    let dom = f.domain();
    dom.check(a)?;
    dom.check(b)?;
    if let Some(t) = f.as_table() {
        let best = t.extreme_candidates(a, b).reduce(pick).expect("non-empty");
        return Ok(ExtendedReal::from(best));
    }
    let mut best = f.eval(a)?;
    if a < b {
        let last = (resolution - 1) as f64;
        for k in 1..resolution - 1 {
            best = pick(best, f.eval(a + (b - a) * k as f64 / last)?);
        }
        best = pick(best, f.eval(b)?);
        for &k in f.knots().iter().filter(|&&k| k > a && k < b) {
            best = pick(best, f.eval(k)?);
        }
    }
    Ok(ExtendedReal::from(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Interp, Interval, SampledTable};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn on(lo: f64, hi: f64, src: &str) -> RealFunction {
        RealFunction::parse(Interval::new(lo, hi).unwrap(), src).unwrap()
    }

    fn fin(v: ExtendedReal) -> f64 {
        v.finite().unwrap()
    }

    #[test]
    fn average_of_linear_is_midpoint_value() {
        let f = on(0.0, 1.0, "x");
        let q = QuadratureSpec::default();
        assert_abs_diff_eq!(integral_average(&f, 0.2, 0.8, &q).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_average_is_point_value() {
        let f = on(0.0, 2.0, "x^2");
        assert_eq!(integral_average(&f, 1.0, 1.0, &QuadratureSpec::default()).unwrap(), 1.0);
    }

    #[test]
    fn average_of_square_over_unit_window() {
        // ∫₀¹ x² = 1/3; the window (−1, 2) keeps 0 and 1 interior.
        let f = on(-1.0, 2.0, "x^2");
        let q = QuadratureSpec::default();
        let v = integral_average(&f, 0.0, 1.0, &q).unwrap();
        assert_abs_diff_eq!(v, 1.0 / 3.0, epsilon = 10.0 * q.tolerance);
    }

    #[test]
    fn endpoint_singular_derivative_converges() {
        // ∫₀¹ x^0.25 = 0.8
        let q = QuadratureSpec::default();
        let v = integrate_clustered(|x| Ok(x.powf(0.25)), 0.0, 1.0, &q).unwrap();
        assert_abs_diff_eq!(v, 0.8, epsilon = 1e-9);
    }

    #[test]
    fn step_bodies_split_at_knots() {
        let f = on(0.0, 4.0, "if(x < 2, 1, 3)").with_knots(&[2.0]);
        let q = QuadratureSpec::default();
        assert_abs_diff_eq!(integrate_function(&f, 1.0, 3.0, &q).unwrap(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn nonconvergence_is_reported() {
        let q = QuadratureSpec { max_refinements: 2, tolerance: 1e-15, ..Default::default() };
        let r = integrate(|x| Ok((50.0 * x).sin()), 0.0, 10.0, &q);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    }

    #[test]
    fn invalid_specs() {
        let odd = QuadratureSpec { initial_subdivisions: 5, ..Default::default() };
        assert!(odd.validate().is_err());
        assert!(odd.trapezoid().validate().is_ok());
        assert!(QuadratureSpec::with_tolerance(0.0).validate().is_err());
    }

    #[test]
    fn extrema_examples() {
        let id = on(0.0, 4.0, "x");
        assert_eq!(fin(inf_over(&id, 1.0, 3.0, DEFAULT_RESOLUTION).unwrap()), 1.0);
        assert_eq!(fin(sup_over(&id, 1.0, 3.0, DEFAULT_RESOLUTION).unwrap()), 3.0);
        let bowl = on(0.0, 4.0, "(x - 2)^2");
        assert_eq!(fin(inf_over(&bowl, 1.0, 3.0, 201).unwrap()), 0.0);
        let cap = on(0.0, 4.0, "-(x - 2)^2");
        assert_eq!(fin(sup_over(&cap, 1.0, 3.0, 201).unwrap()), 0.0);
        let seven = on(0.0, 4.0, "7");
        assert_eq!(fin(sup_over(&seven, 0.5, 3.5, 11).unwrap()), 7.0);
        let t = SampledTable::from_pairs(&[(1.0, 5.0), (2.0, -1.0), (3.0, 4.0)], Interp::Linear).unwrap();
        let tf = RealFunction::sampled(Interval::new(0.0, 4.0).unwrap(), t).unwrap();
        assert_eq!(fin(inf_over(&tf, 1.0, 3.0, 2).unwrap()), -1.0);
        assert_eq!(fin(sup_over(&tf, 1.0, 3.0, 2).unwrap()), 5.0);
    }

    #[test]
    fn extremum_argument_checks() {
        let id = on(0.0, 4.0, "x");
        assert!(inf_over(&id, 3.0, 1.0, 10).is_err());
        assert!(inf_over(&id, 1.0, 3.0, 1).is_err());
        assert!(inf_over(&id, 1.0, 5.0, 10).is_err());
    }

    proptest! {
        #[test]
        fn average_is_order_free(a in 0.05f64..1.95, b in 0.05f64..1.95) {
            let f = on(0.0, 2.0, "exp(x) * sqrt(x)");
            let q = QuadratureSpec::default();
            let ab = integral_average(&f, a, b, &q).unwrap();
            let ba = integral_average(&f, b, a, &q).unwrap();
            prop_assert!((ab - ba).abs() <= q.tolerance);
        }

        #[test]
        fn inf_below_sup(a in 0.05f64..1.95, w in 0.0f64..1.0, c in -3.0f64..3.0) {
            let f = on(0.0, 2.0, &format!("x^3 - {}*x", c.abs()));
            let b = (a + w).min(1.95);
            let lo = inf_over(&f, a, b, 31).unwrap();
            let hi = sup_over(&f, a, b, 31).unwrap();
            prop_assert!(lo <= hi);
            if a == b {
                prop_assert_eq!(fin(lo), f.eval(a).unwrap());
                prop_assert_eq!(fin(hi), f.eval(a).unwrap());
            }
        }

        #[test]
        fn monotone_extrema_are_endpoint_values(a in 0.05f64..1.95, w in 0.0f64..1.0) {
            let f = on(0.0, 2.0, "x^3 + exp(x)");
            let b = (a + w).min(1.95);
            prop_assert_eq!(fin(inf_over(&f, a, b, 51).unwrap()), f.eval(a).unwrap());
            prop_assert_eq!(fin(sup_over(&f, a, b, 51).unwrap()), f.eval(b).unwrap());
        }

        #[test]
        fn simpson_and_trapezoid_agree(a in 0.05f64..1.0, w in 0.1f64..0.9) {
            let f = on(0.0, 2.0, "exp(-x) * (1 + x^2)");
            let q = QuadratureSpec::with_tolerance(1e-9);
            let s = integral_average(&f, a, a + w, &q).unwrap();
            let t = integral_average(&f, a, a + w, &q.trapezoid()).unwrap();
            prop_assert!((s - t).abs() <= 10.0 * q.tolerance);
        }
    }
}
