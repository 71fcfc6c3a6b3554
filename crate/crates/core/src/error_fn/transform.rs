use super::{ErrorBody, ErrorFunction, Memo};
use crate::domain::{CheckReport, Grid, MarginTracker};
use crate::error::{Error, Result};
use crate::numerics::{integrate_piecewise, QuadratureSpec};

/// Relative lower cut of the logarithmic quadrature; below it `Ψ` is
/// replaced by its fitted power law.
const CUT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformMethod {
    /// Closed form, only for power bases.
    Analytic,
    Quadrature,
}

/// Power-law model `Ψ(s) ≈ C·s^q` of the base near the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFit {
    pub coefficient: f64,
    pub exponent: f64,
}

impl PowerFit {
    /// `∫₀^δ C s^{q-1} ds`
    fn tail(&self, delta: f64) -> f64 {
        self.coefficient * delta.powf(self.exponent) / self.exponent
    }
}

pub(crate) struct Transformed {
    base: ErrorFunction,
    method: TransformMethod,
    /// `None` when `Ψ` vanishes near the origin.
    fit: Option<PowerFit>,
    quad: QuadratureSpec,
    memo: Memo,
}

impl Transformed {
    pub(crate) fn base(&self) -> &ErrorFunction {
        &self.base
    }

    pub(crate) fn method(&self) -> TransformMethod {
        self.method
    }

    pub(crate) fn eval(&self, t: f64) -> Result<f64> {
        let psi = self.base.eval_in_range(t)?;
        if t == 0.0 {
            return Ok(psi);
        }
        if self.method == TransformMethod::Analytic {
            let (c, p) = self.base.as_power().expect("analytic transform of a power");
            return Ok(psi + c * t.powf(p) / p);
        }
        self.memo.get_or_compute(t, || Ok(psi + self.singular_integral(t)?))
    }

    /// `∫₀ᵗ Ψ(s)/s ds`, substituting `s = e^w` on `[δ, t]`.
    fn singular_integral(&self, t: f64) -> Result<f64> {
        let delta = t * CUT;
        let tail = self.fit.map_or(0.0, |f| f.tail(delta));
        let log_knots: Vec<f64> =
            self.base.knots().into_iter().filter(|&k| k > delta && k < t).map(f64::ln).collect();
        let body = integrate_piecewise(
            |w| self.base.eval_in_range(w.exp().min(t)),
            delta.ln(),
            t.ln(),
            &log_knots,
            &self.quad,
        )?;
        Ok(tail + body)
    }
}

impl ErrorFunction {
    /// `Φ(u) = Ψ(u) + ∫₀ᵘ Ψ(t)/t dt` with the requested evaluation path.
    pub fn transformed(psi: &ErrorFunction, method: TransformMethod) -> Result<Self> {
        Self::transformed_with(psi, method, QuadratureSpec::default())
    }

    pub fn transformed_with(
        psi: &ErrorFunction,
        method: TransformMethod,
        quad: QuadratureSpec,
    ) -> Result<Self> {
        quad.validate()?;
        if method == TransformMethod::Analytic && psi.as_power().is_none() {
            return Err(Error::InvalidArgument(
                "analytic transform is available for power error functions only".into(),
            ));
        }
        let fit = fit_near_origin(psi)?;
        let body = Transformed { base: psi.clone(), method, fit, quad, memo: Memo::default() };
        Self::with_body(psi.domain_length(), ErrorBody::Transformed(body))
    }

    /// Forces the quadrature path even when a closed form exists.
    pub fn transformed_numeric(psi: &ErrorFunction) -> Result<Self> {
        Self::transformed(psi, TransformMethod::Quadrature)
    }

    /// The near-origin model used by a quadrature transform.
    pub fn near_origin_fit(&self) -> Option<PowerFit> {
        match &*self.body {
            ErrorBody::Transformed(tr) => tr.fit,
            _ => None,
        }
    }
}

/// The Ψ→Φ transform. Power bases map to the closed form
/// `power(c(p+1)/p, p)`; other bases are integrated numerically.
pub fn transform_psi_to_phi(psi: &ErrorFunction) -> Result<ErrorFunction> {
    match psi.as_power() {
        Some((c, p)) => ErrorFunction::power_on(c * (p + 1.0) / p, p, psi.domain_length()),
        None => ErrorFunction::transformed(psi, TransformMethod::Quadrature),
    }
}

/// Least-squares fit of `log Ψ` against `log s` on five geometric probes
/// below the smallest positive knot. Rejects bases whose fitted exponent is
/// not positive, since `Ψ(t)/t` is then not integrable at 0.
fn fit_near_origin(psi: &ErrorFunction) -> Result<Option<PowerFit>> {
    if let Some((c, p)) = psi.as_power() {
        return Ok((c > 0.0).then_some(PowerFit { coefficient: c, exponent: p }));
    }
    let scale = psi.domain_length().min(crate::domain::DEFAULT_HORIZON);
    let first_knot = psi.knots().into_iter().find(|&k| k > 0.0).unwrap_or(f64::INFINITY);
    let top = (scale * 1e-3).min(first_knot * 0.5);
    let mut logs = Vec::with_capacity(5);
    for k in 0..5 {
        let s = top * 10f64.powi(-k);
        let v = psi.eval_in_range(s)?;
        if v < 0.0 {
            return Err(Error::SingularTransform(format!("Ψ({s}) = {v} is negative")));
        }
        if v > 0.0 {
            logs.push((s.ln(), v.ln()));
        }
    }
    if logs.len() < 2 {
        if logs.len() == 1 {
            return Err(Error::SingularTransform(
                "Ψ has isolated positive values near 0; exponent fit is undetermined".into(),
            ));
        }
        return Ok(None);
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let q = sxy / sxx;
    if !(q > 1e-6) {
        return Err(Error::SingularTransform(format!(
            "Ψ(t)/t is not integrable at 0: fitted exponent {q:.4} ≤ 0"
        )));
    }
    Ok(Some(PowerFit { coefficient: (my - q * mx).exp(), exponent: q }))
}

/// Residual of `Ψ(u) + (1/u)∫₀ᵘ Φ = Φ(u)` at every grid point.
pub fn verify_cphi_identity(
    psi: &ErrorFunction,
    phi: &ErrorFunction,
    grid: &Grid,
    quad: &QuadratureSpec,
    tol: f64,
) -> Result<CheckReport> {
    let mut tracker = MarginTracker::new();
    for &u in grid.points() {
        if !(u > 0.0) {
            return Err(Error::OutOfRange { t: u, length: phi.domain_length() });
        }
        let lhs = psi.eval(u)? + phi.integral_from_zero(u, quad)? / u;
        let residual = lhs - phi.eval(u)?;
        tracker.observe(u, u, -residual.abs());
    }
    Ok(tracker.finish(tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Interp, Interval, RealFunction, SampledTable};
    use approx::assert_abs_diff_eq;

    #[test]
    fn power_maps_to_power() {
        let phi = transform_psi_to_phi(&ErrorFunction::power(1.0, 0.5).unwrap()).unwrap();
        assert_eq!(phi.as_power(), Some((3.0, 0.5)));
        let phi = transform_psi_to_phi(&ErrorFunction::power(1.0, 1.0).unwrap()).unwrap();
        assert_eq!(phi.as_power(), Some((2.0, 1.0)));
    }

    #[test]
    fn numeric_path_matches_closed_form() {
        let psi = ErrorFunction::power(1.5, 0.3).unwrap();
        let exact = transform_psi_to_phi(&psi).unwrap();
        let analytic = ErrorFunction::transformed(&psi, TransformMethod::Analytic).unwrap();
        let numeric = ErrorFunction::transformed_numeric(&psi).unwrap();
        for u in [1e-6, 0.01, 0.5, 1.0, 3.7] {
            let want = exact.eval(u).unwrap();
            assert_abs_diff_eq!(analytic.eval(u).unwrap(), want, epsilon = 1e-12 * want.max(1.0));
            assert_abs_diff_eq!(numeric.eval(u).unwrap(), want, epsilon = 1e-8);
        }
    }

    #[test]
    fn closed_form_base_uses_quadrature() {
        // Ψ(t) = t² gives Φ(u) = u² + u²/2
        let f = RealFunction::parse(Interval::new(0.0, 5.0).unwrap(), "t^2").unwrap();
        let psi = ErrorFunction::tabulated(f).unwrap();
        let phi = transform_psi_to_phi(&psi).unwrap();
        let fit = phi.near_origin_fit().unwrap();
        assert_abs_diff_eq!(fit.exponent, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(phi.eval(2.0).unwrap(), 6.0, epsilon = 1e-8);
    }

    #[test]
    fn table_base_through_origin() {
        let t = SampledTable::from_pairs(&[(0.0, 0.0), (1.0, 1.0), (2.0, 1.0)], Interp::Linear).unwrap();
        let psi = ErrorFunction::from_table(3.0, t).unwrap();
        let phi = transform_psi_to_phi(&psi).unwrap();
        // ∫₀¹ 1 ds + ∫₁² 1/s ds
        assert_abs_diff_eq!(phi.eval(2.0).unwrap(), 1.0 + 1.0 + 2f64.ln(), epsilon = 1e-8);
    }

    #[test]
    fn rejects_nonintegrable_base() {
        let f = RealFunction::parse(Interval::new(0.0, 1.0).unwrap(), "1").unwrap();
        let psi = ErrorFunction::tabulated(f).unwrap();
        assert!(matches!(transform_psi_to_phi(&psi), Err(Error::SingularTransform(_))));
        let f = RealFunction::parse(Interval::new(0.0, 1.0).unwrap(), "-t").unwrap();
        let psi = ErrorFunction::tabulated(f).unwrap();
        assert!(matches!(transform_psi_to_phi(&psi), Err(Error::SingularTransform(_))));
    }

    #[test]
    fn zero_base_transforms_to_zero() {
        let f = RealFunction::parse(Interval::new(0.0, 1.0).unwrap(), "0").unwrap();
        let psi = ErrorFunction::tabulated(f).unwrap();
        let phi = transform_psi_to_phi(&psi).unwrap();
        assert_eq!(phi.eval(0.5).unwrap(), 0.0);
    }

    #[test]
    fn cphi_identity() {
        let q = QuadratureSpec::default();
        let grid = Grid::with_default_margin(Interval::new(0.0, 2.0).unwrap(), 50).unwrap();
        let psi = ErrorFunction::power(0.7, 0.4).unwrap();
        let phi = transform_psi_to_phi(&psi).unwrap();
        assert!(verify_cphi_identity(&psi, &phi, &grid, &q, 1e-12).unwrap().holds());
        let numeric = ErrorFunction::transformed_numeric(&psi).unwrap();
        assert!(verify_cphi_identity(&psi, &numeric, &grid, &q, 1e-6).unwrap().holds());
        // the identity fails for Φ = Ψ
        assert!(!verify_cphi_identity(&psi, &psi, &grid, &q, 1e-6).unwrap().holds());
    }
}
