use super::{ordered, screen_grid, witness_domain, BoundCertificate, BoundKind};
use crate::analysis::{check_phi_holder, screen_holder_phi, screen_monotone_phi};
use crate::domain::{CheckReport, MarginTracker, RealFunction, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::error_fn::ErrorFunction;
use crate::expr::{BinOp, Expr, Func};
use crate::numerics::{integral_average, integrate_function, QuadratureSpec};

fn pivot_inside(x: f64, y: f64, p: f64) -> Result<()> {
    ordered(x, y)?;
    if x <= p && p <= y {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("p = {p} outside [{x}, {y}]")))
    }
}

/// `(1/(y−x))(∫₀^{p−x}Φ + ∫₀^{y−p}Φ)`
fn allowance(phi: &ErrorFunction, x: f64, y: f64, p: f64, quad: &QuadratureSpec) -> Result<f64> {
    Ok((phi.integral_from_zero(p - x, quad)? + phi.integral_from_zero(y - p, quad)?) / (y - x))
}

/// Ostrowski-type bound `|f(p) − 𝒜(f,[x,y])| ≤ allowance`; `f` is
/// re-screened for the Φ-Hölder property on `[x, y]`.
pub fn ostrowski_bound(
    f: &RealFunction,
    phi: &ErrorFunction,
    x: f64,
    y: f64,
    p: f64,
    quad: &QuadratureSpec,
    tol: f64,
) -> Result<CheckReport> {
    pivot_inside(x, y, p)?;
    let screen = check_phi_holder(f, phi, &screen_grid(f, x, y)?, DEFAULT_TOLERANCE)?;
    if !screen.holds() {
        return Err(Error::HypothesisScreen(format!(
            "f is not Φ-Hölder on [{x}, {y}], margin {:.3e}",
            screen.worst_margin
        )));
    }
    let deviation = (f.eval(p)? - integral_average(f, x, y, quad)?).abs();
    let mut tracker = MarginTracker::new();
    tracker.observe_triple(x, p, y, allowance(phi, x, y, p, quad)? - deviation);
    Ok(tracker.finish(tol))
}

/// Compares the Ostrowski allowance with the deviation attained by
/// `Φ_p = Φ(|· − p|)`.
pub fn ostrowski_sharpness(
    phi: &ErrorFunction,
    x: f64,
    y: f64,
    p: f64,
    quad: &QuadratureSpec,
    tol: f64,
) -> Result<BoundCertificate> {
    pivot_inside(x, y, p)?;
    let domain = witness_domain(x, y, phi.domain_length())?;
    let span = domain.length().min(0.5 * phi.domain_length());
    screen_monotone_phi(phi, span, DEFAULT_TOLERANCE)?;
    screen_holder_phi(phi, span, DEFAULT_TOLERANCE)?;

    let dist = Expr::Call(
        Func::Abs,
        Box::new(Expr::Binary(BinOp::Sub, Box::new(Expr::Var), Box::new(Expr::Const(p)))),
    );
    let phi_p =
        RealFunction::from_expr(domain, Expr::ApplyError(phi.clone(), Box::new(dist))).with_knots(&[p]);
    let integral = integrate_function(&phi_p, x, y, quad)?;
    let achieved = (phi_p.eval(p)? - integral / (y - x)).abs();
    let bound = allowance(phi, x, y, p, quad)?;
    Ok(BoundCertificate::new(BoundKind::Ostrowski, bound, achieved, Some(phi_p), tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Interval;
    use approx::assert_abs_diff_eq;

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn pow(c: f64, p: f64) -> ErrorFunction {
        ErrorFunction::power(c, p).unwrap()
    }

    #[test]
    fn constant_has_full_slack() {
        let f = RealFunction::parse(Interval::new(0.0, 2.0).unwrap(), "4").unwrap();
        let rep = ostrowski_bound(&f, &pow(1.0, 1.0), 0.5, 1.5, 0.7, &q(), 0.0).unwrap();
        // (0.2² + 0.8²)/2
        assert_abs_diff_eq!(rep.worst_margin, 0.34, epsilon = 1e-12);
    }

    #[test]
    fn root_satisfies_bound() {
        let f = RealFunction::parse(Interval::new(0.0, 5.0).unwrap(), "sqrt(x)").unwrap();
        let rep = ostrowski_bound(&f, &pow(1.0, 0.5), 1.0, 4.0, 2.0, &q(), 1e-9).unwrap();
        assert!(rep.holds() && rep.worst_margin > 0.0);
    }

    #[test]
    fn distance_function_attains_bound() {
        let f = RealFunction::parse(Interval::new(0.0, 2.0).unwrap(), "abs(x - 1)").unwrap();
        let rep = ostrowski_bound(&f, &pow(1.0, 1.0), 0.5, 1.5, 1.0, &q(), 1e-9).unwrap();
        assert_abs_diff_eq!(rep.worst_margin, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rescreens_holder_hypothesis() {
        let f = RealFunction::parse(Interval::new(0.0, 2.0).unwrap(), "3*x").unwrap();
        let err = ostrowski_bound(&f, &pow(1.0, 1.0), 0.5, 1.5, 1.0, &q(), 1e-9).unwrap_err();
        assert!(matches!(err, Error::HypothesisScreen(_)));
    }

    #[test]
    fn sharpness_examples() {
        let c = ostrowski_sharpness(&pow(1.0, 0.5), 0.0, 1.0, 0.5, &q(), 1e-8).unwrap();
        let want = (2.0 / 3.0) * 2.0 * 0.5f64.powf(1.5);
        assert_abs_diff_eq!(c.bound_value, want, epsilon = 1e-14);
        assert_abs_diff_eq!(c.achieved_value, want, epsilon = 1e-9);
        assert!((want - 0.4714).abs() < 1e-4);
        let c = ostrowski_sharpness(&pow(1.0, 1.0), 0.0, 1.0, 1.0, &q(), 1e-8).unwrap();
        assert_abs_diff_eq!(c.bound_value, 0.5, epsilon = 1e-15);
        assert!(c.is_sharp());
        let c = ostrowski_sharpness(&pow(0.0, 1.0), 0.0, 1.0, 0.3, &q(), 1e-12).unwrap();
        assert_eq!((c.bound_value, c.achieved_value), (0.0, 0.0));
        assert!(ostrowski_sharpness(&pow(1.0, 1.0), 0.0, 1.0, 1.2, &q(), 1e-8).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(32))]

        #[test]
        fn sharpness_gap_within_quadrature_tolerance(
            c in 0.0f64..2.0, e in 0.2f64..1.0, x in -1.0f64..1.0, w in 0.01f64..2.0, s in 0.0f64..1.0,
        ) {
            let spec = 10.0 * q().tolerance;
            let cert = ostrowski_sharpness(&pow(c, e), x, x + w, x + s * w, &q(), spec).unwrap();
            proptest::prop_assert!(cert.is_sharp(), "{:?}", cert.gap);
        }
    }
}
