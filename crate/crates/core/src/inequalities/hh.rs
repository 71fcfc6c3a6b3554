use super::{ordered, screen_grid, witness_domain, BoundCertificate, BoundKind};
use crate::analysis::check_phi_monotone;
use crate::analysis::screen_monotone_phi;
use crate::domain::{CheckReport, MarginTracker, RealFunction, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::error_fn::ErrorFunction;
use crate::expr::{BinOp, CmpOp, Expr};
use crate::numerics::{integral_average, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GhhVariant {
    /// `𝒜(f,⟨u,v⟩) ≤ 𝒜(f,⟨w,z⟩) + 𝒜(Φ,⟨w−u,z−v⟩)` for `u ≤ w`, `v ≤ z`.
    Monotone,
    /// `|𝒜(f,⟨u,v⟩) − 𝒜(f,⟨w,z⟩)| ≤ 𝒜(Φ∘|·|,⟨w−u,z−v⟩)`.
    Holder,
}

/// Generalized Hermite–Hadamard inequality at one quadruple.
#[allow(clippy::too_many_arguments)]
pub fn check_generalized_hh(
    f: &RealFunction,
    phi: &ErrorFunction,
    (u, v, w, z): (f64, f64, f64, f64),
    variant: GhhVariant,
    quad: &QuadratureSpec,
    tol: f64,
) -> Result<CheckReport> {
    let a_uv = integral_average(f, u, v, quad)?;
    let a_wz = integral_average(f, w, z, quad)?;
    let slack = match variant {
        GhhVariant::Monotone => {
            if !(u <= w && v <= z) {
                return Err(Error::InvalidArgument(format!(
                    "monotone variant needs u ≤ w and v ≤ z, got ({u}, {v}, {w}, {z})"
                )));
            }
            a_wz + phi.average(w - u, z - v, quad)? - a_uv
        }
        GhhVariant::Holder => phi.symmetric_average(w - u, z - v, quad)? - (a_uv - a_wz).abs(),
    };
    let mut tracker = MarginTracker::new();
    tracker.observe(u, z, slack);
    Ok(tracker.finish(tol))
}

/// Slacks of the lower and upper Hermite–Hadamard inequalities on
/// `[x, y]`. `f` is re-screened for Φ-monotonicity on `[x, y]` first.
pub fn hh_bounds(
    f: &RealFunction,
    phi: &ErrorFunction,
    x: f64,
    y: f64,
    quad: &QuadratureSpec,
) -> Result<(f64, f64)> {
    ordered(x, y)?;
    let screen = check_phi_monotone(f, phi, &screen_grid(f, x, y)?, DEFAULT_TOLERANCE)?;
    if !screen.holds() {
        return Err(Error::HypothesisScreen(format!(
            "f is not Φ-monotone on [{x}, {y}], margin {:.3e}",
            screen.worst_margin
        )));
    }
    let avg = integral_average(f, x, y, quad)?;
    let allowance = phi.integral_from_zero(y - x, quad)? / (y - x);
    Ok((avg + allowance - f.eval(x)?, f.eval(y)? + allowance - avg))
}

fn apply_phi(phi: &ErrorFunction, arg: Expr) -> Box<Expr> {
    Box::new(Expr::ApplyError(phi.clone(), Box::new(arg)))
}

fn minus(a: Expr, b: Expr) -> Expr {
    Expr::Binary(BinOp::Sub, Box::new(a), Box::new(b))
}

/// Extremal functions for both Hermite–Hadamard inequalities on `[x, y]`:
/// `f̲ = −Φ(· − x)` right of `x` (0 before) and `f̄ = Φ(y − ·)` left of `y`
/// (0 after). Each attains the bound `(1/(y−x))∫₀^{y−x}Φ`.
pub fn hh_sharpness(
    phi: &ErrorFunction,
    x: f64,
    y: f64,
    quad: &QuadratureSpec,
    tol: f64,
) -> Result<(BoundCertificate, BoundCertificate)> {
    ordered(x, y)?;
    let domain = witness_domain(x, y, phi.domain_length())?;
    screen_monotone_phi(phi, domain.length().min(0.5 * phi.domain_length()), DEFAULT_TOLERANCE)?;
    let bound = phi.integral_from_zero(y - x, quad)? / (y - x);

    let below = Expr::If {
        op: CmpOp::Le,
        lhs: Box::new(Expr::Var),
        rhs: Box::new(Expr::Const(x)),
        then: Box::new(Expr::Const(0.0)),
        other: Box::new(Expr::Neg(apply_phi(phi, minus(Expr::Var, Expr::Const(x))))),
    };
    let f_lower = RealFunction::from_expr(domain, below).with_knots(&[x]);
    let lower_gap = f_lower.eval(x)? - integral_average(&f_lower, x, y, quad)?;

    let above = Expr::If {
        op: CmpOp::Lt,
        lhs: Box::new(Expr::Var),
        rhs: Box::new(Expr::Const(y)),
        then: apply_phi(phi, minus(Expr::Const(y), Expr::Var)),
        other: Box::new(Expr::Const(0.0)),
    };
    let f_upper = RealFunction::from_expr(domain, above).with_knots(&[y]);
    let upper_gap = integral_average(&f_upper, x, y, quad)? - f_upper.eval(y)?;

    Ok((
        BoundCertificate::new(BoundKind::HhLower, bound, lower_gap, Some(f_lower), tol),
        BoundCertificate::new(BoundKind::HhUpper, bound, upper_gap, Some(f_upper), tol),
    ))
}

/// Closed forms for `Φ(t) = c·t^p`, `0 < p ≤ 1`: the Hermite–Hadamard
/// allowance `c/(p+1)·(y−x)^p` and the Ostrowski-type allowance
/// `c/(p+1)·((point−x)^p + (y−point)^p)`.
pub fn power_case_bounds(c: f64, p_exp: f64, x: f64, y: f64, point: f64) -> Result<(f64, f64)> {
    if !(c >= 0.0) {
        return Err(Error::InvalidArgument(format!("c must be ≥ 0, got {c}")));
    }
    if !(p_exp > 0.0 && p_exp <= 1.0) {
        return Err(Error::InvalidArgument(format!("exponent must lie in (0, 1], got {p_exp}")));
    }
    ordered(x, y)?;
    if !(x <= point && point <= y) {
        return Err(Error::InvalidArgument(format!("point {point} outside [{x}, {y}]")));
    }
    let k = c / (p_exp + 1.0);
    Ok((k * (y - x).powf(p_exp), k * ((point - x).powf(p_exp) + (y - point).powf(p_exp))))
}
