use crate::analysis::pairs::{check_lag_range, monotone_slack};
use crate::domain::{CheckReport, Grid, LagGrid, MarginTracker, RealFunction, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::error_fn::{check_absolutely_subadditive, check_nondecreasing, check_subadditive, ErrorFunction};
use crate::expr::{BinOp, CmpOp, Expr};
use crate::numerics::{inf_over, sup_over, DEFAULT_RESOLUTION};

const SCREEN_POINTS: usize = 41;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterpolationSide {
    Below,
    Above,
}

impl InterpolationSide {
    pub fn as_str(self) -> &'static str {
        match self {
            InterpolationSide::Below => "below",
            InterpolationSide::Above => "above",
        }
    }
}

fn screen_failure(what: &str, rep: &CheckReport) -> Error {
    let at = rep.witness.map(|w| format!(" at ({}, {})", w.x, w.y)).unwrap_or_default();
    Error::HypothesisScreen(format!("Φ is not {what}{at}, margin {:.3e}", rep.worst_margin))
}

/// Screens `Φ` for subadditivity and monotonicity on lags up to `span`.
pub(crate) fn screen_monotone_phi(phi: &ErrorFunction, span: f64, tol: f64) -> Result<()> {
    let lags = LagGrid::spanning(phi.domain_length(), span, SCREEN_POINTS)?;
    let rep = check_nondecreasing(phi, &lags, tol)?;
    if !rep.holds() {
        return Err(screen_failure("nondecreasing", &rep));
    }
    let rep = check_subadditive(phi, &lags, tol)?;
    if !rep.holds() {
        return Err(screen_failure("subadditive", &rep));
    }
    Ok(())
}

/// Screens `Φ(0) = 0` and absolute subadditivity on lags up to `span`.
pub(crate) fn screen_holder_phi(phi: &ErrorFunction, span: f64, tol: f64) -> Result<()> {
    let at_zero = phi.eval(0.0)?;
    if at_zero.abs() > tol {
        return Err(Error::NonzeroAtZero { value: at_zero });
    }
    let lags = LagGrid::spanning(phi.domain_length(), span, SCREEN_POINTS)?;
    let rep = check_absolutely_subadditive(phi, &lags, tol)?;
    if !rep.holds() {
        return Err(screen_failure("absolutely subadditive", &rep));
    }
    Ok(())
}

fn screen_nondecreasing(h: &RealFunction) -> Result<()> {
    let grid = h.screening_grid()?;
    let vals = h.sample(grid.points())?;
    for (w, v) in grid.points().windows(2).zip(vals.windows(2)) {
        let drop = v[0] - v[1];
        if drop > DEFAULT_TOLERANCE {
            return Err(Error::NonMonotoneInput { x: w[0], y: w[1], drop });
        }
    }
    Ok(())
}

fn apply(f: &RealFunction) -> Box<Expr> {
    Box::new(Expr::Apply(f.clone(), Box::new(Expr::Var)))
}

/// `Φ(|x − p|)` or `Φ(±(x − p))` as an expression.
fn phi_of(phi: &ErrorFunction, arg: Expr) -> Expr {
    Expr::ApplyError(phi.clone(), Box::new(arg))
}

fn shifted(p: f64, reversed: bool) -> Expr {
    let (a, b) = if reversed { (Expr::Const(p), Expr::Var) } else { (Expr::Var, Expr::Const(p)) };
    Expr::Binary(BinOp::Sub, Box::new(a), Box::new(b))
}

fn cutoff(p: f64, op: CmpOp, then: Box<Expr>, other: Box<Expr>) -> Expr {
    Expr::If { op, lhs: Box::new(Expr::Var), rhs: Box::new(Expr::Const(p)), then, other }
}

/// `h_p`: `h` left of `p`, `h(p) − Φ(x − p)` right of it.
pub fn build_lower_block(h: &RealFunction, p: f64, phi: &ErrorFunction) -> Result<RealFunction> {
    h.domain().check(p)?;
    screen_nondecreasing(h)?;
    let hp = h.eval(p)?;
    let decay = Expr::Binary(BinOp::Sub, Box::new(Expr::Const(hp)), Box::new(phi_of(phi, shifted(p, false))));
    let body = cutoff(p, CmpOp::Le, apply(h), Box::new(decay));
    Ok(RealFunction::from_expr(h.domain(), body).with_knots(&[p]))
}

/// `h^p`: `h(p) + Φ(p − x)` left of `p`, `h` from `p` on.
pub fn build_upper_block(h: &RealFunction, p: f64, phi: &ErrorFunction) -> Result<RealFunction> {
    h.domain().check(p)?;
    screen_nondecreasing(h)?;
    let hp = h.eval(p)?;
    let growth = Expr::Binary(BinOp::Add, Box::new(Expr::Const(hp)), Box::new(phi_of(phi, shifted(p, true))));
    let body = cutoff(p, CmpOp::Lt, Box::new(growth), apply(h));
    Ok(RealFunction::from_expr(h.domain(), body).with_knots(&[p]))
}

fn pivot(grid: &Grid, p: f64) -> Result<()> {
    grid.index_of(p).map(|_| ()).ok_or_else(|| Error::InvalidArgument(format!("p = {p} is not a grid point")))
}

fn bounded(v: Result<crate::domain::ExtendedReal>) -> Result<f64> {
    match v {
        Ok(e) if e.is_finite() => Ok(f64::INFINITY),
        Ok(_) | Err(Error::Evaluation(_)) => Ok(f64::NEG_INFINITY),
        Err(e) => Err(e),
    }
}

/// Feasibility of a Φ-monotone interpolant touching `f` at `p` from the
/// given side.
pub fn can_interpolate_monotone(
    f: &RealFunction,
    p: f64,
    side: InterpolationSide,
    phi: &ErrorFunction,
    grid: &Grid,
    tol: f64,
) -> Result<CheckReport> {
    pivot(grid, p)?;
    check_lag_range(grid, phi)?;
    screen_monotone_phi(phi, grid.diameter(), tol)?;
    let fp = f.eval(p)?;
    let mut tracker = MarginTracker::new();
    for &x in grid.points() {
        let slack = match side {
            InterpolationSide::Below if x <= p => bounded(inf_over(f, x, p, DEFAULT_RESOLUTION))?,
            InterpolationSide::Below => monotone_slack(fp, f.eval(x)?, phi.eval(x - p)?),
            InterpolationSide::Above if x < p => monotone_slack(f.eval(x)?, fp, phi.eval(p - x)?),
            InterpolationSide::Above => bounded(sup_over(f, p, x, DEFAULT_RESOLUTION))?,
        };
        tracker.observe(x, p, slack);
    }
    Ok(tracker.finish(tol))
}

/// Feasibility of a Φ-Hölder interpolant touching `f` at `p`.
pub fn can_interpolate_holder(
    f: &RealFunction,
    p: f64,
    side: InterpolationSide,
    phi: &ErrorFunction,
    grid: &Grid,
    tol: f64,
) -> Result<CheckReport> {
    pivot(grid, p)?;
    check_lag_range(grid, phi)?;
    screen_holder_phi(phi, grid.diameter(), tol)?;
    let fp = f.eval(p)?;
    let mut tracker = MarginTracker::new();
    for &x in grid.points() {
        let (fx, d) = (f.eval(x)?, phi.eval((x - p).abs())?);
        let slack = match side {
            InterpolationSide::Below => fx + d - fp,
            InterpolationSide::Above => fp + d - fx,
        };
        tracker.observe(x, p, slack);
    }
    Ok(tracker.finish(tol))
}

/// `f(p) − Φ(|x − p|)` (below) or `f(p) + Φ(|x − p|)` (above).
pub fn build_holder_interpolant(
    f: &RealFunction,
    p: f64,
    side: InterpolationSide,
    phi: &ErrorFunction,
) -> Result<RealFunction> {
    let at_zero = phi.eval(0.0)?;
    if at_zero != 0.0 {
        return Err(Error::NonzeroAtZero { value: at_zero });
    }
    let fp = f.eval(p)?;
    let dist = Expr::Call(crate::expr::Func::Abs, Box::new(shifted(p, false)));
    let op = match side {
        InterpolationSide::Below => BinOp::Sub,
        InterpolationSide::Above => BinOp::Add,
    };
    let body = Expr::Binary(op, Box::new(Expr::Const(fp)), Box::new(phi_of(phi, dist)));
    Ok(RealFunction::from_expr(f.domain(), body).with_knots(&[p]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::check_phi_monotone;
    use crate::domain::{Interp, Interval, SampledTable};

    fn dom(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn pow(c: f64, p: f64) -> ErrorFunction {
        ErrorFunction::power(c, p).unwrap()
    }

    #[test]
    fn lower_block_values() {
        let h = RealFunction::parse(dom(0.0, 4.0), "x").unwrap();
        let hp = build_lower_block(&h, 2.0, &pow(1.0, 1.0)).unwrap();
        assert_eq!(hp.eval(1.0).unwrap(), 1.0);
        assert_eq!(hp.eval(3.0).unwrap(), 1.0);
        let frozen = build_lower_block(&h, 2.0, &pow(0.0, 1.0)).unwrap();
        assert_eq!(frozen.eval(3.0).unwrap(), 2.0);
        assert!(hp.knots().contains(&2.0));
    }

    #[test]
    fn lower_block_of_step_table() {
        let t = SampledTable::from_pairs(&[(1.0, 0.0), (2.0, 1.0), (3.0, 2.0)], Interp::LeftStep).unwrap();
        let h = RealFunction::sampled(dom(0.0, 4.0), t).unwrap();
        let phi = pow(1.0, 0.5);
        let hp = build_lower_block(&h, 2.0, &phi).unwrap();
        assert_eq!(hp.eval(3.0).unwrap(), 0.0);
        let grid = Grid::with_default_margin(dom(0.0, 4.0), 101).unwrap();
        assert!(check_phi_monotone(&hp, &phi, &grid, 1e-9).unwrap().holds());
    }

    #[test]
    fn upper_block_values() {
        let h = RealFunction::parse(dom(0.0, 4.0), "x").unwrap();
        let hp = build_upper_block(&h, 2.0, &pow(1.0, 1.0)).unwrap();
        assert_eq!(hp.eval(1.0).unwrap(), 3.0);
        assert_eq!(hp.eval(3.0).unwrap(), 3.0);
        let frozen = build_upper_block(&h, 2.0, &pow(0.0, 1.0)).unwrap();
        assert_eq!(frozen.eval(1.0).unwrap(), 2.0);
        let zero = RealFunction::parse(dom(0.0, 4.0), "0").unwrap();
        let hp = build_upper_block(&zero, 2.0, &pow(1.0, 0.5)).unwrap();
        assert_eq!(hp.eval(1.0).unwrap(), 1.0);
    }

    #[test]
    fn blocks_reject_decreasing_input() {
        let h = RealFunction::parse(dom(0.0, 1.0), "-x").unwrap();
        let err = build_lower_block(&h, 0.5, &pow(1.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::NonMonotoneInput { .. }));
        assert!(build_upper_block(&h, 0.5, &pow(1.0, 1.0)).is_err());
    }

    #[test]
    fn monotone_interpolation_conditions() {
        let grid = Grid::with_default_margin(dom(0.0, 4.0), 41).unwrap();
        let p = grid.points()[10];
        let f = RealFunction::parse(dom(0.0, 4.0), "-sqrt(x)").unwrap();
        let rep =
            can_interpolate_monotone(&f, p, InterpolationSide::Below, &pow(1.0, 0.5), &grid, 1e-9).unwrap();
        assert!(rep.holds());

        let g = Grid::from_points(dom(0.0, 1.0), vec![0.1, 0.5, 0.9]).unwrap();
        let f = RealFunction::parse(dom(0.0, 1.0), "-2*x").unwrap();
        let rep =
            can_interpolate_monotone(&f, 0.1, InterpolationSide::Below, &pow(1.0, 1.0), &g, 1e-9).unwrap();
        assert!(!rep.holds());
        assert_eq!(rep.witness.unwrap().x, 0.9);

        // f(p) is the grid minimum and Φ is huge
        let f = RealFunction::parse(dom(0.0, 1.0), "(x - 0.5)^2").unwrap();
        let g = Grid::from_points(dom(0.0, 1.0), vec![0.1, 0.3, 0.5, 0.7, 0.9]).unwrap();
        for side in [InterpolationSide::Below, InterpolationSide::Above] {
            let rep = can_interpolate_monotone(&f, 0.5, side, &pow(1e3, 1.0), &g, 1e-9).unwrap();
            assert!(rep.holds());
        }
    }

    #[test]
    fn monotone_interpolation_screens_phi() {
        let grid = Grid::with_default_margin(dom(0.0, 1.0), 11).unwrap();
        let f = RealFunction::parse(dom(0.0, 1.0), "x").unwrap();
        let p = grid.points()[5];
        let err = can_interpolate_monotone(&f, p, InterpolationSide::Below, &pow(1.0, 2.0), &grid, 1e-9);
        assert!(matches!(err, Err(Error::HypothesisScreen(_))));
        let err = can_interpolate_monotone(&f, 0.123, InterpolationSide::Below, &pow(1.0, 1.0), &grid, 1e-9);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn holder_interpolation_conditions() {
        let grid = Grid::with_default_margin(dom(0.0, 4.0), 41).unwrap();
        let p = grid.points()[10];
        let f = RealFunction::parse(dom(0.0, 4.0), "sqrt(x)").unwrap();
        let phi = pow(1.0, 0.5);
        for side in [InterpolationSide::Below, InterpolationSide::Above] {
            assert!(can_interpolate_holder(&f, p, side, &phi, &grid, 1e-9).unwrap().holds());
        }
        let c = RealFunction::parse(dom(0.0, 4.0), "3").unwrap();
        assert!(can_interpolate_holder(&c, p, InterpolationSide::Above, &phi, &grid, 0.0).unwrap().holds());

        let g = Grid::from_points(dom(0.0, 1.0), vec![0.1, 0.5, 0.9]).unwrap();
        let f = RealFunction::parse(dom(0.0, 1.0), "x").unwrap();
        let rep =
            can_interpolate_holder(&f, 0.5, InterpolationSide::Above, &pow(0.1, 1.0), &g, 1e-9).unwrap();
        assert!(!rep.holds());
        assert_eq!(rep.witness.unwrap().x, 0.9);
    }

    #[test]
    fn holder_interpolant_values() {
        let f = RealFunction::parse(dom(0.0, 4.0), "sqrt(x)").unwrap();
        let phi = pow(1.0, 0.5);
        let lo = build_holder_interpolant(&f, 1.0, InterpolationSide::Below, &phi).unwrap();
        assert_eq!(lo.eval(1.0).unwrap(), 1.0);
        assert_eq!(lo.eval(2.0).unwrap(), 0.0);
        let hi = build_holder_interpolant(&f, 1.0, InterpolationSide::Above, &phi).unwrap();
        assert!((hi.eval(0.5).unwrap() - (1.0 + 0.5f64.sqrt())).abs() < 1e-15);
        let flat = build_holder_interpolant(&f, 1.0, InterpolationSide::Below, &pow(0.0, 1.0)).unwrap();
        assert_eq!(flat.eval(3.3).unwrap(), 1.0);

        let shifted =
            ErrorFunction::tabulated(RealFunction::parse(dom(0.0, 10.0), "1 + t").unwrap()).unwrap();
        let err = build_holder_interpolant(&f, 1.0, InterpolationSide::Below, &shifted).unwrap_err();
        assert!(matches!(err, Error::NonzeroAtZero { .. }));
    }
}
