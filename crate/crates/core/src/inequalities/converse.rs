use super::{linspace, ordered};
use crate::analysis::{check_lag_range, check_phi_holder, check_phi_monotone};
use crate::domain::{CheckReport, Grid, Interp, MarginTracker, RealFunction, SampledTable};
use crate::error::{Error, Result};
use crate::error_fn::{transform_psi_to_phi, ErrorFunction};
use crate::numerics::{integrate_function, QuadratureSpec};

/// Integral-average premises of the converse theorems, for grid pairs
/// `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConverseVariant {
    /// `f(u) ≤ 𝒜(f,[u,v]) + Ψ(v−u)`
    Left,
    /// `𝒜(f,[u,v]) ≤ f(v) + Ψ(v−u)`
    Right,
    /// `|f(u) − 𝒜(f,[u,v])| ≤ Ψ(v−u)`
    HolderLeft,
    /// `|f(v) − 𝒜(f,[u,v])| ≤ Ψ(v−u)`
    HolderRight,
}

impl ConverseVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            ConverseVariant::Left => "left",
            ConverseVariant::Right => "right",
            ConverseVariant::HolderLeft => "holder_left",
            ConverseVariant::HolderRight => "holder_right",
        }
    }

    pub fn is_holder(self) -> bool {
        matches!(self, ConverseVariant::HolderLeft | ConverseVariant::HolderRight)
    }
}

impl std::str::FromStr for ConverseVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "left" => ConverseVariant::Left,
            "right" => ConverseVariant::Right,
            "holder_left" => ConverseVariant::HolderLeft,
            "holder_right" => ConverseVariant::HolderRight,
            _ => return Err(Error::InvalidArgument(format!("unknown converse variant `{s}`"))),
        })
    }
}

#[inline]
fn left_slack(fu: f64, avg: f64, psi: f64) -> f64 {
    avg + psi - fu
}

#[inline]
fn right_slack(fv: f64, avg: f64, psi: f64) -> f64 {
    fv + psi - avg
}

/// `∫_{g₀}^{gₖ} f` at every grid point, accumulated cell by cell.
fn cumulative_integrals(f: &RealFunction, pts: &[f64], quad: &QuadratureSpec) -> Result<Vec<f64>> {
    let mut acc = Vec::with_capacity(pts.len());
    acc.push(0.0);
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += integrate_function(f, w[0], w[1], quad)?;
        acc.push(total);
    }
    Ok(acc)
}

pub fn check_converse_premise(
    f: &RealFunction,
    psi: &ErrorFunction,
    variant: ConverseVariant,
    grid: &Grid,
    quad: &QuadratureSpec,
    tol: f64,
) -> Result<CheckReport> {
    check_lag_range(grid, psi)?;
    let pts = grid.points();
    let vals = f.sample(pts)?;
    let cum = cumulative_integrals(f, pts, quad)?;
    let mut tracker = MarginTracker::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let avg = (cum[j] - cum[i]) / (pts[j] - pts[i]);
            let psi_d = psi.eval(pts[j] - pts[i])?;
            let slack = match variant {
                ConverseVariant::Left => left_slack(vals[i], avg, psi_d),
                ConverseVariant::Right => right_slack(vals[j], avg, psi_d),
                ConverseVariant::HolderLeft => {
                    left_slack(vals[i], avg, psi_d).min(left_slack(-vals[i], -avg, psi_d))
                }
                ConverseVariant::HolderRight => {
                    right_slack(vals[j], avg, psi_d).min(right_slack(-vals[j], -avg, psi_d))
                }
            };
            tracker.observe(pts[i], pts[j], slack);
        }
    }
    Ok(tracker.finish(tol))
}

/// The error function the converse theorems conclude with: the Ψ→Φ
/// transform, or `Φ ≡ 0` for powers `c·t^p` with `p > 1`.
pub fn converse_error_function(psi: &ErrorFunction) -> Result<ErrorFunction> {
    match psi.as_power() {
        Some((_, p)) if p > 1.0 => ErrorFunction::zero().restricted(psi.domain_length()),
        _ => transform_psi_to_phi(psi),
    }
}

#[derive(Debug, Clone)]
pub struct ConclusionReport {
    pub report: CheckReport,
    pub phi: ErrorFunction,
    /// Set when the first grid failed and the verdict comes from the
    /// refined grid.
    pub refined: bool,
}

/// Φ-monotonicity (or Φ-Hölder for the Hölder variants) of `f` for the
/// transformed error function. A failing grid is refined once before the
/// verdict is final.
pub fn check_converse_conclusion(
    f: &RealFunction,
    psi: &ErrorFunction,
    variant: ConverseVariant,
    grid: &Grid,
    _quad: &QuadratureSpec,
    tol: f64,
) -> Result<ConclusionReport> {
    let phi = converse_error_function(psi)?;
    let run = |g: &Grid| {
        if variant.is_holder() {
            check_phi_holder(f, &phi, g, tol)
        } else {
            check_phi_monotone(f, &phi, g, tol)
        }
    };
    let first = run(grid)?;
    if first.holds() {
        return Ok(ConclusionReport { report: first, phi, refined: false });
    }
    let report = run(&grid.refined())?;
    Ok(ConclusionReport { report, phi, refined: true })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationOptions {
    pub samples: usize,
    /// Iteration aborts once any value exceeds this magnitude.
    pub max_magnitude: f64,
}

impl Default for IterationOptions {
    fn default() -> Self {
        IterationOptions { samples: 257, max_magnitude: 1e12 }
    }
}

/// `T¹f, …, Tⁿf` for `(Tg)(u) = 𝒜(g,[u,y]) + Ψ(y−u)`, `(Tg)(y) = g(y)`,
/// each stored as a linear table on `samples` points of `[x, y]`.
pub fn iterate_t(
    f: &RealFunction,
    psi: &ErrorFunction,
    x: f64,
    y: f64,
    n: usize,
    quad: &QuadratureSpec,
) -> Result<Vec<RealFunction>> {
    iterate_t_with(f, psi, x, y, n, quad, &IterationOptions::default())
}

pub fn iterate_t_with(
    f: &RealFunction,
    psi: &ErrorFunction,
    x: f64,
    y: f64,
    n: usize,
    quad: &QuadratureSpec,
    opts: &IterationOptions,
) -> Result<Vec<RealFunction>> {
    ordered(x, y)?;
    if n == 0 {
        return Err(Error::InvalidArgument("at least one iteration required".into()));
    }
    if opts.samples < 2 {
        return Err(Error::InvalidArgument("iterates need at least 2 samples".into()));
    }
    let dom = f.domain();
    dom.check(x)?;
    dom.check(y)?;
    if y - x >= psi.domain_length() {
        return Err(Error::OutOfRange { t: y - x, length: psi.domain_length() });
    }
    let us = linspace(x, y, opts.samples);
    let psi_at: Vec<f64> = us.iter().map(|&u| psi.eval(y - u)).collect::<Result<_>>()?;

    let mut iterates = Vec::with_capacity(n);
    let mut current = f.clone();
    for iteration in 1..=n {
        // ∫_{uₖ}^{y} g accumulated from the right
        let mut tail = vec![0.0; us.len()];
        for k in (0..us.len() - 1).rev() {
            let cell = match current.as_table() {
                Some(t) => t.integral(us[k], us[k + 1]),
                None => integrate_function(&current, us[k], us[k + 1], quad)?,
            };
            tail[k] = tail[k + 1] + cell;
        }
        let last = us.len() - 1;
        let mut ys = Vec::with_capacity(us.len());
        for k in 0..last {
            ys.push(tail[k] / (y - us[k]) + psi_at[k]);
        }
        ys.push(current.eval(y)?);
        if let Some(&value) = ys.iter().find(|v| !(v.abs() <= opts.max_magnitude)) {
            return Err(Error::IterateBlowUp { iteration, value });
        }
        current = RealFunction::sampled(dom, SampledTable::new(us.clone(), ys, Interp::Linear)?)?;
        iterates.push(current.clone());
    }
    Ok(iterates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Interval;
    use approx::assert_abs_diff_eq;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn grid() -> Grid {
        Grid::with_default_margin(unit(), 101).unwrap()
    }

    fn f(src: &str) -> RealFunction {
        RealFunction::parse(unit(), src).unwrap()
    }

    fn pow(c: f64, p: f64) -> ErrorFunction {
        ErrorFunction::power(c, p).unwrap()
    }

    #[test]
    fn premise_examples() {
        let rep =
            check_converse_premise(&f("-x/2"), &pow(1.0, 1.0), ConverseVariant::Left, &grid(), &q(), 1e-9)
                .unwrap();
        assert!(rep.holds() && rep.worst_margin >= 0.0);
        let rep =
            check_converse_premise(&f("x^3"), &pow(0.0, 1.0), ConverseVariant::Left, &grid(), &q(), 1e-12)
                .unwrap();
        assert!(rep.holds());
        let rep =
            check_converse_premise(&f("-x"), &pow(0.1, 1.0), ConverseVariant::Left, &grid(), &q(), 1e-9)
                .unwrap();
        assert!(!rep.holds());
        let rep =
            check_converse_premise(&f("x"), &pow(0.0, 1.0), ConverseVariant::Right, &grid(), &q(), 1e-9)
                .unwrap();
        assert!(rep.holds());
    }

    #[test]
    fn holder_premise_splits_into_one_sided() {
        let g = Grid::with_default_margin(unit(), 31).unwrap();
        let h = f("sqrt(x) - x^2");
        let psi = pow(0.4, 0.5);
        for (hv, one) in [
            (ConverseVariant::HolderLeft, ConverseVariant::Left),
            (ConverseVariant::HolderRight, ConverseVariant::Right),
        ] {
            let both = check_converse_premise(&h, &psi, hv, &g, &q(), 1e-9).unwrap();
            let a = check_converse_premise(&h, &psi, one, &g, &q(), 1e-9).unwrap();
            let b = check_converse_premise(&h.negate(), &psi, one, &g, &q(), 1e-9).unwrap();
            assert_eq!(both.holds(), a.holds() && b.holds());
            assert_eq!(both.worst_margin, a.worst_margin.min(b.worst_margin));
        }
    }

    #[test]
    fn conclusion_examples() {
        let c =
            check_converse_conclusion(&f("-x/2"), &pow(1.0, 1.0), ConverseVariant::Left, &grid(), &q(), 1e-9)
                .unwrap();
        assert_eq!(c.phi.as_power(), Some((2.0, 1.0)));
        assert!(c.report.holds() && !c.refined);
        let c =
            check_converse_conclusion(&f("x^2"), &pow(0.0, 1.0), ConverseVariant::Left, &grid(), &q(), 0.0)
                .unwrap();
        assert!(c.report.holds());
        let dom = Interval::new(0.0, 1.0).unwrap();
        let root = RealFunction::parse(dom, "sqrt(x)").unwrap();
        let c = check_converse_conclusion(
            &root,
            &pow(1.0, 0.5),
            ConverseVariant::HolderLeft,
            &grid(),
            &q(),
            1e-9,
        )
        .unwrap();
        assert_eq!(c.phi.as_power(), Some((3.0, 0.5)));
        assert!(c.report.holds());
        let c =
            check_converse_conclusion(&f("-x"), &pow(1.0, 2.0), ConverseVariant::Left, &grid(), &q(), 1e-9)
                .unwrap();
        assert_eq!(c.phi.eval(0.5).unwrap(), 0.0);
        assert!(!c.report.holds() && c.refined);
    }

    #[test]
    fn t_of_linear_function() {
        let dom = Interval::new(0.0, 1.0).unwrap();
        let g = RealFunction::parse(dom, "-x").unwrap();
        let its = iterate_t(&g, &pow(1.0, 1.0), 0.1, 0.9, 2, &q()).unwrap();
        for &u in &[0.1, 0.3, 0.5, 0.899] {
            let want = -(u + 0.9) / 2.0 + (0.9 - u);
            assert_abs_diff_eq!(its[0].eval(u).unwrap(), want, epsilon = 1e-10);
            assert!(its[0].eval(u).unwrap() >= -u);
        }
        assert_eq!(its[0].eval(0.9).unwrap(), -0.9);
    }

    #[test]
    fn t_fixed_points_and_monotone_start() {
        let dom = Interval::new(0.0, 1.0).unwrap();
        let k = RealFunction::parse(dom, "2.5").unwrap();
        for it in iterate_t(&k, &pow(0.0, 1.0), 0.2, 0.8, 3, &q()).unwrap() {
            for v in it.as_table().unwrap().ys() {
                assert_abs_diff_eq!(*v, 2.5, epsilon = 1e-12);
            }
        }
        let up = RealFunction::parse(dom, "x^2").unwrap();
        let its = iterate_t(&up, &pow(0.0, 1.0), 0.2, 0.8, 1, &q()).unwrap();
        let t = its[0].as_table().unwrap();
        for (u, v) in t.xs().iter().zip(t.ys()) {
            assert!(*v >= u * u - 1e-12);
        }
    }

    #[test]
    fn t_guards() {
        let dom = Interval::new(0.0, 1.0).unwrap();
        let g = RealFunction::parse(dom, "x").unwrap();
        assert!(iterate_t(&g, &pow(1.0, 1.0), 0.5, 0.5, 1, &q()).is_err());
        assert!(iterate_t(&g, &pow(1.0, 1.0), 0.1, 0.9, 0, &q()).is_err());
        let opts = IterationOptions { samples: 33, max_magnitude: 0.5 };
        let err = iterate_t_with(&g, &pow(1.0, 1.0), 0.1, 0.9, 3, &q(), &opts).unwrap_err();
        assert!(matches!(err, Error::IterateBlowUp { iteration: 1, .. }));
    }
}
