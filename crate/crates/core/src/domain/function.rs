use std::sync::Arc;

use crate::analysis::TwoPointFunction;
use crate::error::{Error, Result};
use crate::expr::Expr;

use super::{Grid, Interval};

/// Rule for evaluating a sampled table between its samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interp {
    #[default]
    Linear,
    /// Value of the nearest sample to the left.
    LeftStep,
    /// Value of the nearest sample to the right.
    RightStep,
}

/// Samples `(x_i, y_i)` with strictly increasing `x_i`. Outside the sample
/// hull the nearest sample value is used.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
    interp: Interp,
}

impl SampledTable {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, interp: Interp) -> Result<Self> {
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(Error::InvalidArgument(format!(
                "table needs matching non-empty columns ({} x, {} y)",
                xs.len(),
                ys.len()
            )));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("table entries must be finite".into()));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("table abscissae must be strictly increasing".into()));
        }
        Ok(SampledTable { xs, ys, interp })
    }

    pub fn from_pairs(pairs: &[(f64, f64)], interp: Interp) -> Result<Self> {
        Self::new(pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect(), interp)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn interp(&self) -> Interp {
        self.interp
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = self.xs.partition_point(|&v| v <= x) - 1;
        if x == self.xs[i] {
            return self.ys[i];
        }
        match self.interp {
            Interp::Linear => {
                let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
                self.ys[i] + t * (self.ys[i + 1] - self.ys[i])
            }
            Interp::LeftStep => self.ys[i],
            Interp::RightStep => self.ys[i + 1],
        }
    }

    /// Exact integral over `[a, b]` (`a ≤ b`): every rule is affine or
    /// constant between consecutive breakpoints, so the midpoint rule per
    /// breakpoint segment is exact.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let mut sum = 0.0;
        let mut left = a;
        let start = self.xs.partition_point(|&v| v <= a);
        for &k in self.xs[start..].iter().take_while(|&&k| k < b) {
            sum += (k - left) * self.eval(0.5 * (left + k));
            left = k;
        }
        sum + (b - left) * self.eval(0.5 * (left + b))
    }

    /// Values at every point where an extremum over `[a, b]` can occur.
    pub(crate) fn extreme_candidates(&self, a: f64, b: f64) -> impl Iterator<Item = f64> + '_ {
        let start = self.xs.partition_point(|&v| v <= a);
        let inner = self.xs[start..].iter().take_while(move |&&k| k < b);
        [a, b].into_iter().chain(inner.copied()).map(|x| self.eval(x))
    }
}

#[derive(Debug)]
pub(crate) enum Body {
    Expr(Expr),
    Table(SampledTable),
    /// `x ↦ H(x, anchor)` for a two-point function `H`.
    Section(Arc<TwoPointFunction>, f64),
}

impl Body {
    fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Body::Expr(e) => e.eval(x),
            Body::Table(t) => Ok(t.eval(x)),
            Body::Section(h, anchor) => h.h_at(x, *anchor),
        }
    }
}

/// A real function on an open interval, given as a closed-form expression,
/// a sampled table, or a section of a two-point function.
///
/// Cloning is cheap; the body is shared.
#[derive(Debug, Clone)]
pub struct RealFunction {
    domain: Interval,
    body: Arc<Body>,
    knots: Arc<[f64]>,
}

impl RealFunction {
    pub fn from_expr(domain: Interval, expr: Expr) -> Self {
        let mut knots = Vec::new();
        expr.collect_knots(&mut knots);
        Self::assemble(domain, Body::Expr(expr), knots)
    }

    pub fn parse(domain: Interval, src: &str) -> Result<Self> {
        Ok(Self::from_expr(domain, Expr::parse(src)?))
    }

    pub fn sampled(domain: Interval, table: SampledTable) -> Result<Self> {
        if let Some(&x) = table.xs().iter().find(|&&x| !domain.contains(x)) {
            return Err(Error::OutOfDomain { x, lo: domain.lo(), hi: domain.hi() });
        }
        let knots = table.xs().to_vec();
        Ok(Self::assemble(domain, Body::Table(table), knots))
    }

    pub(crate) fn section(h: Arc<TwoPointFunction>, anchor: f64) -> Self {
        let domain = h.source().domain();
        let mut knots = h.source().knots().to_vec();
        knots.push(anchor);
        Self::assemble(domain, Body::Section(h, anchor), knots)
    }

    fn assemble(domain: Interval, body: Body, mut knots: Vec<f64>) -> Self {
        knots.retain(|k| domain.contains(*k));
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        RealFunction { domain, body: Arc::new(body), knots: knots.into() }
    }

    /// Adds breakpoints that quadrature and extremum searches must respect.
    pub fn with_knots(self, extra: &[f64]) -> Self {
        let mut knots = self.knots.to_vec();
        knots.extend_from_slice(extra);
        let body = self.body;
        let domain = self.domain;
        knots.retain(|k| domain.contains(*k));
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        RealFunction { domain, body, knots: knots.into() }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn as_table(&self) -> Option<&SampledTable> {
        match &*self.body {
            Body::Table(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_expr(&self) -> Option<&Expr> {
        match &*self.body {
            Body::Expr(e) => Some(e),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.domain.check(x)?;
        self.body.eval(x)
    }

    /// Evaluation that skips the domain check; used where a function's
    /// closure point (e.g. `t = 0` of an error function) is meaningful.
    pub(crate) fn eval_unchecked(&self, x: f64) -> Result<f64> {
        self.body.eval(x)
    }

    pub fn sample(&self, points: &[f64]) -> Result<Vec<f64>> {
        points.iter().map(|&x| self.eval(x)).collect()
    }

    /// `-f`; negation is exact, so checks on `-f` see exactly negated values.
    pub fn negate(&self) -> RealFunction {
        let e = Expr::Neg(Box::new(Expr::Apply(self.clone(), Box::new(Expr::Var))));
        RealFunction::from_expr(self.domain, e)
    }

    pub fn pointwise_min(fs: &[RealFunction]) -> Result<RealFunction> {
        Self::pointwise(fs, Expr::Min)
    }

    pub fn pointwise_max(fs: &[RealFunction]) -> Result<RealFunction> {
        Self::pointwise(fs, Expr::Max)
    }

    fn pointwise(fs: &[RealFunction], wrap: fn(Vec<Expr>) -> Expr) -> Result<RealFunction> {
        let first = fs.first().ok_or_else(|| Error::InvalidArgument("no functions".into()))?;
        if fs.iter().any(|f| f.domain != first.domain) {
            return Err(Error::InvalidArgument("pointwise extremum needs a common domain".into()));
        }
        if fs.len() == 1 {
            return Ok(first.clone());
        }
        let args = fs.iter().map(|f| Expr::Apply(f.clone(), Box::new(Expr::Var))).collect();
        Ok(RealFunction::from_expr(first.domain, wrap(args)))
    }

    /// Grid on which structural screens of this function are run: the
    /// sample abscissae of a table, the cached grid of a two-point section,
    /// otherwise 201 uniform points.
    pub fn screening_grid(&self) -> Result<Grid> {
        match &*self.body {
            Body::Table(t) if t.xs().len() >= 2 => Grid::from_points(self.domain, t.xs().to_vec()),
            Body::Section(h, _) => match h.cached_grid() {
                Some(g) => Ok(g.clone()),
                None => Grid::with_default_margin(self.domain, 201),
            },
            _ => Grid::with_default_margin(self.domain, 201),
        }
    }

    /// Samples this function into a table on `points`.
    pub fn tabulate(&self, points: &[f64], interp: Interp) -> Result<RealFunction> {
        let ys = self.sample(points)?;
        RealFunction::sampled(self.domain, SampledTable::new(points.to_vec(), ys, interp)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit() -> Interval {
        Interval::new(0.0, 4.0).unwrap()
    }

    #[test]
    fn closed_form_evaluation() {
        let f = RealFunction::parse(unit(), "x^2").unwrap();
        assert_eq!(f.eval(3.0).unwrap(), 9.0);
        assert!(matches!(f.eval(4.0), Err(Error::OutOfDomain { .. })));
        let g = RealFunction::parse(unit(), "log(x - 1)").unwrap();
        assert!(matches!(g.eval(0.5), Err(Error::Evaluation(_))));
    }

    #[test]
    fn table_rules() {
        let pairs = [(1.0, 0.0), (2.0, 4.0)];
        let lin = SampledTable::from_pairs(&pairs, Interp::Linear).unwrap();
        let left = SampledTable::from_pairs(&pairs, Interp::LeftStep).unwrap();
        let right = SampledTable::from_pairs(&pairs, Interp::RightStep).unwrap();
        assert_eq!(lin.eval(1.5), 2.0);
        assert_eq!(left.eval(1.5), 0.0);
        assert_eq!(right.eval(1.5), 4.0);
        // nearest sample outside the hull
        assert_eq!(lin.eval(0.5), 0.0);
        assert_eq!(lin.eval(3.5), 4.0);
        let f = RealFunction::sampled(unit(), lin).unwrap();
        assert_eq!(f.eval(1.5).unwrap(), 2.0);
    }

    #[test]
    fn table_validation() {
        assert!(SampledTable::from_pairs(&[(1.0, 0.0), (1.0, 1.0)], Interp::Linear).is_err());
        assert!(SampledTable::from_pairs(&[], Interp::Linear).is_err());
        let t = SampledTable::from_pairs(&[(0.0, 1.0), (1.0, 1.0)], Interp::Linear).unwrap();
        assert!(RealFunction::sampled(unit(), t).is_err());
    }

    #[test]
    fn exact_table_integrals() {
        let t = SampledTable::from_pairs(&[(1.0, 5.0), (2.0, -1.0), (3.0, 4.0)], Interp::Linear).unwrap();
        // trapezoids: (5 - 1)/2 + (-1 + 4)/2 = 3.5, plus constant tails
        assert_eq!(t.integral(1.0, 3.0), 3.5);
        assert_eq!(t.integral(0.0, 1.0), 5.0);
        let s = SampledTable::from_pairs(&[(1.0, 0.0), (2.0, 1.0), (3.0, 2.0)], Interp::LeftStep).unwrap();
        assert_eq!(s.integral(0.5, 3.5), 0.5 * 0.0 + 1.0 * 0.0 + 1.0 * 1.0 + 0.5 * 2.0);
    }

    #[test]
    fn negation_and_extremes() {
        let f = RealFunction::parse(unit(), "x").unwrap();
        let g = RealFunction::parse(unit(), "2 - x").unwrap();
        assert_eq!(f.negate().eval(1.25).unwrap(), -1.25);
        let lo = RealFunction::pointwise_min(&[f.clone(), g.clone()]).unwrap();
        let hi = RealFunction::pointwise_max(&[f, g]).unwrap();
        assert_eq!(lo.eval(3.0).unwrap(), -1.0);
        assert_eq!(hi.eval(3.0).unwrap(), 3.0);
    }

    #[test]
    fn knots_flow_through_composition() {
        let t = SampledTable::from_pairs(&[(1.0, 0.0), (2.0, 1.0)], Interp::LeftStep).unwrap();
        let f = RealFunction::sampled(unit(), t).unwrap();
        assert_eq!(f.negate().knots(), &[1.0, 2.0]);
        assert_eq!(f.with_knots(&[3.0, 9.0]).knots(), &[1.0, 2.0, 3.0]);
    }

    proptest! {
        #[test]
        fn linear_table_exact_at_samples_and_monotone_between(
            ys in prop::collection::vec(-10.0f64..10.0, 2..12),
            fracs in prop::collection::vec(0.0f64..1.0, 1..20),
        ) {
            let xs: Vec<f64> = (0..ys.len()).map(|i| 0.5 + i as f64 * 0.25).collect();
            let t = SampledTable::new(xs.clone(), ys.clone(), Interp::Linear).unwrap();
            for (x, y) in xs.iter().zip(&ys) {
                prop_assert_eq!(t.eval(*x), *y);
            }
            for i in 0..xs.len() - 1 {
                let mut fr = fracs.clone();
                fr.sort_by(f64::total_cmp);
                let vals: Vec<f64> = fr.iter().map(|s| t.eval(xs[i] + s * (xs[i + 1] - xs[i]))).collect();
                let up = ys[i + 1] >= ys[i];
                for w in vals.windows(2) {
                    let ordered = if up { w[0] <= w[1] } else { w[0] >= w[1] };
                    prop_assert!(ordered);
                }
            }
        }
    }
}
