//! Check bundles behind each `--suite` name.

use std::sync::Arc;

use approxmono::analysis::{
    build_holder_interpolant, build_lower_block, build_two_point, build_upper_block, can_interpolate_holder,
    can_interpolate_monotone, check_diagonal_bounds, check_feg_equations, check_feh_equations,
    check_phi_holder, check_phi_monotone, InterpolationSide, Negated, MAX_CACHE_POINTS,
};
use approxmono::domain::MarginTracker;
use approxmono::inequalities::{
    check_converse_conclusion, check_converse_premise, check_generalized_hh, hh_bounds, hh_sharpness,
    iterate_t_with, ostrowski_bound, ostrowski_sharpness, BoundCertificate, ConverseVariant, GhhVariant,
    IterationOptions,
};
use approxmono::numerics::DEFAULT_RESOLUTION;
use approxmono::{CheckReport, Error, ErrorFunction, Grid, RealFunction};

use crate::config::{RunConfig, Suite};
use crate::plot::PlotSeries;
use crate::report::{CertificateEntry, CheckEntry, Details, Parameter, Real};
use crate::CliError;

/// Iterates are compared at this tolerance at least; table interpolation
/// error compounds across iterations.
const ITERATE_TOLERANCE: f64 = 1e-6;

/// Everything a suite needs, resolved once.
pub struct Inputs<'a> {
    pub config: &'a RunConfig,
    pub function: Option<RealFunction>,
    pub error: ErrorFunction,
    pub grid: Grid,
}

#[derive(Default)]
pub struct SuiteOutput {
    pub checks: Vec<CheckEntry>,
    pub certificates: Vec<CertificateEntry>,
    pub plots: Vec<PlotSeries>,
}

impl SuiteOutput {
    fn extend(&mut self, other: SuiteOutput) {
        self.checks.extend(other.checks);
        self.certificates.extend(other.certificates);
        self.plots.extend(other.plots);
    }
}

impl Inputs<'_> {
    fn details(&self, report: &CheckReport, grid_n: usize) -> Details {
        Details {
            pairs_checked: report.pairs_checked as u64,
            tolerance: Real(report.tolerance),
            grid_n: grid_n as u64,
            quad_rule: self.config.quad.rule.as_str().to_owned(),
            quad_tolerance: Real(self.config.quad.tolerance),
            parameters: Vec::new(),
            note: None,
        }
    }

    fn entry(&self, id: &str, statement: &str, report: &CheckReport) -> CheckEntry {
        CheckEntry::from_report(id, statement, report, self.details(report, self.grid.len()))
    }

    fn function(&self) -> Result<&RealFunction, CliError> {
        self.function.as_ref().ok_or_else(|| CliError::Config("this suite needs --function".into()))
    }

    fn endpoints(&self) -> (f64, f64) {
        self.config.xy.unwrap_or((self.grid.first(), self.grid.last()))
    }

    fn certificate_tolerance(&self) -> f64 {
        self.config.tolerance.max(10.0 * self.config.quad.tolerance)
    }
}

fn param(name: &str, value: f64) -> Parameter {
    Parameter { name: name.to_owned(), value: Real(value) }
}

fn certificate(id: &str, statement: &str, cert: &BoundCertificate) -> CertificateEntry {
    CertificateEntry {
        id: id.to_owned(),
        paper_ref: statement.to_owned(),
        kind: cert.kind.as_str().to_owned(),
        bound_value: Real(cert.bound_value),
        achieved_value: Real(cert.achieved_value),
        gap: Real(cert.gap),
        tolerance: Real(cert.tolerance),
        sharp: cert.is_sharp(),
        witness_function: cert.witness_function.as_ref().and_then(|w| w.as_expr().map(|e| e.to_string())),
    }
}

fn sample(name: &str, f: &RealFunction, xs: &[f64]) -> Result<PlotSeries, CliError> {
    Ok(PlotSeries::new(name, xs.iter().copied().zip(f.sample(xs)?).collect()))
}

/// Samples a witness on its own domain, kept clear of the open endpoints.
fn sample_witness(name: &str, f: &RealFunction) -> Result<PlotSeries, CliError> {
    let grid = Grid::with_default_margin(f.domain(), DEFAULT_RESOLUTION)?;
    sample(name, f, grid.points())
}

fn is_screen_failure(e: &Error) -> bool {
    matches!(e, Error::HypothesisScreen(_) | Error::NonzeroAtZero { .. })
}

pub fn run(inputs: &Inputs<'_>) -> Result<SuiteOutput, CliError> {
    let mut out = SuiteOutput::default();
    for suite in inputs.config.suite.expand() {
        let part = match suite {
            Suite::Monotone => monotone(inputs)?,
            Suite::Holder => holder(inputs)?,
            Suite::Feh => feh(inputs)?,
            Suite::Hh => hh(inputs)?,
            Suite::Ostrowski => ostrowski(inputs)?,
            Suite::Converse => converse(inputs)?,
            Suite::All => unreachable!("expand never yields All"),
        };
        out.extend(part);
    }
    out.checks.sort_by(|a, b| a.id.cmp(&b.id));
    out.certificates.sort_by(|a, b| a.id.cmp(&b.id));
    out.plots.sort_by(|a, b| a.name.cmp(&b.name));
    out.plots.dedup_by(|a, b| a.name == b.name);
    Ok(out)
}

fn monotone(inputs: &Inputs<'_>) -> Result<SuiteOutput, CliError> {
    let (f, phi, grid, tol) = (inputs.function()?, &inputs.error, &inputs.grid, inputs.config.tolerance);
    let mut out = SuiteOutput::default();
    let pts = grid.points();
    out.plots.push(sample("f", f, pts)?);

    let base = check_phi_monotone(f, phi, grid, tol)?;
    let mut base_entry = inputs.entry("monotone.phi_monotone", "f(x) <= f(y) + Phi(y-x) for x <= y", &base);

    let p = pts[pts.len() / 2];
    let below = can_interpolate_monotone(f, p, InterpolationSide::Below, phi, grid, tol);
    let below = match below {
        Err(e) if is_screen_failure(&e) => {
            base_entry.details.note = Some(format!("interpolation skipped: {e}"));
            out.checks.push(base_entry);
            return Ok(out);
        }
        other => other?,
    };
    out.checks.push(base_entry);
    let above = can_interpolate_monotone(f, p, InterpolationSide::Above, phi, grid, tol)?;
    for (side, rep, statement) in [
        ("below", &below, "inf f on [x,p] finite and f(p) <= f(x) + Phi(x-p) for x > p"),
        ("above", &above, "sup f on [p,x] finite and f(x) <= f(p) + Phi(p-x) for x < p"),
    ] {
        let mut e = inputs.entry(&format!("monotone.interpolate_{side}"), statement, rep);
        e.details.parameters.push(param("p", p));
        out.checks.push(e);
    }

    let cached = grid.len() <= MAX_CACHE_POINTS;
    let mut h = build_two_point(f, DEFAULT_RESOLUTION)?;
    if cached {
        h = h.with_cache(grid)?;
    }
    let h = Arc::new(h);
    let fx = f.sample(pts)?;
    let mut sandwich = MarginTracker::new();
    for &q in pts {
        let section = h.section(q)?;
        let lower = build_lower_block(&section, q, phi)?.sample(pts)?;
        let upper = build_upper_block(&section, q, phi)?.sample(pts)?;
        for (k, &x) in pts.iter().enumerate() {
            sandwich.observe(x, q, (fx[k] - lower[k]).min(upper[k] - fx[k]));
        }
    }
    let sandwich = sandwich.finish(tol);
    out.checks.push(inputs.entry(
        "monotone.sandwich",
        "h_p <= f <= h^p with h = H(., p), for every grid p",
        &sandwich,
    ));

    let section = h.section(p)?;
    let lower = build_lower_block(&section, p, phi)?;
    let upper = build_upper_block(&section, p, phi)?;
    for (name, block, statement) in
        [("lower_block", &lower, "h_p is Phi-monotone"), ("upper_block", &upper, "h^p is Phi-monotone")]
    {
        let rep = check_phi_monotone(block, phi, grid, tol)?;
        let mut e = inputs.entry(&format!("monotone.{name}"), statement, &rep);
        e.details.parameters.push(param("p", p));
        out.checks.push(e);
    }
    out.plots.push(sample("h_p", &lower, pts)?);
    out.plots.push(sample("h_sup_p", &upper, pts)?);
    Ok(out)
}

fn holder(inputs: &Inputs<'_>) -> Result<SuiteOutput, CliError> {
    let (f, phi, grid, tol) = (inputs.function()?, &inputs.error, &inputs.grid, inputs.config.tolerance);
    let mut out = SuiteOutput::default();
    let pts = grid.points();
    out.plots.push(sample("f", f, pts)?);

    let base = check_phi_holder(f, phi, grid, tol)?;
    let mut base_entry = inputs.entry("holder.phi_holder", "|f(x) - f(y)| <= Phi(|x-y|)", &base);

    let p = pts[pts.len() / 2];
    let below = match can_interpolate_holder(f, p, InterpolationSide::Below, phi, grid, tol) {
        Err(e) if is_screen_failure(&e) => {
            base_entry.details.note = Some(format!("interpolation skipped: {e}"));
            out.checks.push(base_entry);
            return Ok(out);
        }
        other => other?,
    };
    out.checks.push(base_entry);
    let above = can_interpolate_holder(f, p, InterpolationSide::Above, phi, grid, tol)?;
    for (side, rep, statement) in
        [("below", &below, "f(p) <= f(x) + Phi(|x-p|)"), ("above", &above, "f(x) <= f(p) + Phi(|x-p|)")]
    {
        let mut e = inputs.entry(&format!("holder.interpolate_{side}"), statement, rep);
        e.details.parameters.push(param("p", p));
        out.checks.push(e);
    }

    let fx = f.sample(pts)?;
    let mut sandwich = MarginTracker::new();
    for (j, &q) in pts.iter().enumerate() {
        for (k, &x) in pts.iter().enumerate() {
            let d = phi.eval((x - q).abs())?;
            sandwich.observe(x, q, (fx[k] - (fx[j] - d)).min(fx[j] + d - fx[k]));
        }
    }
    let sandwich = sandwich.finish(tol);
    out.checks.push(inputs.entry(
        "holder.sandwich",
        "f(p) - Phi(|x-p|) <= f(x) <= f(p) + Phi(|x-p|), for every grid p",
        &sandwich,
    ));

    let lower = build_holder_interpolant(f, p, InterpolationSide::Below, phi)?;
    let upper = build_holder_interpolant(f, p, InterpolationSide::Above, phi)?;
    out.plots.push(sample("holder_lower_p", &lower, pts)?);
    out.plots.push(sample("holder_upper_p", &upper, pts)?);
    Ok(out)
}

fn feh(inputs: &Inputs<'_>) -> Result<SuiteOutput, CliError> {
    let (f, grid, tol) = (inputs.function()?, &inputs.grid, inputs.config.tolerance);
    if grid.len() > MAX_CACHE_POINTS {
        return Err(CliError::Config(format!(
            "the feh suite runs on at most {MAX_CACHE_POINTS} grid points, got {}",
            grid.len()
        )));
    }
    let mut out = SuiteOutput::default();
    let h = Arc::new(build_two_point(f, DEFAULT_RESOLUTION)?.with_cache(grid)?);
    let pts = grid.points();
    out.plots.push(sample("f", f, pts)?);

    let eq = check_feh_equations(h.as_ref(), grid, tol)?;
    out.checks.push(inputs.entry(
        "feh.min_max_equations",
        "min(H(x,y), H(y,z)) = H(x,z) and max(H(z,y), H(y,x)) = H(z,x)",
        &eq,
    ));
    let bounds = check_diagonal_bounds(h.as_ref(), grid, false, tol)?;
    out.checks.push(inputs.entry(
        "feh.diagonal_bounds",
        "H(x,y) <= inf H(t,t) <= sup H(t,t) <= H(y,x) on [x,y]",
        &bounds,
    ));
    let equality = check_diagonal_bounds(h.as_ref(), grid, true, tol)?;
    out.checks.push(inputs.entry(
        "feh.diagonal_equality",
        "H(x,y) = inf H(t,t) and H(y,x) = sup H(t,t) on [x,y]",
        &equality,
    ));
    let feg = check_feg_equations(&Negated(h.as_ref()), grid, tol)?;
    out.checks.push(inputs.entry("feh.feg_equations", "max(G(x,y), G(y,z)) = G(x,z) for G = -H", &feg));

    let mut sections = MarginTracker::new();
    for &q in pts {
        let vals: Vec<f64> = pts.iter().map(|&x| h.h_at(x, q)).collect::<Result<_, _>>()?;
        for k in 1..pts.len() {
            sections.observe(pts[k - 1], pts[k], vals[k] - vals[k - 1]);
        }
    }
    let sections = sections.finish(tol);
    out.checks.push(inputs.entry(
        "feh.sections_nondecreasing",
        "x -> H(x,p) is nondecreasing for every grid p",
        &sections,
    ));
    Ok(out)
}

fn hh(inputs: &Inputs<'_>) -> Result<SuiteOutput, CliError> {
    let (phi, quad) = (&inputs.error, &inputs.config.quad);
    let (x, y) = inputs.endpoints();
    let cert_tol = inputs.certificate_tolerance();
    let mut out = SuiteOutput::default();

    let (lower, upper) = hh_sharpness(phi, x, y, quad, cert_tol)?;
    out.certificates.push(certificate(
        "hh.lower_sharpness",
        "sup over Phi-monotone f of f(x) - avg(f,[x,y]) = (1/(y-x)) int_0^(y-x) Phi",
        &lower,
    ));
    out.certificates.push(certificate(
        "hh.upper_sharpness",
        "sup over Phi-monotone f of avg(f,[x,y]) - f(y) = (1/(y-x)) int_0^(y-x) Phi",
        &upper,
    ));
    if let Some(w) = &lower.witness_function {
        out.plots.push(sample_witness("f_lower_extremal", w)?);
    }
    if let Some(w) = &upper.witness_function {
        out.plots.push(sample_witness("f_upper_extremal", w)?);
    }

    let Some(f) = inputs.function.as_ref() else {
        return Ok(out);
    };
    let (grid, tol) = (&inputs.grid, inputs.config.tolerance);
    out.plots.push(sample("f", f, grid.points())?);
    let screen = check_phi_monotone(f, phi, grid, tol)?;
    if !screen.holds() {
        let mut e = inputs.entry("hh.f_screen", "f(x) <= f(y) + Phi(y-x) for x <= y", &screen);
        e.details.note = Some("f is not Phi-monotone; bounds not evaluated".into());
        out.checks.push(e);
        return Ok(out);
    }
    let (lo_slack, up_slack) = hh_bounds(f, phi, x, y, quad)?;
    for (id, slack, statement) in [
        ("hh.lower_bound", lo_slack, "f(x) - (1/(y-x)) int_0^(y-x) Phi <= avg(f,[x,y])"),
        ("hh.upper_bound", up_slack, "avg(f,[x,y]) <= f(y) + (1/(y-x)) int_0^(y-x) Phi"),
    ] {
        let mut t = MarginTracker::new();
        t.observe(x, y, slack);
        let rep = t.finish(tol);
        let mut e = inputs.entry(id, statement, &rep);
        e.details.parameters = vec![param("x", x), param("y", y)];
        out.checks.push(e);
    }
    let ghh_tol = tol.max(10.0 * quad.tolerance);
    for (id, quadruple) in [("hh.generalized_lower", (x, x, x, y)), ("hh.generalized_upper", (x, y, y, y))] {
        let rep = check_generalized_hh(f, phi, quadruple, GhhVariant::Monotone, quad, ghh_tol)?;
        let mut e = inputs.entry(id, "avg(f,<u,v>) <= avg(f,<w,z>) + avg(Phi,<w-u,z-v>)", &rep);
        let (u, v, w, z) = quadruple;
        e.details.parameters = vec![param("u", u), param("v", v), param("w", w), param("z", z)];
        out.checks.push(e);
    }
    Ok(out)
}

fn ostrowski(inputs: &Inputs<'_>) -> Result<SuiteOutput, CliError> {
    let (phi, quad) = (&inputs.error, &inputs.config.quad);
    let (x, y) = inputs.endpoints();
    let p = inputs.config.point.unwrap_or(0.5 * (x + y));
    let mut out = SuiteOutput::default();

    let cert = ostrowski_sharpness(phi, x, y, p, quad, inputs.certificate_tolerance())?;
    out.certificates.push(certificate(
        "ostrowski.sharpness",
        "sup over Phi-Holder f of |f(p) - avg(f,[x,y])| = (int_0^(p-x) Phi + int_0^(y-p) Phi)/(y-x)",
        &cert,
    ));
    if let Some(w) = &cert.witness_function {
        out.plots.push(sample_witness("phi_p", w)?);
    }

    let Some(f) = inputs.function.as_ref() else {
        return Ok(out);
    };
    let (grid, tol) = (&inputs.grid, inputs.config.tolerance);
    out.plots.push(sample("f", f, grid.points())?);
    let screen = check_phi_holder(f, phi, grid, tol)?;
    if !screen.holds() {
        let mut e = inputs.entry("ostrowski.f_screen", "|f(x) - f(y)| <= Phi(|x-y|)", &screen);
        e.details.note = Some("f is not Phi-Holder; bound not evaluated".into());
        out.checks.push(e);
        return Ok(out);
    }
    let rep = ostrowski_bound(f, phi, x, y, p, quad, tol.max(10.0 * quad.tolerance))?;
    let mut e = inputs.entry(
        "ostrowski.bound",
        "|f(p) - avg(f,[x,y])| <= (int_0^(p-x) Phi + int_0^(y-p) Phi)/(y-x)",
        &rep,
    );
    e.details.parameters = vec![param("x", x), param("y", y), param("p", p)];
    out.checks.push(e);
    Ok(out)
}

fn converse(inputs: &Inputs<'_>) -> Result<SuiteOutput, CliError> {
    let (f, psi, grid, tol) = (inputs.function()?, &inputs.error, &inputs.grid, inputs.config.tolerance);
    let (quad, variant) = (&inputs.config.quad, inputs.config.variant);
    let mut out = SuiteOutput::default();
    out.plots.push(sample("f", f, grid.points())?);

    let premise = check_converse_premise(f, psi, variant, grid, quad, tol)?;
    let statement = match variant {
        ConverseVariant::Left => "f(u) <= avg(f,[u,v]) + Psi(v-u)",
        ConverseVariant::Right => "avg(f,[u,v]) <= f(v) + Psi(v-u)",
        ConverseVariant::HolderLeft => "|f(u) - avg(f,[u,v])| <= Psi(v-u)",
        ConverseVariant::HolderRight => "|avg(f,[u,v]) - f(v)| <= Psi(v-u)",
    };
    out.checks.push(inputs.entry("converse.premise", statement, &premise));

    let conclusion = check_converse_conclusion(f, psi, variant, grid, quad, tol)?;
    let statement = if variant.is_holder() {
        "|f(x) - f(y)| <= Phi(|x-y|) with Phi(u) = Psi(u) + int_0^u Psi(t)/t dt"
    } else {
        "f(x) <= f(y) + Phi(y-x) with Phi(u) = Psi(u) + int_0^u Psi(t)/t dt"
    };
    let grid_n = if conclusion.refined { 2 * grid.len() - 1 } else { grid.len() };
    let mut e = CheckEntry::from_report(
        "converse.conclusion",
        statement,
        &conclusion.report,
        inputs.details(&conclusion.report, grid_n),
    );
    if conclusion.refined {
        e.details.note = Some("first grid failed; verdict from the refined grid".into());
    }
    out.checks.push(e);

    let (x, y) = inputs.endpoints();
    let opts = IterationOptions::default();
    let iterates = iterate_t_with(f, psi, x, y, inputs.config.iterations, quad, &opts)?;
    let xs = iterates[0].as_table().map(|t| t.xs().to_vec()).unwrap_or_default();
    let iter_tol = tol.max(ITERATE_TOLERANCE);
    let mut tracker = MarginTracker::new();
    let mut prev = f.sample(&xs)?;
    for (k, it) in iterates.iter().enumerate() {
        let cur = it.sample(&xs)?;
        for (i, &u) in xs.iter().enumerate() {
            tracker.observe(u, k as f64 + 1.0, cur[i] - prev[i]);
        }
        out.plots.push(sample(&format!("T{}", k + 1), it, &xs)?);
        prev = cur;
    }
    let rep = tracker.finish(iter_tol);
    let mut e = CheckEntry::from_report(
        "converse.iterates_increasing",
        "T^n f <= T^(n+1) f pointwise, (Tg)(u) = avg(g,[u,y]) + Psi(y-u)",
        &rep,
        inputs.details(&rep, xs.len()),
    );
    e.details.parameters = vec![param("x", x), param("y", y), param("iterations", iterates.len() as f64)];
    e.details.note = Some("witness y is the iterate index".into());
    out.checks.push(e);
    Ok(out)
}
