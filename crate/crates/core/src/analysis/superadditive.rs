use crate::analysis::check_phi_monotone;
use crate::domain::{CheckReport, Grid, MarginTracker, RealFunction, Verdict};
use crate::error::{Error, Result};
use crate::error_fn::ErrorFunction;

/// Both sides of "a nonpositive `f` is superadditive iff it is
/// `(−f)`-monotone", plus whether the two verdicts agree.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub superadditive: CheckReport,
    pub phi_monotone: CheckReport,
    pub agreement: CheckReport,
}

impl EquivalenceReport {
    pub fn agrees(&self) -> bool {
        self.agreement.holds()
    }
}

pub fn check_superadditive_equivalence(f: &RealFunction, grid: &Grid, tol: f64) -> Result<EquivalenceReport> {
    let dom = f.domain();
    if dom.lo() != 0.0 {
        return Err(Error::InvalidArgument(format!("domain must start at 0, got {dom}")));
    }
    let pts = grid.points();
    let vals = f.sample(pts)?;
    if let Some((&x, &value)) = pts.iter().zip(&vals).find(|(_, &v)| v > tol) {
        return Err(Error::Positivity { x, value });
    }

    let reach = grid.last();
    let mut tracker = MarginTracker::new();
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let s = pts[i] + pts[j];
            if s > reach {
                break;
            }
            tracker.observe(pts[i], pts[j], f.eval(s)? - vals[i] - vals[j]);
        }
    }
    let superadditive = tracker.finish(tol);

    let phi = ErrorFunction::tabulated(f.negate())?;
    let phi_monotone = check_phi_monotone(f, &phi, grid, tol)?;

    let agree = superadditive.verdict == phi_monotone.verdict;
    let agreement = CheckReport {
        verdict: Verdict::from_bool(agree),
        worst_margin: if agree { 0.0 } else { f64::NEG_INFINITY },
        witness: if agree { None } else { superadditive.witness.or(phi_monotone.witness) },
        pairs_checked: superadditive.pairs_checked + phi_monotone.pairs_checked,
        tolerance: tol,
    };
    Ok(EquivalenceReport { superadditive, phi_monotone, agreement })
}
