use std::fmt;

/// Default additive tolerance for "LHS ≤ RHS + tol" checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The most violated point pair (or triple, with `mid`) of a failed check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    pub mid: Option<f64>,
    pub slack: f64,
}

/// Outcome of a grid check: `Fails` exactly when the worst slack is below
/// `-tolerance`, in which case the witness records where.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub worst_margin: f64,
    pub witness: Option<Witness>,
    pub pairs_checked: usize,
    pub tolerance: f64,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }

    /// Conjunction of two reports over the same tolerance: the worse margin wins.
    pub fn and(self, other: CheckReport) -> CheckReport {
        let mut t = MarginTracker::new();
        t.absorb(&self);
        t.absorb(&other);
        t.finish(self.tolerance.max(other.tolerance))
    }
}

/// Accumulates slacks and remembers the most negative one.
#[derive(Debug, Clone)]
pub struct MarginTracker {
    worst: f64,
    at: Option<(f64, f64, Option<f64>)>,
    count: usize,
}

impl Default for MarginTracker {
    fn default() -> Self {
        Self::new()
    }
}

impl MarginTracker {
    pub fn new() -> Self {
        MarginTracker { worst: f64::INFINITY, at: None, count: 0 }
    }

    pub fn observe(&mut self, x: f64, y: f64, slack: f64) {
        self.observe_at(x, y, None, slack);
    }

    pub fn observe_triple(&mut self, x: f64, mid: f64, z: f64, slack: f64) {
        self.observe_at(x, z, Some(mid), slack);
    }

    fn observe_at(&mut self, x: f64, y: f64, mid: Option<f64>, slack: f64) {
        self.count += 1;
        // NaN slack counts as an unbounded violation.
        let slack = if slack.is_nan() { f64::NEG_INFINITY } else { slack };
        if slack < self.worst || self.at.is_none() {
            self.worst = slack;
            self.at = Some((x, y, mid));
        }
    }

    fn absorb(&mut self, r: &CheckReport) {
        self.count += r.pairs_checked;
        if r.worst_margin < self.worst {
            self.worst = r.worst_margin;
            self.at = r.witness.map(|w| (w.x, w.y, w.mid));
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn worst(&self) -> f64 {
        self.worst
    }

    pub fn finish(self, tolerance: f64) -> CheckReport {
        let fails = self.worst < -tolerance;
        let witness =
            if fails { self.at.map(|(x, y, mid)| Witness { x, y, mid, slack: self.worst }) } else { None };
        CheckReport {
            verdict: Verdict::from_bool(!fails),
            worst_margin: self.worst,
            witness,
            pairs_checked: self.count,
            tolerance,
        }
    }
}
