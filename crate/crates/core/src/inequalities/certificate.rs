use std::fmt;

use crate::domain::RealFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    HhLower,
    HhUpper,
    Ostrowski,
    Ghh,
    GhhHolder,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::HhLower => "hh_lower",
            BoundKind::HhUpper => "hh_upper",
            BoundKind::Ostrowski => "ostrowski",
            BoundKind::Ghh => "ghh",
            BoundKind::GhhHolder => "ghh_holder",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A bound compared against the value achieved by an extremal function.
#[derive(Debug, Clone)]
pub struct BoundCertificate {
    pub kind: BoundKind,
    pub bound_value: f64,
    pub achieved_value: f64,
    /// `bound_value − achieved_value`
    pub gap: f64,
    pub witness_function: Option<RealFunction>,
    pub tolerance: f64,
}

impl BoundCertificate {
    pub fn new(
        kind: BoundKind,
        bound_value: f64,
        achieved_value: f64,
        witness_function: Option<RealFunction>,
        tolerance: f64,
    ) -> Self {
        BoundCertificate {
            kind,
            bound_value,
            achieved_value,
            gap: bound_value - achieved_value,
            witness_function,
            tolerance,
        }
    }

    /// Whether the witness attains the bound within tolerance.
    pub fn is_sharp(&self) -> bool {
        self.gap.abs() <= self.tolerance
    }
}
