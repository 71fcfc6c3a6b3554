use std::cmp::Ordering;
use std::fmt;

/// A point of the extended real line `[−∞, +∞]` with a total order.
#[derive(Debug, Clone, Copy)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Lossy conversion back to `f64` (infinities map to `±inf`).
    pub fn to_f64(&self) -> f64 {
        match *self {
            ExtendedReal::NegInf => f64::NEG_INFINITY,
            ExtendedReal::Finite(v) => v,
            ExtendedReal::PosInf => f64::INFINITY,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            ExtendedReal::NegInf => 0,
            ExtendedReal::Finite(_) => 1,
            ExtendedReal::PosInf => 2,
        }
    }
}

impl From<f64> for ExtendedReal {
    /// `NaN` has no place on the extended line and is mapped to `+∞`
    /// so that it can never masquerade as a finite extremum.
    fn from(v: f64) -> Self {
        if v == f64::NEG_INFINITY {
            ExtendedReal::NegInf
        } else if v.is_finite() {
            ExtendedReal::Finite(v)
        } else {
            ExtendedReal::PosInf
        }
    }
}

impl Ord for ExtendedReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a.total_cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for ExtendedReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtendedReal {}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => write!(f, "-inf"),
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PosInf => write!(f, "+inf"),
        }
    }
}
