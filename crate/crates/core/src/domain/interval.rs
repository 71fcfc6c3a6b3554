use std::fmt;

use crate::error::{Error, Result};

/// An open interval `(lo, hi)`; `hi` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let hi_ok = hi.is_finite() || hi == f64::INFINITY;
        if !lo.is_finite() || !hi_ok || lo >= hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn unbounded_above(lo: f64) -> Result<Self> {
        Self::new(lo, f64::INFINITY)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { x, lo: self.lo, hi: self.hi })
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_reversed() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NEG_INFINITY, 1.0).is_err());
        assert!(Interval::new(0.0, f64::NAN).is_err());
    }

    #[test]
    fn length_and_membership() {
        let i = Interval::new(0.0, 4.0).unwrap();
        assert_eq!(i.length(), 4.0);
        assert!(!i.contains(0.0));
        assert!(i.contains(2.0));
        let u = Interval::unbounded_above(1.0).unwrap();
        assert_eq!(u.length(), f64::INFINITY);
        assert!(u.contains(1e300));
    }
}
