//! Verification toolkit for approximately monotone functions: functions
//! that are monotone up to an error function `Φ`, their Hölder-type
//! counterparts, and the Hermite–Hadamard and Ostrowski type integral
//! inequalities they satisfy.
//!
//! Every check runs over a finite grid and returns a [`CheckReport`] with
//! the worst observed slack and, on failure, a witness. A passing verdict
//! means no violation was found on that grid.

pub mod analysis;
pub mod csv;
pub mod domain;
pub mod error;
pub mod error_fn;
pub mod expr;
pub mod inequalities;
pub mod numerics;

pub use domain::{
    CheckReport, ExtendedReal, Grid, Interp, Interval, LagGrid, RealFunction, SampledTable, Verdict, Witness,
    DEFAULT_TOLERANCE,
};
pub use error::{Error, Result};
pub use error_fn::{ErrorFunction, ErrorSpec};
pub use expr::Expr;
pub use numerics::{QuadratureRule, QuadratureSpec};
