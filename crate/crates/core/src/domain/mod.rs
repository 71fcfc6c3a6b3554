//! Domain primitives shared by every other module.

mod extended;
mod function;
mod grid;
mod interval;
mod report;

pub use extended::ExtendedReal;
pub use function::{Interp, RealFunction, SampledTable};
pub use grid::{Grid, LagGrid, DEFAULT_HORIZON, DEFAULT_MARGIN_FRACTION};
pub use interval::Interval;
pub use report::{CheckReport, MarginTracker, Verdict, Witness, DEFAULT_TOLERANCE};
