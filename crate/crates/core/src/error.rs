use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval ({lo}, {hi}): need lo < hi")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("degenerate interval: {0}")]
    DegenerateInterval(String),

    #[error("{x} lies outside the open interval ({lo}, {hi})")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("error function argument {t} outside [0, {length})")]
    OutOfRange { t: f64, length: f64 },

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("input is not nondecreasing: value drops by {drop} between {x} and {y}")]
    NonMonotoneInput { x: f64, y: f64, drop: f64 },

    #[error("singular transform: {0}")]
    SingularTransform(String),

    #[error("quadrature on [{a}, {b}] did not converge (last change {last_change:e})")]
    QuadratureNonConvergence { a: f64, b: f64, last_change: f64 },

    #[error("hypothesis screen failed: {0}")]
    HypothesisScreen(String),

    #[error("error function is {value} at 0, interpolation requires 0")]
    NonzeroAtZero { value: f64 },

    #[error("function is positive ({value}) at {x}")]
    Positivity { x: f64, value: f64 },

    #[error("iterate {iteration} blew up (|value| = {value:e})")]
    IterateBlowUp { iteration: usize, value: f64 },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("csv error{}: {msg}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    Csv { line: Option<u64>, msg: String },
}
