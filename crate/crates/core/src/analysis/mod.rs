//! Φ-monotone and Φ-Hölder verification, interpolating blocks, the two-point
//! function and its functional equations.

mod blocks;
mod pairs;
mod superadditive;
mod two_point;

pub use blocks::{
    build_holder_interpolant, build_lower_block, build_upper_block, can_interpolate_holder,
    can_interpolate_monotone, InterpolationSide,
};
pub(crate) use blocks::{screen_holder_phi, screen_monotone_phi};
pub(crate) use pairs::check_lag_range;
pub use pairs::{check_phi_holder, check_phi_monotone, holder_slack, monotone_slack};
pub use superadditive::{check_superadditive_equivalence, EquivalenceReport};
pub use two_point::{
    build_two_point, check_diagonal_bounds, check_feg_equations, check_feh_equations, ClosedFormTwoPoint,
    Negated, TwoPoint, TwoPointFunction, MAX_CACHE_POINTS,
};
