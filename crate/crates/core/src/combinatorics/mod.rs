//! Band matrices, permanents, ball volumes, code-size bounds and the
//! greedy construction.

mod bounds;
mod greedy;
mod matrix;
mod permanent;

pub use bounds::{
    asymptotic_bounds, ball_size_bruteforce, ball_size_exact, ball_size_exact_capped,
    bounds_report, gilbert_lower, gilbert_lower_capped, ln_rational, packing_upper,
    packing_upper_capped, perm_bound_lower, perm_bound_upper, BoundsReport, CodeSizeBound,
    LogBound,
};
pub use greedy::{greedy_construct, greedy_construct_capped};
pub use matrix::{band_row_sum, build_matrix, BinaryMatrix};
pub use permanent::{
    permanent_naive, permanent_ryser, permanent_ryser_capped, NAIVE_MAX_ORDER, RYSER_MAX_ORDER,
};
