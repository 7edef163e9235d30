//! Bernstein-type tail bounds for C-mixing processes, the sample-size
//! threshold from which they hold, literature comparators, oracle constants
//! for clipped learners, and Monte Carlo checks of the bounds.

mod blocking;
mod bounds;
mod comparators;
mod oracle;
mod validate;

pub use blocking::{blocking, BlockingScheme};
pub use bounds::{
    bernstein_deviation, bernstein_tail_bound, block_count, log_factor, n0, FunctionBounds,
    MAX_THRESHOLD,
};
pub use comparators::{comparator_bounds, ComparatorParams, ComparatorRow, COMPARATOR_NAMES};
pub use oracle::{oracle_constants, OracleConstants, OracleInputs};
pub use validate::{
    mc_validate_tail, product_bound_mc_check, ProductBoundReport, ProductCheckConfig, TailRow,
    TailValidation, TailValidationConfig, DEFAULT_PILOT_LEN,
};
