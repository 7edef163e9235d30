//! Stationary dynamical systems, noisy observation, and correlation decay.

mod correlation;
mod observable;
mod rate;
mod systems;
mod trajectory;

pub use correlation::{empirical_correlation, empirical_correlation_with_se, CORRELATION_BATCHES};
pub use observable::Observable;
pub use rate::{fit_geometric_rate, parse_correlation_csv, MixingRate, RateFit, GAMMA_GRID};
pub use systems::{arcsine_from_uniform, SystemKind, DEFAULT_BURN_IN};
pub use trajectory::{
    add_noise, generate_iid_surrogate, generate_trajectory, NoiseModel, Trajectory,
};
