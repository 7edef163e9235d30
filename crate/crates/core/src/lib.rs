//! Numerical laboratory for Bernstein-type concentration under geometric
//! C-mixing.
//!
//! The crate is organised bottom-up:
//!
//! * [`function_spaces`]: sup-norm, BV / Hölder / Lipschitz semi-norms and the
//!   C-norm over sampled functions, plus the exp-property check.
//! * [`processes`]: exact-in-distribution trajectories of chaotic maps,
//!   additive noise, empirical correlation decay and geometric-rate fitting.
//! * [`concentration`]: the tail bound, its sample-size threshold, the blocking
//!   construction, comparator bounds, oracle-inequality constants and Monte
//!   Carlo validators.
//! * [`losses`]: clippable least-squares and pinball losses.
//! * [`learners`]: Gaussian-kernel LS-SVM, quantile SVM and the
//!   training/validation hyperparameter selection.
//! * [`forecasting`]: one-step forecasting of noisy dynamical systems.

pub mod concentration;
pub mod data;
pub mod error;
pub mod experiments;
pub mod forecasting;
pub mod function_spaces;
pub mod learners;
pub mod losses;
pub mod mc;
pub mod processes;

pub use error::{Error, Result};
