//! Gaussian-kernel learners: least-squares and quantile SVMs, clipped
//! prediction, and hyperparameter selection on a training/validation split.

mod grid;
mod kernel;
mod lssvm;
mod model;
mod quantile;
mod solve;
mod theory;
mod tvsvm;

pub use grid::{make_hypergrid, HyperGrid, DEFAULT_GRID_CAP};
pub use kernel::{cross_kernel, kernel_matrix, GaussianKernel};
pub use lssvm::fit_lssvm;
pub use model::{KernelModel, MODEL_FORMAT, MODEL_VERSION};
pub use quantile::{fit_quantile_svm, QuantileFit, QUANTILE_MAX_ITER, QUANTILE_TOL};
pub use theory::{entropy_bound, phi, theoretical_schedule, Schedule};
pub use tvsvm::{tv_split, tv_svm, TvSvmResult, ValidationEntry};
