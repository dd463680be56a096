//! N-qubit states, Haar-sampled measurement settings, correlation tensors and
//! outcome behaviors.
//!
//! Everything here is a plain immutable value; all operations are pure
//! functions, so they can be shared freely across worker threads.

mod behavior;
mod bloch;
mod correlations;
mod state;

pub use behavior::{
    behavior_from_born, behavior_from_born_mixed, behavior_from_correlations, Behavior,
};
pub use bloch::{BlochSetting, SettingsSample};
pub use correlations::{correlation_tensor, correlation_tensor_mixed, CorrelationTensor};
pub use state::{random_pure_state, white_noise_mixture, DensityMatrix, StateVector};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("state dimension {0} is not a power of two")]
    DimensionNotPowerOfTwo(usize),
    #[error("state vector norm {0} differs from 1 beyond tolerance")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix trace {0} differs from 1 beyond tolerance")]
    NotUnitTrace(f64),
    #[error("matrix is not positive semidefinite within tolerance")]
    NotPositive,
    #[error("visibility {0} outside [0, 1]")]
    VisibilityOutOfRange(f64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("probability table invalid: {0}")]
    InvalidBehavior(String),
}
