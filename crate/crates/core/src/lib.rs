//! Monte Carlo machinery for the nonlocal fraction and nonlocality strength
//! of N-qubit states under Haar-random local measurements.
//!
//! Two interchangeable detection routes decide whether a sampled behavior
//! leaves the local polytope:
//!
//! * [`detector::FamilyDetector`] evaluates inequality families — the lifted
//!   CHSH family or the symmetry orbit of any cataloged inequality — which is
//!   fast and experimentally meaningful but incomplete;
//! * [`detector::LpDetector`] solves exact membership and critical-visibility
//!   linear programs over the deterministic-strategy vertices.
//!
//! Detectors are registered by name and selected at runtime; see
//! [`detector::build_detector`]. The estimators in [`montecarlo`] are
//! deterministic for a given seed regardless of thread count.

pub mod catalog;
pub mod detector;
pub mod inequality;
pub mod montecarlo;
pub mod polytope;
pub mod quantum;
pub mod scenario;
pub mod simplex;
pub mod witness;

pub use detector::{build_detector, Detector, DetectorKind};
pub use inequality::{BellInequality, InequalityFamily};
pub use montecarlo::{Estimate, McConfig, StrengthHistogram, TypicalityEstimate};
pub use quantum::{
    correlation_tensor, random_pure_state, Behavior, BlochSetting, CorrelationTensor,
    DensityMatrix, SettingsSample, StateVector,
};
pub use scenario::Scenario;
