//! Numerical thresholds used across the crate.
//!
//! Every comparison against a tolerance goes through one of these constants so
//! that the acceptance thresholds and the library's own validation agree.

/// Maximum `‖ρ − ρ†‖_max` accepted when building a [`DensityMatrix`](crate::DensityMatrix).
pub const HERMITIAN: f64 = 1e-12;

/// Maximum `|Tr ρ − 1|` accepted when building a density matrix.
pub const UNIT_TRACE: f64 = 1e-12;

/// Most negative eigenvalue accepted when building a density matrix.
pub const POSITIVITY: f64 = 1e-12;

/// Largest Hermiticity defect for which [`min_eigenvalue`](crate::min_eigenvalue) still answers.
pub const EIGEN_INPUT_HERMITIAN: f64 = 1e-8;

/// Relative residual allowed by [`extract_eigenrate`](crate::extract_eigenrate).
pub const PROPORTIONALITY: f64 = 1e-10;

/// Largest imaginary part of an extracted rate.
pub const RATE_IMAGINARY: f64 = 1e-10;

/// Propagation records a positivity warning below this eigenvalue.
pub const NEGATIVITY_WARNING: f64 = -1e-6;

/// Relative slack when checking that a step divides a time span.
pub const GRID_DIVISIBILITY: f64 = 1e-9;

/// Minimum number of steps per period of the fastest oscillation.
pub const STEPS_PER_PERIOD: f64 = 40.0;

/// Keeps the step-size heuristic finite for models with no dynamics.
pub const DT_GUARD: f64 = 1e-3;

/// Entries below this magnitude are treated as structural zeros when
/// labelling operators for display.
pub const DISPLAY_ZERO: f64 = 1e-300;

/// Frequencies below this fraction of the operand magnitudes count as zero.
pub const FREQUENCY_SNAP: f64 = 1e-12;
