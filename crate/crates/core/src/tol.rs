//! Numeric tolerances used across the crate.
//!
//! Collected here so the kernel, the analysis layers, and the test suites
//! share one set of constants instead of scattering magic numbers.

/// Absolute tolerance for root refinement, scaled by `sup |x|` on the bracket.
pub const ROOT_ABS: f64 = 1e-12;

/// Agreement required between exact segments and sampled grid values.
pub const EXACT_VS_GRID: f64 = 1e-12;

/// Default trajectory fallback grid step. Linear interpolation error is
/// `O(step^2)`, which keeps it below every acceptance tolerance (>= 1e-6).
pub const GRID_STEP: f64 = 1e-4;

/// Residual budget for exact-mode solutions of the delay equation.
pub const RESIDUAL_EXACT: f64 = 1e-9;

/// Residual budget for any integrator output on its own probe grid.
pub const RESIDUAL_ANY: f64 = 1e-8;

/// Guard above `1/e` below which threshold quantities are not computed
/// (`rho` diverges at the threshold; the guard bounds runtimes).
pub const TAU_GUARD: f64 = 1e-6;

/// Residual required of the spectral root solves.
pub const SPECTRAL_RESIDUAL: f64 = 1e-12;

/// Periodicity defect allowed for constructed periodic solutions.
pub const PERIOD_DEFECT: f64 = 1e-10;

/// Tolerance on period agreement when testing shift equivalence.
pub const PERIOD_MATCH: f64 = 1e-9;

/// Classification margin around the critical semicycle length.
pub const CLASSIFY_MARGIN: f64 = 1e-9;
