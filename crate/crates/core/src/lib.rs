//! Numerical laboratory for the linear delay differential equation
//! `x'(t) = p(t) x(tau(t))` with piecewise-analytic coefficient and delay.
//!
//! The crate is organised around an exact piecewise kernel: coefficients,
//! delays, and all special solutions are represented by closed-form segments
//! (constant, affine, polynomial, exponential), so the method of steps can
//! integrate the critical constructions without discretisation error.
//! On top of the kernel sit the oscillation-threshold quantities (the
//! comparison solution `x_tau` with its first root `rho(tau)`, the growth
//! envelope `psi_tau` with its switch point `xi_tau`, the critical semicycle
//! length `Lambda(tau)`), the four special (anti)periodic solutions sitting
//! exactly on the boundedness threshold, the `|p| = 1` time rescaling, and a
//! set of convergence and counterexample experiments.
//!
//! `no_std` compatible (requires `alloc`); disable default features to drop
//! the standard library and route math through `libm`.

#![cfg_attr(not(feature = "std"), no_std)]
// Validation guards use `!(x > y)` so NaN parameters fail closed.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod dde;
pub mod error;
pub mod experiments;
pub mod math;
pub mod myshkis;
pub mod normalize;
pub mod periodic;
pub mod piecewise;
pub mod rng;
pub mod roots;
pub mod threshold;
pub mod tol;
pub mod trajectory;

pub use dde::{integrate, residual, DdeSpec, DelayFn, IntegrateOpts, Mode};
pub use experiments::{
    capped_profile_spec, classify, conjecture_probe, convergence_probe, counterexample,
    decay_bound, envelope_check, perturbed_threshold_spec, semicycles, BoundednessClass,
    ConvergenceReport, CounterexampleKind, CounterexampleReport, DecayProbe, EnvelopeReport,
    SemicycleReport, Verdict,
};
pub use error::{Error, Result};
pub use myshkis::{myshkis_solution, phi_iteration, rho_asymptotics, MyshkisRecord};
pub use threshold::{lambda, lambda_asymptotics, lambda_closed_form, psi_and_xi, spectral, threshold_record, SpectralRecord, ThresholdRecord};
pub use normalize::{abs_transform, time_rescale, AbsTransform, TimeRescaleMap};
pub use periodic::{build, shift_equivalence, verify, PeriodicKind, PeriodicSolution, VerifyReport};
pub use piecewise::{Periodicity, PiecewiseFn, Segment, SegmentKind};
pub use trajectory::{find_roots, RootSet, Trajectory};
