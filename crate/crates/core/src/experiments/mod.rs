//! Semicycle analysis, boundedness classification, convergence probes,
//! counterexample generators, and the decay-bound probe.

mod converge;
mod counterexample;
mod decay;
mod semicycle;

pub use converge::{
    conjecture_probe, convergence_probe, perturbed_threshold_spec, ConvergenceReport, Verdict,
};
pub use counterexample::{counterexample, CounterexampleKind, CounterexampleReport};
pub use decay::{decay_bound, DecayProbe};
pub use semicycle::{
    capped_profile_spec, classify, envelope_check, semicycles, BoundednessClass, EnvelopeReport,
    SemicycleReport,
};
