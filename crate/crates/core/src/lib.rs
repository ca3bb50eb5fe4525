//! Exact symbolic calculus for oriented cohomology theories.
//!
//! Every class lives in a [`coeffring::GradedRing`]: a polynomial ring over
//! the rationals in graded generators, truncated by per-generator nilpotency
//! and by a global cap on the degree carried by positive-degree generators.
//! On top of that substrate the crate builds formal group laws ([`fgl`]),
//! Chern, Euler and Thom classes ([`chern`]), Gysin pushforwards and the
//! intersection-theoretic identity checks ([`gysin`]), and Todd classes with
//! Riemann-Roch checks ([`rr`]). [`suite`] bundles every check into one
//! deterministic, parallel harness.

pub mod chern;
pub mod coeffring;
mod error;
pub mod fgl;
pub mod gysin;
pub mod par;
pub mod random;
pub mod report;
pub mod rr;
pub mod suite;

pub use error::{Error, Result};

/// Degree cap used when nothing else is configured.
pub const DEFAULT_CAP: u32 = 6;
