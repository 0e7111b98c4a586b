//! Decision analysis over expected-utility intervals.
//!
//! Evidence about the utility of a choice is expressed as a mass function
//! over a finite frame of outcomes. Each choice then carries an interval of
//! expected utilities, and a single parameter `rho` in `[0, 1]` picks a
//! point expectation inside that interval: `rho` is the probability that
//! the ambiguity inside every non-singleton focal element resolves
//! favorably. The crate computes those intervals ([`evidence`]), analyzes
//! which choice is preferred on which sub-range of `rho` and with what
//! probability under a distribution for `rho` ([`preference`]), solves
//! sequential games where several decision makers compete for the highest
//! expected utility ([`game`]), and provides brute-force grid and Monte
//! Carlo engines for validating the analytic results ([`oracle`]).

pub mod error;
pub mod evidence;
pub mod game;
pub mod oracle;
pub mod preference;

pub use error::{Error, Result};

/// Absolute tolerance shared by mass-sum validation, interval checks, rho
/// comparisons, and tie-breaking. Inputs outside tolerance are rejected,
/// never silently renormalized.
pub const TOLERANCE: f64 = 1e-9;
