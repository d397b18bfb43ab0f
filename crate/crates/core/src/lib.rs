//! Sequential projective measurement statistics on qubits and the
//! macrorealist inequality families built on top of them.
//!
//! The crate is organized around a small pipeline:
//!
//! * [`qubit`] — 2×2 complex algebra, qubit states, x-rotation evolution and
//!   the Lüders sequential-measurement probability engine.
//! * [`behavior`] — context-indexed probability tables (one table per subset
//!   of measured times), their moments, and classical behaviors generated
//!   from explicit joint distributions.
//! * [`catalog`] — every inequality family as an explicit linear functional
//!   over behavior atoms, with canonical deduplication.
//! * [`oracle`] — exact macrorealism decision via joint-distribution
//!   feasibility (phase-1 simplex) and NSIT equality checks.
//! * [`bell`] — the two-qubit CHSH baseline and the Fine-style equivalence
//!   of probabilistic Bell forms with the CHSH correlator expression.
//!
//! The crate is `no_std` (with `alloc`); all operations are pure functions
//! of immutable inputs and safe to evaluate in parallel.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod behavior;
pub mod bell;
pub mod catalog;
pub mod oracle;
pub mod qubit;

use alloc::string::String;
use core::fmt;

/// Absolute tolerance for algebraic identities and state invariants.
pub const TOL_ALGEBRA: f64 = 1e-12;
/// Absolute tolerance for solver outputs and violation thresholds.
pub const TOL_SOLVER: f64 = 1e-9;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied value failed validation.
    InvalidInput(String),
    /// The feasibility solver failed to converge; carries diagnostics.
    Solver(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Solver(msg) => write!(f, "solver error: {msg}"),
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn input_error<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
