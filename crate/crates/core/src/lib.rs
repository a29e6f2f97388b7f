//! Decoherence versus Zeno timescales for a laser-cooled trapped ion modelled
//! as a particle in a quartic bistable potential.
//!
//! The crate is organised bottom-up:
//!
//! - [`units`]: physical constants and boundary conversions (SI internally).
//! - [`potential`]: the quartic double well, its stationary points, the
//!   harmonic ground state of the left well and the mean-square shift.
//! - [`discrete`]: discrete-time (retarded) dissipative evolution, giving the
//!   relaxation step and the decay constant of a transition.
//! - [`timescales`]: closed-form decoherence, dwell, Zeno and transition
//!   temperature formulas.
//! - [`master`]: a grid integrator for the position-representation master
//!   equation, used to check the exponential decay of coherences.
//! - [`scenarios`]: named trap presets, qubit ladder bookkeeping, reports and
//!   sweeps.

pub mod discrete;
mod error;
pub mod format;
pub mod master;
pub mod potential;
pub mod scenarios;
pub mod timescales;
pub mod units;

pub use error::{Error, Result};
