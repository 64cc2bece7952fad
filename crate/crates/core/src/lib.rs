//! Quasi-static co-simulation of RF-MEMS switched varactors built on a
//! two-area, dual-gap cantilever, and of distributed MEMS transmission line
//! (DMTL) phase shifters loaded with them.
//!
//! The crate is split along the physical layers of the problem:
//!
//! - [`electromech`]: rigid-lever cantilever model. Electrostatic torques,
//!   up-state equilibrium, pull-in, contact force, release voltage under RF
//!   power, latching and self-actuation limits, capacitances.
//! - [`network`]: ABCD two-port algebra, S-parameter conversion and
//!   Touchstone v1 I/O.
//! - [`dmtl`]: loaded-line phase shifter model built on the two above.
//! - [`design`] and [`analysis`]: design-file ingestion and the batch
//!   analyses behind the `mems-sim` command line tool.
//!
//! All quantities are SI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod design;
pub mod dmtl;
pub mod electromech;
mod error;
pub mod network;

pub use error::{Error, Result};

/// Vacuum permittivity (F/m).
pub const EPS0: f64 = 8.854_187_812_8e-12;

/// Speed of light in vacuum (m/s).
pub const C0: f64 = 299_792_458.0;
