//! Spatial-correlation laboratory for massive MIMO antenna topologies.
//!
//! The crate builds transmit correlation matrices for uniform rectangular
//! and cylindrical arrays from measured angular distributions, synthesizes
//! correlated downlink channels, and measures how the usual massive-MIMO
//! convergence metrics and the matched-filter SINR respond.
//!
//! Three correlation engines share one contract and cross-check each other:
//!
//! * closed-form approximations for both topologies (fast, the default),
//! * adaptive quadrature of the defining integrals with exact element
//!   phases (the ground truth),
//! * a seeded Monte-Carlo average over instantaneous array factors.
//!
//! The `corrlab` binary drives experiment sweeps from a plain-text config
//! (see `configs/` for the shipped presets) and writes deterministic CSV or
//! JSON result tables.

pub mod angular;
pub mod channel;
pub mod correlation;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod metrics;
pub mod numkit;
pub mod precoding;

pub use error::{Error, Result};
pub use numkit::ComplexMatrix;
