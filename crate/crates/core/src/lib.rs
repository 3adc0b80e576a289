//! Quantum-probability model of asset returns.
//!
//! Return densities are squared moduli of complex trading-intention
//! amplitudes solving a Schrödinger-like trading equation whose discrete
//! levels are intrinsic trading volumes. The crate solves that equation,
//! evaluates the volume functionals, and searches daily bars for the volume
//! threshold above which returns stop being unimodal.

// `!(x > 0.0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitude;
pub mod error;
pub mod grid;
pub mod modality;
pub mod oscillator;
pub mod pipeline;
pub mod spectral;

pub use error::{Error, Result};
