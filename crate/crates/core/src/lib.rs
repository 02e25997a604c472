//! Bound-state spectra for the q-deformed Woods-Saxon + Rosen-Morse +
//! symmetric-double-well potential family.
//!
//! The closed-form spectrum comes from reducing the Schrödinger equation
//! (hbar = 2 mu = 1) to hypergeometric type under z = -e^{-2 alpha x} and
//! applying the Nikiforov-Uvarov quantization; every closed-form result is
//! cross-checked against independent eigensolvers (finite-difference
//! Sturm bisection, Numerov shooting, complex shooting for the PT-symmetric
//! and non-PT complexified variants).

pub mod closed_form;
pub mod error;
pub mod nu;
pub mod oracle;
pub mod poly;
pub mod potential;
pub mod report;
pub mod special;
pub mod wavefunction;

pub use error::{Error, Result};
