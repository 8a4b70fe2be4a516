//! SLH circuit algebra for passive linear-optical circuits.
//!
//! An open optical system with `n` input/output field modes is described by
//! a triplet `(S, L, H)`: an `n × n` scattering matrix, an `n`-vector of
//! coupling amplitudes and a scalar Hamiltonian. Every component handled
//! here has no internal degrees of freedom, so all three entries are plain
//! numbers and composing circuits reduces to complex linear algebra.
//!
//! - [`slh`] holds [`SlhModel`] and the series, concatenation and feedback
//!   composition rules.
//! - [`components`] builds phase shifts, beamsplitters and coherent drives,
//!   and evaluates driven outputs.
//! - [`selector`] builds Mach-Zehnder switches and the cascaded phase
//!   selector that computes `s · μ (mod 2π)`, plus its matrix extensions.
//! - [`feedback`] builds the single-port feedback selector and the weighted
//!   (non-binary) variant, with their closed-form transfer functions.
//! - [`random`] generates random passive circuits for property checks.
//!
//! Ports are 1-indexed everywhere they appear in a public signature. Port 1
//! is the "left" optical path and port 2 the "right" one.

pub mod components;
pub mod error;
pub mod feedback;
pub mod phase;
pub mod random;
pub mod selector;
pub mod slh;

pub use components::{beamsplitter, coherent_drive, output_amplitudes, phase_shift, DriveAmplitudes};
pub use error::{Error, Result};
pub use phase::ControlPhase;
pub use slh::{check_unitary, concat, feedback, identity, series, SlhModel};

pub use num_complex::Complex64;
