//! Quaternionic time-frequency analysis with Hermite windows.
//!
//! The crate evaluates the quaternionic short-time Fourier transform with
//! normalized Hermite-function windows, the polyanalytic Bargmann transforms it
//! factors through, their reproducing kernels, and the energy, L^p and
//! concentration bounds they satisfy.

pub mod bargmann;
pub mod error;
pub mod hermite;
pub mod io;
pub mod numerics;
pub mod qstft;
pub mod quaternion;
pub mod signal;
pub mod special;
pub mod verify;

pub use error::{QtfaError, Result};
pub use quaternion::{ImaginaryUnit, Quaternion};
