//! Simulation core for base-station-integrated beyond-diagonal RIS (BD-RIS)
//! passive beamforming.
//!
//! A single active antenna illuminates a transmissive planar surface from a
//! short distance behind it; the surface's scattering matrix shapes the
//! radiated beam toward a single-antenna user over a clustered mmWave channel.
//! This crate contains everything that is pure computation:
//!
//! - [`geometry`]: planar cell layout, feed distances, steering vectors
//! - [`channel`]: near-field feed channel and clustered geometric user channel
//! - [`precoder`]: beamforming vectors under full, codebook, and partial CSI
//! - [`ris_config`]: groupings, Takagi-based block-unitary configuration,
//!   diagonal and active-array benchmarks, circuit complexity
//! - [`metrics`]: channel amplitude variation, SNR expressions, gain bounds,
//!   beam patterns and directivity figures
//! - [`eval`]: Monte-Carlo engines for error rate, achievable rate, SNR gain,
//!   and parameter sweeps
//!
//! The crate is `no_std` (it needs `alloc`). Enabling the `parallel` feature
//! distributes Monte-Carlo trials over a rayon pool; results are bit-identical
//! with and without it.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod channel;
mod error;
pub mod eval;
pub mod geometry;
pub mod metrics;
pub mod precoder;
pub mod ris_config;
pub mod units;

pub use error::{Error, Result};

/// Complex double used for every baseband quantity.
pub type C64 = num_complex::Complex64;
/// Dynamically sized complex column vector.
pub type CVector = nalgebra::DVector<C64>;
/// Dynamically sized complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
