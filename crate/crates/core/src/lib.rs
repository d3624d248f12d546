//! Phase-space analysis of a free Gaussian wave packet.
//!
//! The crate evaluates the packet's Wigner function, the probability `Pi` of
//! finding the particle beyond a detector point, and the exact split of
//! `dPi/dtau` into a rigid-shift and a shear contribution. The shear part can
//! outweigh the shift part, so `Pi` can decrease while the packet center
//! moves toward the detector. The [`ensemble`] module reproduces the same
//! `Pi` with free classical particles, which shows the effect is classical.
//!
//! Modules, bottom-up:
//!
//! - [`numerics`]: `erfc`, Gauss–Legendre quadrature, finite differences, counter-based RNG
//! - [`packet`]: the wave function in physical units
//! - [`wigner`]: Wigner function, dimensionless rescaling, quadrature oracle
//! - [`flow`]: `Pi`, shift/shear rates, negative-flow predicates, time scans
//! - [`geometry`]: contour ellipses, major-axis angle, angle-form condition
//! - [`ensemble`]: classical Monte Carlo oracle
//! - [`cli`]: configuration and dataset emission behind the `wb` binary

pub mod cli;
pub mod ensemble;
mod error;
pub mod flow;
pub mod geometry;
pub mod numerics;
pub mod packet;
pub mod wigner;

pub use error::{Error, Result};
