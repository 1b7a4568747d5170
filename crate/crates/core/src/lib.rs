//! Stochastic numerics for uniform discretizations of pathwise integrals
//! driven by fractional Brownian motion.
//!
//! The crate provides exact Gaussian samplers for fractional Brownian motion,
//! convex/Lipschitz integrand descriptions, left-point Riemann sums together
//! with their exact or reference limits, Gaussian level-crossing probability
//! analytics, Riemann-Liouville fractional calculus on sampled functions, and
//! a Monte Carlo harness that estimates empirical convergence rates.
//!
//! The crate is `no_std` (with `alloc`); all file formats, CLI plumbing and
//! thread pools live in the companion `fbmrate-cli` crate. Every operation is
//! a pure function of its inputs: ensembles derive the RNG stream of
//! replicate `k` from `(seed, k)`, so results never depend on scheduling.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod crossing;
pub mod discretize;
pub mod error;
pub mod experiment;
pub mod fbm;
pub mod fraccalc;
pub mod integrand;
pub mod quad;
pub mod rng;
pub mod stats;

mod fft;

pub use error::{Error, Result};
