//! Motion-induced radiation from vibrating mirrors and cavities.
//!
//! A mirror oscillating in vacuum scatters vacuum fluctuations into real
//! photon pairs (the dynamical Casimir effect). This crate computes the
//! observable consequences for two configurations driven harmonically at
//! frequency Ω:
//!
//! * a single mirror in free space, where photon pairs are emitted with
//!   frequencies ω and Ω-ω and a parabolic spectrum ([`single_mirror`]);
//! * a two-mirror cavity of one-way flight time τ and loss parameter ρ
//!   (mirror reflectivities r₁r₂ = e^(-2ρ), finesse 1/ρ), where emission is
//!   resonantly enhanced whenever Ω matches a sum of two cavity modes
//!   kπ/τ + k'π/τ ([`cavity`]).
//!
//! Every closed-form result has an independent numerical route: fluxes can be
//! evaluated by direct adaptive integration of the exact spectral kernels
//! ([`quadrature`]), by a resonant mode sum, or by a resummed formula, and the
//! three are cross-checked in the test suite. The [`experiments`] module adds
//! frequency scans, sampled spectra with peak metadata, and CSV/JSON export.
//!
//! # Units
//!
//! Public interfaces are SI: frequencies in rad/s, lengths in m, times in s,
//! temperatures in K. Every function that needs a physical constant takes an
//! explicit [`PhysicalConstants`], so dimensionless work is just
//! [`PhysicalConstants::natural()`] (c = ħ = k_B = 1) with inputs of order one.
//!
//! # Example
//!
//! ```
//! use motrad::{cavity, model::CavityConfig, PhysicalConstants};
//!
//! // A cavity driven on its second resonance (Ω τ = 2π), moderate finesse.
//! let consts = PhysicalConstants::natural();
//! let cav = CavityConfig::new(1.0, 1e-2, 1e-3, 0.0, 2.0 * std::f64::consts::PI, 1.0).unwrap();
//! let breakdown =
//!     cavity::flux_mode_sum(&cav, &consts, cavity::default_shell_cutoff(&cav)).unwrap();
//! assert!(breakdown.total > breakdown.nonresonant);
//! ```

// Input validation spells positivity checks as !(x > 0.0) so NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature node tables and frozen oracle values carry more digits than f64
// resolves.
#![allow(clippy::excessive_precision)]

pub mod cavity;
pub mod constants;
pub mod error;
pub mod experiments;
pub mod export;
pub mod model;
pub mod quadrature;
pub mod single_mirror;

pub use constants::PhysicalConstants;
pub use error::{Error, Result};
