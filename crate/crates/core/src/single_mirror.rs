//! Radiation from a single vibrating mirror in vacuum.
//!
//! A mirror oscillating at frequency `omega_drive` converts vacuum
//! fluctuations into photon pairs whose frequencies add up to the drive
//! frequency. Everything here is second order in the mechanical amplitude:
//! the emitted flux scales as (peak velocity / c)^2, which is why laboratory
//! numbers come out so small.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::model::{HarmonicDrive, MirrorModel};
use crate::quadrature::{integrate, IntegrationResult, IntegrationSettings};

/// Pair-emission strength at the frequency pair `(omega, omega_p)`.
///
/// For frequency-independent real amplitudes this is constant; a perfectly
/// reflecting mirror gives 8, and a mirror with reflection amplitude `r`
/// gives `8 r^2`. Both frequencies must be positive.
pub fn gamma_pair(mirror: &MirrorModel, omega: f64, omega_p: f64) -> Result<f64> {
    if !(omega > 0.0) || !(omega_p > 0.0) {
        return Err(Error::Domain(format!(
            "pair strength needs positive frequencies, got ({omega}, {omega_p})"
        )));
    }
    let (r, s) = mirror.amplitudes(omega);
    let (r_p, s_p) = mirror.amplitudes(omega_p);
    Ok(4.0 * (1.0 - (s * s_p).re + (r * r_p).re))
}

/// Static sanity bound: unitarity of the scattering amplitudes caps the pair
/// strength at twice the perfect-mirror value.
pub const GAMMA_PAIR_MAX: f64 = 16.0;

/// Spectral density of the emitted photon flux, d(N/T)/d omega, at `omega`.
///
/// The spectrum lives on `0 < omega < omega_drive` (each photon's partner
/// carries the remaining frequency) and vanishes identically outside.
pub fn emission_spectrum_density(
    mirror: &MirrorModel,
    drive: &HarmonicDrive,
    constants: &PhysicalConstants,
    omega: f64,
) -> Result<f64> {
    if !omega.is_finite() {
        return Err(Error::Domain(format!(
            "frequency must be finite, got {omega}"
        )));
    }
    let big_omega = drive.omega;
    if omega <= 0.0 || omega >= big_omega {
        return Ok(0.0);
    }
    let omega_partner = big_omega - omega;
    let gamma = gamma_pair(mirror, omega, omega_partner)?;
    let c2 = constants.c * constants.c;
    Ok(
        drive.amplitude * drive.amplitude / c2 * omega * omega_partner * gamma
            / (2.0 * std::f64::consts::PI),
    )
}

/// Total photon flux N/T by adaptive integration of the spectrum.
pub fn flux(
    mirror: &MirrorModel,
    drive: &HarmonicDrive,
    constants: &PhysicalConstants,
    settings: &IntegrationSettings,
) -> Result<IntegrationResult> {
    let big_omega = drive.omega;
    let c2 = constants.c * constants.c;
    // The amplitude prefactor is pulled out of the integrand so that flux
    // scales exactly quadratically in the amplitude, independent of how the
    // adaptive refinement happens to branch.
    let prefactor = drive.amplitude * drive.amplitude / (2.0 * std::f64::consts::PI * c2);
    let shape = |omega: f64| -> f64 {
        if omega <= 0.0 || omega >= big_omega {
            return 0.0;
        }
        let omega_partner = big_omega - omega;
        match gamma_pair(mirror, omega, omega_partner) {
            Ok(g) => omega * omega_partner * g,
            Err(_) => f64::NAN,
        }
    };
    let raw = integrate(shape, 0.0, big_omega, settings)?;
    Ok(IntegrationResult {
        value: prefactor * raw.value,
        error_estimate: prefactor * raw.error_estimate,
        ..raw
    })
}

/// Closed-form flux for a perfectly reflecting mirror:
/// N/T = 2 a^2 Omega^3 / (3 pi c^2).
pub fn flux_perfect(drive: &HarmonicDrive, constants: &PhysicalConstants) -> f64 {
    let c2 = constants.c * constants.c;
    2.0 * drive.amplitude * drive.amplitude * drive.omega.powi(3)
        / (3.0 * std::f64::consts::PI * c2)
}

/// Photons a perfect mirror emits over the whole drive duration. Equal to
/// (Omega T / 6 pi) (v/c)^2 with v the peak mirror velocity.
pub fn photons_emitted_perfect(drive: &HarmonicDrive, constants: &PhysicalConstants) -> f64 {
    flux_perfect(drive, constants) * drive.duration
}

/// Radiated power for a given photon flux. Pairs share the drive frequency,
/// so the mean photon energy is exactly half of hbar * Omega.
pub fn radiated_power(flux: f64, drive: &HarmonicDrive, constants: &PhysicalConstants) -> f64 {
    0.5 * flux * constants.hbar * drive.omega
}
