//! Radiation from a vibrating two-mirror cavity.
//!
//! The cavity's Airy function enhances pair emission whenever one or both of
//! the pair frequencies sit on a cavity mode k pi / tau (tau is the one-way
//! light travel time). Resonance is sharpest when the drive frequency itself
//! is a multiple of the mode spacing, Omega tau = n pi: photon pairs then
//! land on mode pairs (k, k') with k + k' = n and the flux grows by the
//! finesse 1/rho relative to a single mirror.
//!
//! Three independent routes to the total flux are provided and are expected
//! to agree within a few parts in 1/finesse:
//!
//! * [`flux_quadrature`]: adaptive integration of the exact spectral density;
//! * [`flux_mode_sum`]: sum of per-mode-pair Lorentzian contributions;
//! * [`flux_resummed`]: closed form obtained by resumming the mode series.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::model::CavityConfig;
use crate::quadrature::{integrate, IntegrationSettings, PoleHint};

/// Both Airy factors at once, sharing the common denominator.
fn airy_pair_raw(x: f64, rho: f64) -> (f64, f64) {
    let sh = rho.sinh();
    let denom = sh * sh + x.sin().powi(2);
    (sh * rho.cosh() / denom, sh * x.cos() / denom)
}

fn check_airy_args(x: f64, rho: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain(format!(
            "mode argument must be finite, got {x}"
        )));
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!(
            "cavity loss parameter must be positive and finite, got {rho}"
        )));
    }
    Ok(())
}

/// Symmetric Airy factor: sinh(rho) cosh(rho) / (sinh^2 rho + sin^2 x).
///
/// Peaks at every multiple of pi with height ~ 1/rho and Lorentzian width
/// rho. Its average over a period is exactly 1.
pub fn airy_plus(x: f64, rho: f64) -> Result<f64> {
    check_airy_args(x, rho)?;
    Ok(airy_pair_raw(x, rho).0)
}

/// Antisymmetric Airy factor: sinh(rho) cos(x) / (sinh^2 rho + sin^2 x).
///
/// Same peaks, but signed: positive at even multiples of pi, negative at odd
/// ones, and zero at half-integer multiples.
pub fn airy_minus(x: f64, rho: f64) -> Result<f64> {
    check_airy_args(x, rho)?;
    Ok(airy_pair_raw(x, rho).1)
}

/// Truncated pole expansion of [`airy_plus`]: sum over modes k in
/// [-k_max, k_max] of rho / (rho^2 + (x - k pi)^2).
///
/// Converges to the closed form as k_max grows; the omitted tail is bounded
/// by 2 rho / (pi (k_max pi - |x|)) once k_max pi exceeds |x|.
pub fn airy_plus_polesum(x: f64, rho: f64, k_max: u32) -> Result<f64> {
    check_airy_args(x, rho)?;
    let mut sum = 0.0;
    for k in -(k_max as i64)..=(k_max as i64) {
        let dx = x - k as f64 * std::f64::consts::PI;
        sum += rho / (rho * rho + dx * dx);
    }
    Ok(sum)
}

/// Truncated pole expansion of [`airy_minus`]: same sum with alternating
/// signs (-1)^k.
pub fn airy_minus_polesum(x: f64, rho: f64, k_max: u32) -> Result<f64> {
    check_airy_args(x, rho)?;
    let mut sum = 0.0;
    for k in -(k_max as i64)..=(k_max as i64) {
        let dx = x - k as f64 * std::f64::consts::PI;
        let term = rho / (rho * rho + dx * dx);
        sum += if k.rem_euclid(2) == 0 { term } else { -term };
    }
    Ok(sum)
}

/// Pair-emission strengths of the two-mirror system at one frequency pair,
/// split into the pieces that couple to the mirror amplitudes.
///
/// With the dimensionless pair frequencies x = omega tau and x' = omega' tau,
/// the same-mirror strength is 4 (1 + A+(x) A+(x')) and the cross-mirror
/// strength is -8 A-(x) A-(x'). The flux from motion amplitudes (a1, a2) is
/// proportional to (a1^2 + a2^2) gamma_mirror + a1 a2 gamma_cross.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityKernel {
    pub gamma_mirror: f64,
    pub gamma_cross: f64,
}

impl CavityKernel {
    /// Contract the kernel with a pair of motion amplitudes.
    pub fn quadratic_form(&self, a1: f64, a2: f64) -> f64 {
        (a1 * a1 + a2 * a2) * self.gamma_mirror + a1 * a2 * self.gamma_cross
    }
}

/// Evaluate the cavity pair kernel at dimensionless pair frequencies
/// `x = omega tau` and `x_p = omega' tau`.
pub fn gamma_cavity(x: f64, x_p: f64, rho: f64) -> Result<CavityKernel> {
    check_airy_args(x, rho)?;
    check_airy_args(x_p, rho)?;
    let (ap, am) = airy_pair_raw(x, rho);
    let (ap_p, am_p) = airy_pair_raw(x_p, rho);
    Ok(CavityKernel {
        gamma_mirror: 4.0 * (1.0 + ap * ap_p),
        gamma_cross: -8.0 * am * am_p,
    })
}

/// Exact spectral density of the emitted flux, d(N/T)/d omega.
///
/// Nonzero only on 0 < omega < Omega. On a drive resonance Omega tau = n pi
/// both Airy factors of a pair peak simultaneously, so the exact density
/// rises as the product of two Lorentzians; slightly off resonance each line
/// reverts to a single Lorentzian of half-width rho / tau.
pub fn emission_spectrum_density(
    cavity: &CavityConfig,
    constants: &PhysicalConstants,
    omega: f64,
) -> Result<f64> {
    if !omega.is_finite() {
        return Err(Error::Domain(format!(
            "frequency must be finite, got {omega}"
        )));
    }
    if omega <= 0.0 || omega >= cavity.omega {
        return Ok(0.0);
    }
    let omega_partner = cavity.omega - omega;
    let kernel = gamma_cavity(omega * cavity.tau, omega_partner * cavity.tau, cavity.rho)?;
    let c2 = constants.c * constants.c;
    Ok(
        omega * omega_partner * kernel.quadratic_form(cavity.a1, cavity.a2)
            / (2.0 * std::f64::consts::PI * c2),
    )
}

/// Loss parameter below which the exact integrand is too spiky for reliable
/// adaptive integration; the mode sum and the resummed form stay accurate
/// down to arbitrarily small losses.
pub const MIN_RHO_FOR_QUADRATURE: f64 = 1e-6;

/// Total flux by adaptive integration of [`emission_spectrum_density`].
///
/// Pole hints are planted at every cavity mode and at every partner
/// reflection of a mode, which is what makes the narrow resonances visible
/// to the integrator. Refuses to run below [`MIN_RHO_FOR_QUADRATURE`].
pub fn flux_quadrature(
    cavity: &CavityConfig,
    constants: &PhysicalConstants,
    settings: &IntegrationSettings,
) -> Result<f64> {
    if cavity.rho < MIN_RHO_FOR_QUADRATURE {
        return Err(Error::UnsupportedRegime(format!(
            "adaptive integration is unreliable for rho = {:.3e} < {:.0e}; \
             use the mode sum or the resummed form",
            cavity.rho, MIN_RHO_FOR_QUADRATURE
        )));
    }
    let x_drive = cavity.x_drive();
    let rho = cavity.rho;

    // Dimensionless integration variable x = omega tau on (0, X).
    let mut hints = Vec::new();
    let mut k = 1.0;
    while k * std::f64::consts::PI < x_drive {
        let pole = k * std::f64::consts::PI;
        hints.push(PoleHint {
            center: pole,
            width: rho,
        });
        hints.push(PoleHint {
            center: x_drive - pole,
            width: rho,
        });
        k += 1.0;
    }
    let hinted = IntegrationSettings {
        pole_hints: hints,
        ..settings.clone()
    };

    // The two amplitude channels are integrated separately so the result is
    // an exact quadratic form in (a1, a2) regardless of how the adaptive
    // refinement branches.
    let mirror_integral = integrate(
        |x: f64| {
            if x <= 0.0 || x >= x_drive {
                return 0.0;
            }
            let (ap, _) = airy_pair_raw(x, rho);
            let (ap_p, _) = airy_pair_raw(x_drive - x, rho);
            x * (x_drive - x) * 4.0 * (1.0 + ap * ap_p)
        },
        0.0,
        x_drive,
        &hinted,
    )?;
    let cross_integral = integrate(
        |x: f64| {
            if x <= 0.0 || x >= x_drive {
                return 0.0;
            }
            let (_, am) = airy_pair_raw(x, rho);
            let (_, am_p) = airy_pair_raw(x_drive - x, rho);
            x * (x_drive - x) * (-8.0) * am * am_p
        },
        0.0,
        x_drive,
        &hinted,
    )?;

    let c2 = constants.c * constants.c;
    let tau3 = cavity.tau.powi(3);
    Ok(
        ((cavity.a1 * cavity.a1 + cavity.a2 * cavity.a2) * mirror_integral.value
            + cavity.a1 * cavity.a2 * cross_integral.value)
            / (2.0 * std::f64::consts::PI * c2 * tau3),
    )
}

/// Smooth part of the flux, from the frequency-flat piece of the pair
/// kernel: (a1^2 + a2^2) Omega^3 / (3 pi c^2).
pub fn nonresonant_flux(cavity: &CavityConfig, constants: &PhysicalConstants) -> f64 {
    let c2 = constants.c * constants.c;
    (cavity.a1 * cavity.a1 + cavity.a2 * cavity.a2) * cavity.omega.powi(3)
        / (3.0 * std::f64::consts::PI * c2)
}

/// Mean photon number stored in the mode pair `(k, k_p)` in steady state.
///
/// The pair only builds up appreciably when k pi + k' pi is within a few
/// cavity widths of Omega tau. Mode indices must be at least 1.
pub fn intracavity_photons(
    cavity: &CavityConfig,
    constants: &PhysicalConstants,
    k: u32,
    k_p: u32,
) -> Result<f64> {
    if k == 0 || k_p == 0 {
        return Err(Error::InvalidInput("cavity mode indices start at 1".into()));
    }
    let rho = cavity.rho;
    let omega_k = cavity.mode_frequency(k);
    let omega_kp = cavity.mode_frequency(k_p);
    let sign = if (k + k_p).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let coupling = cavity.a1 - sign * cavity.a2;
    let detuning = cavity.x_drive() - (k + k_p) as f64 * std::f64::consts::PI;
    let c2 = constants.c * constants.c;
    Ok(omega_k * omega_kp / c2 * 2.0 * coupling * coupling
        / (4.0 * rho * rho + detuning * detuning))
}

/// Flux carried by a single mode pair, tied to its stored photon number by
/// the cavity decay rate: flux = photons * 2 rho / tau.
pub fn mode_peak_flux(
    cavity: &CavityConfig,
    constants: &PhysicalConstants,
    k: u32,
    k_p: u32,
) -> Result<f64> {
    Ok(intracavity_photons(cavity, constants, k, k_p)? * (2.0 * cavity.rho / cavity.tau))
}

/// One resolved mode pair in a flux breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModePeak {
    pub k: u32,
    pub k_p: u32,
    /// Photon flux from this pair.
    pub flux: f64,
    /// Steady-state photons stored in this pair.
    pub intracavity: f64,
}

/// Total flux decomposed into a smooth part plus per-mode-pair peaks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxBreakdown {
    pub total: f64,
    pub nonresonant: f64,
    /// Ordered by increasing k + k_p, then increasing k.
    pub peaks: Vec<ModePeak>,
    /// Size of the first omitted shell, an upper-bound flavor check on the
    /// truncation.
    pub tail_estimate: f64,
}

/// Smallest shell cutoff that keeps every pair within 100 cavity widths of
/// the drive resonance, with a floor two shells past the drive frequency.
pub fn default_shell_cutoff(cavity: &CavityConfig) -> u32 {
    let x = cavity.x_drive();
    let base = (x / std::f64::consts::PI).ceil() as u32 + 2;
    let widened = ((x + 100.0 * cavity.rho) / std::f64::consts::PI).ceil() as u32;
    base.max(widened)
}

fn shell_flux(cavity: &CavityConfig, constants: &PhysicalConstants, shell: u32) -> Result<f64> {
    let mut sum = 0.0;
    for k in 1..shell {
        sum += mode_peak_flux(cavity, constants, k, shell - k)?;
    }
    Ok(sum)
}

/// Total flux as the nonresonant part plus the sum over mode pairs with
/// k + k' <= max_shell.
///
/// The shell sum must be truncated: mode weights grow with frequency while
/// the resonance denominator only decays quadratically, so the untruncated
/// series counts unphysical far-off-resonant pairs that the perturbative
/// treatment does not control. [`default_shell_cutoff`] keeps every pair
/// whose detuning is within 100 cavity widths. [`FluxBreakdown::tail_estimate`]
/// reports the first shell left out.
pub fn flux_mode_sum(
    cavity: &CavityConfig,
    constants: &PhysicalConstants,
    max_shell: u32,
) -> Result<FluxBreakdown> {
    if max_shell < 2 {
        return Err(Error::InvalidInput(
            "the shell cutoff must be at least 2 (lowest pair is k = k' = 1)".into(),
        ));
    }
    let nonresonant = nonresonant_flux(cavity, constants);
    let mut peaks = Vec::new();
    let mut total = nonresonant;
    for shell in 2..=max_shell {
        for k in 1..shell {
            let k_p = shell - k;
            let intracavity = intracavity_photons(cavity, constants, k, k_p)?;
            let flux = intracavity * (2.0 * cavity.rho / cavity.tau);
            total += flux;
            peaks.push(ModePeak {
                k,
                k_p,
                flux,
                intracavity,
            });
        }
    }
    let tail_estimate = shell_flux(cavity, constants, max_shell + 1)?;
    Ok(FluxBreakdown {
        total,
        nonresonant,
        peaks,
        tail_estimate,
    })
}

/// Total photons stored in the cavity, summed over the same shells as
/// [`flux_mode_sum`].
pub fn intracavity_total(
    cavity: &CavityConfig,
    constants: &PhysicalConstants,
    max_shell: u32,
) -> Result<f64> {
    Ok(flux_mode_sum(cavity, constants, max_shell)?
        .peaks
        .iter()
        .map(|p| p.intracavity)
        .sum())
}

/// Closed-form flux split into its three physical channels.
///
/// `translation` is the channel driven by the center-of-mass motion
/// (amplitude a1 + a2), resonant when Omega tau is an odd multiple of pi;
/// `elongation` is driven by the breathing motion (amplitude a1 - a2),
/// resonant at even multiples. Either can sit on resonance, never both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResummedFlux {
    pub nonresonant: f64,
    pub translation: f64,
    pub elongation: f64,
}

impl ResummedFlux {
    pub fn total(&self) -> f64 {
        self.nonresonant + self.translation + self.elongation
    }
}

/// Resummed closed form for the total flux.
///
/// Valid for drive frequencies at or above the first cavity resonance; below
/// it the analytic continuation can go negative, which is reported as an
/// unsupported regime rather than returned.
pub fn resummed_breakdown(
    cavity: &CavityConfig,
    constants: &PhysicalConstants,
) -> Result<ResummedFlux> {
    let c2 = constants.c * constants.c;
    let omega = cavity.omega;
    let tau = cavity.tau;
    let rho = cavity.rho;
    let x = cavity.x_drive();

    let nonresonant = nonresonant_flux(cavity, constants);
    let band = omega / (6.0 * std::f64::consts::PI * c2)
        * (omega * omega - (std::f64::consts::PI / tau).powi(2))
        * (2.0 * rho).sinh();

    // cosh(2 rho) + cos(X) = 2 (sinh^2 rho + cos^2 (X/2)) and
    // cosh(2 rho) - cos(X) = 2 (sinh^2 rho + sin^2 (X/2)); the right-hand
    // sides stay accurate when both rho and the distance to resonance are
    // tiny, where the naive difference of order-1 quantities loses digits.
    let sh2 = rho.sinh().powi(2);
    let denom_translation = 2.0 * (sh2 + (0.5 * x).cos().powi(2));
    let denom_elongation = 2.0 * (sh2 + (0.5 * x).sin().powi(2));

    let sum = cavity.a1 + cavity.a2;
    let diff = cavity.a1 - cavity.a2;
    let translation = band * sum * sum / denom_translation;
    let elongation = band * diff * diff / denom_elongation;

    let result = ResummedFlux {
        nonresonant,
        translation,
        elongation,
    };
    if result.total() < 0.0 {
        return Err(Error::UnsupportedRegime(format!(
            "resummed flux is negative (Omega tau = {x:.6} is below the first \
             cavity resonance where the closed form loses validity)"
        )));
    }
    Ok(result)
}

/// Total of [`resummed_breakdown`].
pub fn flux_resummed(cavity: &CavityConfig, constants: &PhysicalConstants) -> Result<f64> {
    Ok(resummed_breakdown(cavity, constants)?.total())
}

/// Headline laboratory estimate for a resonantly driven high-finesse cavity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderOfMagnitude {
    /// Photons leaving the cavity over the drive duration.
    pub photons_outside: f64,
    /// Photons stored inside in steady state.
    pub photons_inside: f64,
}

/// Resonant-drive estimate from peak mirror velocity `v`, drive frequency
/// `omega`, loss parameter `rho` and drive duration.
///
/// Emitted: N = (Omega T / 2 pi) (v/c)^2 / rho, stored: (v/c)^2 / rho^2,
/// both multiplied by `fresnel` if a diffraction correction factor is given.
pub fn order_of_magnitude(
    v: f64,
    omega: f64,
    rho: f64,
    duration: f64,
    fresnel: Option<f64>,
    constants: &PhysicalConstants,
) -> Result<OrderOfMagnitude> {
    for (name, value) in [
        ("v", v),
        ("omega", omega),
        ("rho", rho),
        ("duration", duration),
    ] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{name} must be positive and finite, got {value}"
            )));
        }
    }
    let factor = match fresnel {
        Some(f) if f > 0.0 && f.is_finite() => f,
        Some(f) => {
            return Err(Error::InvalidInput(format!(
                "fresnel correction must be positive and finite, got {f}"
            )))
        }
        None => 1.0,
    };
    let beta2 = (v / constants.c).powi(2);
    Ok(OrderOfMagnitude {
        photons_outside: omega * duration / (2.0 * std::f64::consts::PI) * beta2 / rho * factor,
        photons_inside: beta2 / (rho * rho) * factor,
    })
}
