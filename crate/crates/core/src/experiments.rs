//! Prepackaged numerical experiments: frequency scans, sampled emission
//! spectra and peak extraction.
//!
//! Everything in this module is deterministic. Sampling grids are built from
//! the input parameters alone (uniform base grid plus clusters of points
//! around every known resonance), so two runs with the same inputs produce
//! bitwise-identical tables.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cavity::{
    default_shell_cutoff, flux_mode_sum, flux_quadrature, flux_resummed, nonresonant_flux,
};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::model::{CavityConfig, HarmonicDrive, MirrorModel, RegimeWarning};
use crate::quadrature::IntegrationSettings;
use crate::single_mirror;

/// Current layout version stamped into every exported table.
pub const SCHEMA_VERSION: u32 = 1;

/// Which route computes the total flux in a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMethod {
    Resummed,
    ModeSum,
    Quadrature,
}

impl fmt::Display for ScanMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanMethod::Resummed => "resummed",
            ScanMethod::ModeSum => "mode-sum",
            ScanMethod::Quadrature => "quadrature",
        })
    }
}

impl FromStr for ScanMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "resummed" => Ok(ScanMethod::Resummed),
            "mode-sum" => Ok(ScanMethod::ModeSum),
            "quadrature" => Ok(ScanMethod::Quadrature),
            other => Err(Error::InvalidInput(format!(
                "unknown method '{other}' (expected resummed, mode-sum or quadrature)"
            ))),
        }
    }
}

/// Marker attached to a scan row whose parameters leave the window where
/// the perturbative treatment is comfortable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeFlag {
    /// Drive below the first cavity resonance; closed forms extrapolate here.
    BelowFirstResonance,
    /// Loss parameter too large for the narrow-resonance picture.
    HighLoss,
    /// Peak mirror velocity is no longer deep in the perturbative regime.
    FastDrive,
}

impl fmt::Display for RegimeFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegimeFlag::BelowFirstResonance => "below-first-resonance",
            RegimeFlag::HighLoss => "high-loss",
            RegimeFlag::FastDrive => "fast-drive",
        })
    }
}

/// Grid and tolerance knobs for [`scan_drive_frequency`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanPolicy {
    /// Uniform background grid size over the scanned interval.
    pub base_points: usize,
    /// Cluster density around each resonance.
    pub samples_per_fwhm: usize,
    /// Cluster span around each resonance, in resonance widths.
    pub window_fwhms: f64,
    /// Relative tolerance handed to the quadrature method.
    pub rel_tol: f64,
    pub method: ScanMethod,
}

impl Default for ScanPolicy {
    fn default() -> Self {
        ScanPolicy {
            base_points: 201,
            samples_per_fwhm: 24,
            window_fwhms: 6.0,
            rel_tol: 1e-9,
            method: ScanMethod::Resummed,
        }
    }
}

/// Physical inputs of a drive-frequency scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanParams {
    pub tau: f64,
    pub rho: f64,
    pub a1: f64,
    pub a2: f64,
    pub omega_min: f64,
    pub omega_max: f64,
}

/// One sampled drive frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    /// Drive frequency.
    pub omega: f64,
    /// Drive frequency in cavity units, omega * tau.
    pub x_drive: f64,
    /// Total flux by the requested method; absent if that method refused.
    pub flux_total: Option<f64>,
    pub flux_nonresonant: f64,
    /// Mode pair carrying the most flux at this drive frequency.
    pub dominant_k: Option<u32>,
    pub dominant_k_p: Option<u32>,
    pub regime_flags: Vec<RegimeFlag>,
    /// Why flux_total is absent, when it is.
    pub error: Option<String>,
}

/// Output of [`scan_drive_frequency`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub schema_version: u32,
    pub params: ScanParams,
    pub method: ScanMethod,
    pub rows: Vec<ScanRow>,
}

/// Merge-sort a grid, collapsing points closer than a fixed fraction of the
/// span; keeps cluster centers exactly where they were inserted.
fn finish_grid(mut grid: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    let tol = (hi - lo) * 1e-12;
    grid.retain(|&x| x >= lo && x <= hi);
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= tol);
    grid
}

/// Sweep the drive frequency across `[omega_min, omega_max]` at fixed cavity
/// geometry.
///
/// The grid is a uniform background plus a dense cluster around every drive
/// resonance omega = k pi / tau inside the window, sized by the resonance
/// width 4 rho / tau. Rows where the requested method refuses (for example
/// the resummed form below the first resonance) carry an error marker
/// instead of aborting the scan.
pub fn scan_drive_frequency(
    params: &ScanParams,
    policy: &ScanPolicy,
    constants: &PhysicalConstants,
) -> Result<ScanResult> {
    if !(params.omega_min > 0.0) || !(params.omega_max > params.omega_min) {
        return Err(Error::InvalidInput(format!(
            "scan needs 0 < omega_min < omega_max, got [{}, {}]",
            params.omega_min, params.omega_max
        )));
    }
    if policy.base_points < 2 {
        return Err(Error::InvalidInput(
            "scan needs at least 2 base grid points".into(),
        ));
    }
    // Validate the geometry once up front by building a probe configuration.
    CavityConfig::new(
        params.tau,
        params.rho,
        params.a1,
        params.a2,
        0.5 * (params.omega_min + params.omega_max),
        1.0,
    )?;

    let (lo, hi) = (params.omega_min, params.omega_max);
    let n = policy.base_points;
    let mut grid: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();

    let fwhm = 4.0 * params.rho / params.tau;
    let spacing = fwhm / policy.samples_per_fwhm as f64;
    let half_steps = (0.5 * policy.window_fwhms * policy.samples_per_fwhm as f64).ceil() as i64;
    let mut k = 1u32;
    loop {
        let center = k as f64 * std::f64::consts::PI / params.tau;
        if center > hi + 0.5 * policy.window_fwhms * fwhm {
            break;
        }
        for j in -half_steps..=half_steps {
            grid.push(center + j as f64 * spacing);
        }
        k += 1;
    }
    let grid = finish_grid(grid, lo, hi);

    let settings = IntegrationSettings {
        rel_tol: policy.rel_tol,
        ..Default::default()
    };
    let mut rows = Vec::with_capacity(grid.len());
    for &omega in &grid {
        rows.push(scan_row(params, policy, constants, &settings, omega));
    }
    Ok(ScanResult {
        schema_version: SCHEMA_VERSION,
        params: params.clone(),
        method: policy.method,
        rows,
    })
}

fn scan_row(
    params: &ScanParams,
    policy: &ScanPolicy,
    constants: &PhysicalConstants,
    settings: &IntegrationSettings,
    omega: f64,
) -> ScanRow {
    let x_drive = omega * params.tau;
    let cavity = match CavityConfig::new(params.tau, params.rho, params.a1, params.a2, omega, 1.0) {
        Ok(c) => c,
        Err(e) => {
            return ScanRow {
                omega,
                x_drive,
                flux_total: None,
                flux_nonresonant: f64::NAN,
                dominant_k: None,
                dominant_k_p: None,
                regime_flags: Vec::new(),
                error: Some(e.to_string()),
            }
        }
    };

    let mut regime_flags = Vec::new();
    if x_drive < std::f64::consts::PI {
        regime_flags.push(RegimeFlag::BelowFirstResonance);
    }
    for warning in cavity.regime_warnings(constants) {
        regime_flags.push(match warning {
            RegimeWarning::HighLoss { .. } => RegimeFlag::HighLoss,
            RegimeWarning::FastDrive { .. } => RegimeFlag::FastDrive,
        });
    }

    let breakdown = flux_mode_sum(&cavity, constants, default_shell_cutoff(&cavity)).ok();
    let dominant = breakdown.as_ref().and_then(|b| {
        b.peaks
            .iter()
            .max_by(|p, q| p.flux.total_cmp(&q.flux))
            .map(|p| (p.k, p.k_p))
    });

    let flux = match policy.method {
        ScanMethod::Resummed => flux_resummed(&cavity, constants),
        ScanMethod::ModeSum => breakdown
            .as_ref()
            .map(|b| b.total)
            .ok_or_else(|| Error::InvalidInput("mode sum unavailable".into())),
        ScanMethod::Quadrature => flux_quadrature(&cavity, constants, settings),
    };
    let (flux_total, error) = match flux {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    ScanRow {
        omega,
        x_drive,
        flux_total,
        flux_nonresonant: nonresonant_flux(&cavity, constants),
        dominant_k: dominant.map(|d| d.0),
        dominant_k_p: dominant.map(|d| d.1),
        regime_flags,
        error,
    }
}

/// Grid knobs for spectrum sampling and the peak detector threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumPolicy {
    /// Uniform background grid size over the emission band.
    pub points: usize,
    /// Cluster density across each resonance line.
    pub samples_per_fwhm: usize,
    /// Cluster span around each line, in line widths.
    pub window_fwhms: f64,
    /// Local maxima below this fraction of the global maximum are not peaks.
    pub peak_min_height_fraction: f64,
}

impl Default for SpectrumPolicy {
    fn default() -> Self {
        SpectrumPolicy {
            points: 801,
            samples_per_fwhm: 24,
            window_fwhms: 8.0,
            peak_min_height_fraction: 0.05,
        }
    }
}

/// What produced a spectrum table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum SpectrumParams {
    SingleMirror {
        amplitude: f64,
        omega: f64,
        /// Real reflection amplitude; absent means a perfect reflector.
        reflectivity: Option<f64>,
    },
    Cavity {
        tau: f64,
        rho: f64,
        a1: f64,
        a2: f64,
        omega: f64,
    },
}

/// One sampled spectrum point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub omega: f64,
    /// d(N/T)/d omega at this frequency.
    pub density: f64,
}

/// One detected emission line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakSummary {
    pub center: f64,
    pub height: f64,
    pub fwhm: f64,
}

/// Sampled emission spectrum with its detected peaks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub schema_version: u32,
    pub params: SpectrumParams,
    pub rows: Vec<SpectrumRow>,
    pub peaks: Vec<PeakSummary>,
}

/// Sample the single-mirror emission spectrum on a uniform grid over the
/// emission band and locate its (single) peak.
pub fn sample_single_mirror_spectrum(
    mirror: &MirrorModel,
    drive: &HarmonicDrive,
    constants: &PhysicalConstants,
    policy: &SpectrumPolicy,
) -> Result<SpectrumTable> {
    if policy.points < 16 {
        return Err(Error::InvalidInput(
            "spectrum sampling needs at least 16 grid points".into(),
        ));
    }
    let n = policy.points;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let omega = drive.omega * i as f64 / (n - 1) as f64;
        let density = single_mirror::emission_spectrum_density(mirror, drive, constants, omega)?;
        rows.push(SpectrumRow { omega, density });
    }
    let peaks = find_peaks(&rows, policy)?;
    let reflectivity = match mirror {
        MirrorModel::PerfectReflector => None,
        MirrorModel::ConstantReal { r, .. } => Some(*r),
        MirrorModel::Tabulated(_) => None,
    };
    Ok(SpectrumTable {
        schema_version: SCHEMA_VERSION,
        params: SpectrumParams::SingleMirror {
            amplitude: drive.amplitude,
            omega: drive.omega,
            reflectivity,
        },
        rows,
        peaks,
    })
}

/// Sample the cavity emission spectrum and locate its resonance lines.
///
/// In the high-finesse regime the spectrum is a smooth two-mirror background
/// plus one Lorentzian line of half-width rho / tau per populated cavity
/// mode. The table is built in exactly that representation: the flux of
/// every contributing mode pair (from the same shell sum as
/// [`flux_mode_sum`]) is split evenly between its two mode lines, and each
/// line is laid down as a unit-area Lorentzian. Frequencies at and beyond
/// the band edges get zero density. The grid is a uniform background plus a
/// dense cluster across every line, with the exact line centers included so
/// peak heights are sampled faithfully.
pub fn sample_cavity_spectrum(
    cavity: &CavityConfig,
    constants: &PhysicalConstants,
    policy: &SpectrumPolicy,
) -> Result<SpectrumTable> {
    if policy.points < 16 {
        return Err(Error::InvalidInput(
            "spectrum sampling needs at least 16 grid points".into(),
        ));
    }
    let omega_drive = cavity.omega;
    let x_drive = cavity.x_drive();
    let tau = cavity.tau;
    let c2 = constants.c * constants.c;

    // Line weights: flux of each pair whose both mode frequencies are inside
    // the band, half to each end, merged by mode index.
    let breakdown = flux_mode_sum(cavity, constants, default_shell_cutoff(cavity))?;
    let mut line_weights: BTreeMap<u32, f64> = BTreeMap::new();
    for peak in &breakdown.peaks {
        let kmax = peak.k.max(peak.k_p);
        if kmax as f64 * std::f64::consts::PI >= x_drive {
            continue;
        }
        *line_weights.entry(peak.k).or_insert(0.0) += 0.5 * peak.flux;
        *line_weights.entry(peak.k_p).or_insert(0.0) += 0.5 * peak.flux;
    }
    let gamma_line = cavity.rho / tau;
    let lines: Vec<(f64, f64)> = line_weights
        .iter()
        .map(|(&k, &w)| (k as f64 * std::f64::consts::PI / tau, w))
        .collect();

    let amp2 = cavity.a1 * cavity.a1 + cavity.a2 * cavity.a2;
    let density_at = |omega: f64| -> f64 {
        if omega <= 0.0 || omega >= omega_drive {
            return 0.0;
        }
        let mut d = 4.0 * amp2 * omega * (omega_drive - omega) / (2.0 * std::f64::consts::PI * c2);
        for &(center, weight) in &lines {
            let dx = omega - center;
            d += weight * gamma_line / (std::f64::consts::PI * (gamma_line * gamma_line + dx * dx));
        }
        d
    };

    let n = policy.points;
    let mut grid: Vec<f64> = (0..n)
        .map(|i| omega_drive * i as f64 / (n - 1) as f64)
        .collect();
    let fwhm = 2.0 * gamma_line;
    let spacing = fwhm / policy.samples_per_fwhm as f64;
    let half_steps = (0.5 * policy.window_fwhms * policy.samples_per_fwhm as f64).ceil() as i64;
    for &(center, _) in &lines {
        for j in -half_steps..=half_steps {
            grid.push(center + j as f64 * spacing);
        }
    }
    let grid = finish_grid(grid, 0.0, omega_drive);

    let rows: Vec<SpectrumRow> = grid
        .iter()
        .map(|&omega| SpectrumRow {
            omega,
            density: density_at(omega),
        })
        .collect();
    let peaks = find_peaks(&rows, policy)?;
    Ok(SpectrumTable {
        schema_version: SCHEMA_VERSION,
        params: SpectrumParams::Cavity {
            tau: cavity.tau,
            rho: cavity.rho,
            a1: cavity.a1,
            a2: cavity.a2,
            omega: omega_drive,
        },
        rows,
        peaks,
    })
}

/// Minimum number of samples strictly above half maximum for a peak to count
/// as resolved.
const MIN_SAMPLES_ABOVE_HALF: usize = 5;

/// Locate peaks in a sampled spectrum and measure their width at half
/// maximum by linear interpolation of the two half-height crossings.
///
/// A local maximum below `peak_min_height_fraction` of the global maximum is
/// ignored. A peak whose half-height region contains fewer than
/// [`MIN_SAMPLES_ABOVE_HALF`] samples, or whose crossings run off the table,
/// is reported as [`Error::PeakUnresolved`]: the grid is too coarse to trust
/// a width read off it.
pub fn find_peaks(rows: &[SpectrumRow], policy: &SpectrumPolicy) -> Result<Vec<PeakSummary>> {
    if rows.len() < 3 {
        return Ok(Vec::new());
    }
    let global_max = rows.iter().map(|r| r.density).fold(0.0f64, f64::max);
    if !(global_max > 0.0) {
        return Ok(Vec::new());
    }
    let threshold = policy.peak_min_height_fraction * global_max;

    let mut peaks = Vec::new();
    for i in 1..rows.len() - 1 {
        let d = rows[i].density;
        if !(d > rows[i - 1].density && d >= rows[i + 1].density && d >= threshold) {
            continue;
        }
        let half = 0.5 * d;

        let mut l = i;
        while l > 0 && rows[l - 1].density > half {
            l -= 1;
        }
        let mut r = i;
        while r + 1 < rows.len() && rows[r + 1].density > half {
            r += 1;
        }
        if l == 0 || r + 1 == rows.len() {
            return Err(Error::PeakUnresolved(format!(
                "half-height region of the peak near omega = {:.6e} runs off the table",
                rows[i].omega
            )));
        }
        if r - l + 1 < MIN_SAMPLES_ABOVE_HALF {
            return Err(Error::PeakUnresolved(format!(
                "only {} samples above half maximum near omega = {:.6e}; refine the grid",
                r - l + 1,
                rows[i].omega
            )));
        }
        let cross = |a: &SpectrumRow, b: &SpectrumRow| -> f64 {
            a.omega + (half - a.density) * (b.omega - a.omega) / (b.density - a.density)
        };
        let left = cross(&rows[l - 1], &rows[l]);
        let right = cross(&rows[r], &rows[r + 1]);
        peaks.push(PeakSummary {
            center: 0.5 * (left + right),
            height: d,
            fwhm: right - left,
        });
    }
    Ok(peaks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    const PI: f64 = std::f64::consts::PI;

    fn natural() -> PhysicalConstants {
        PhysicalConstants::natural()
    }

    fn lorentzian_rows(
        centers: &[(f64, f64)],
        gamma: f64,
        n: usize,
        span: f64,
    ) -> Vec<SpectrumRow> {
        (0..n)
            .map(|i| {
                let omega = span * i as f64 / (n - 1) as f64;
                let density = centers
                    .iter()
                    .map(|&(c, w)| w * gamma / (PI * (gamma * gamma + (omega - c) * (omega - c))))
                    .sum();
                SpectrumRow { omega, density }
            })
            .collect()
    }

    #[test]
    fn peak_finder_recovers_lorentzian_center_and_width() {
        let gamma = 1e-2;
        let rows = lorentzian_rows(&[(1.0, 1.0)], gamma, 40_001, 2.0);
        let peaks = find_peaks(&rows, &SpectrumPolicy::default()).unwrap();
        assert_eq!(peaks.len(), 1);
        let p = &peaks[0];
        assert_abs_diff_eq!(p.center, 1.0, epsilon = 2.0 * gamma / 10.0);
        assert_relative_eq!(p.fwhm, 2.0 * gamma, max_relative = 0.05);
    }

    #[test]
    fn peak_finder_separates_two_lines_and_skips_runts() {
        let gamma = 5e-3;
        let rows = lorentzian_rows(&[(0.5, 1.0), (1.5, 0.8), (1.0, 0.01)], gamma, 80_001, 2.0);
        let peaks = find_peaks(&rows, &SpectrumPolicy::default()).unwrap();
        // The 1% line sits below the default 5% threshold.
        assert_eq!(peaks.len(), 2);
        assert_abs_diff_eq!(peaks[0].center, 0.5, epsilon = 1e-3);
        assert_abs_diff_eq!(peaks[1].center, 1.5, epsilon = 1e-3);
        assert!(peaks[0].height > peaks[1].height);
    }

    #[test]
    fn coarse_grid_is_reported_not_mismeasured() {
        // 201 points over a span of 2 cannot resolve a 2e-4 wide line.
        let rows = lorentzian_rows(&[(1.0, 1.0)], 1e-4, 201, 2.0);
        let r = find_peaks(&rows, &SpectrumPolicy::default());
        assert!(matches!(r, Err(Error::PeakUnresolved(_))), "got {r:?}");
    }

    #[test]
    fn single_mirror_spectrum_integrates_to_the_closed_form_flux() {
        let mirror = MirrorModel::PerfectReflector;
        let drive = HarmonicDrive::new(0.1, 1.0, 1.0).unwrap();
        let c = natural();
        let table =
            sample_single_mirror_spectrum(&mirror, &drive, &c, &SpectrumPolicy::default()).unwrap();
        // Trapezoid over the sampled rows.
        let mut integral = 0.0;
        for w in table.rows.windows(2) {
            integral += 0.5 * (w[0].density + w[1].density) * (w[1].omega - w[0].omega);
        }
        let exact = single_mirror::flux_perfect(&drive, &c);
        assert_relative_eq!(integral, exact, max_relative = 1e-3);
        // One broad peak at the band center.
        assert_eq!(table.peaks.len(), 1);
        assert_abs_diff_eq!(table.peaks[0].center, 0.5, epsilon = 1e-3);
    }

    #[test]
    fn cavity_spectrum_on_the_fourth_resonance_shows_the_3_4_3_lines() {
        // Omega tau = 4 pi, elongation drive: populated pairs (1,3), (2,2),
        // (3,1) give line weights proportional to 3, 4, 3.
        let cavity = CavityConfig::new(1.0, 1e-3, 1e-3, 0.0, 4.0 * PI, 1.0).unwrap();
        let c = natural();
        let table = sample_cavity_spectrum(&cavity, &c, &SpectrumPolicy::default()).unwrap();
        assert_eq!(table.peaks.len(), 3);
        let heights: Vec<f64> = table.peaks.iter().map(|p| p.height).collect();
        assert_relative_eq!(heights[0] / heights[1], 0.75, max_relative = 0.02);
        assert_relative_eq!(heights[2] / heights[1], 0.75, max_relative = 0.02);
        for (p, expected) in table.peaks.iter().zip([PI, 2.0 * PI, 3.0 * PI]) {
            assert_abs_diff_eq!(p.center, expected, epsilon = 1e-3);
            assert_relative_eq!(p.fwhm, 2.0 * cavity.rho / cavity.tau, max_relative = 0.05);
        }
    }

    #[test]
    fn cavity_spectrum_total_matches_the_mode_sum_total() {
        let cavity = CavityConfig::new(1.0, 1e-3, 1e-3, 4e-4, 3.0 * PI, 1.0).unwrap();
        let c = natural();
        let table = sample_cavity_spectrum(&cavity, &c, &SpectrumPolicy::default()).unwrap();
        let mut integral = 0.0;
        for w in table.rows.windows(2) {
            integral += 0.5 * (w[0].density + w[1].density) * (w[1].omega - w[0].omega);
        }
        let total = flux_mode_sum(&cavity, &c, default_shell_cutoff(&cavity))
            .unwrap()
            .total;
        // The trapezoid sees the full Lorentzian cores; tails beyond the
        // band and pairs with an out-of-band partner account for the slack.
        assert_relative_eq!(integral, total, max_relative = 0.05);
    }

    #[test]
    fn scan_grid_covers_resonances_and_stays_sorted() {
        let params = ScanParams {
            tau: 1.0,
            rho: 1e-3,
            a1: 1e-3,
            a2: 0.0,
            omega_min: 0.5,
            omega_max: 10.0,
        };
        let c = natural();
        let scan = scan_drive_frequency(&params, &ScanPolicy::default(), &c).unwrap();
        assert_eq!(scan.schema_version, SCHEMA_VERSION);
        // Grid is strictly increasing and contains the resonance centers.
        for w in scan.rows.windows(2) {
            assert!(w[0].omega < w[1].omega);
        }
        for k in [1.0, 2.0, 3.0] {
            let center = k * PI;
            assert!(
                scan.rows.iter().any(|r| (r.omega - center).abs() < 1e-12),
                "missing cluster center at {center}"
            );
        }
        // Flux spikes at the second resonance relative to its neighborhood.
        let at = |omega: f64| {
            scan.rows
                .iter()
                .min_by(|a, b| (a.omega - omega).abs().total_cmp(&(b.omega - omega).abs()))
                .unwrap()
                .flux_total
                .unwrap()
        };
        assert!(at(2.0 * PI) > 100.0 * at(2.0 * PI + 0.5));
        // Rows below the first resonance are flagged.
        let low = scan.rows.iter().find(|r| r.x_drive < PI).unwrap();
        assert!(low.regime_flags.contains(&RegimeFlag::BelowFirstResonance));
    }

    #[test]
    fn scan_reports_dominant_pairs_on_resonance() {
        let params = ScanParams {
            tau: 1.0,
            rho: 1e-3,
            a1: 1e-3,
            a2: 0.0,
            omega_min: 5.0,
            omega_max: 7.0,
        };
        let c = natural();
        let policy = ScanPolicy {
            method: ScanMethod::ModeSum,
            ..Default::default()
        };
        let scan = scan_drive_frequency(&params, &policy, &c).unwrap();
        let on_res = scan
            .rows
            .iter()
            .find(|r| (r.omega - 2.0 * PI).abs() < 1e-12)
            .unwrap();
        // The dominant pair on the second resonance is (1,1).
        assert_eq!(on_res.dominant_k, Some(1));
        assert_eq!(on_res.dominant_k_p, Some(1));
        assert!(on_res.error.is_none());
    }

    #[test]
    fn scan_is_deterministic() {
        let params = ScanParams {
            tau: 2.0,
            rho: 1e-2,
            a1: 1e-3,
            a2: 5e-4,
            omega_min: 1.0,
            omega_max: 4.0,
        };
        let c = natural();
        let a = scan_drive_frequency(&params, &ScanPolicy::default(), &c).unwrap();
        let b = scan_drive_frequency(&params, &ScanPolicy::default(), &c).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scan_rejects_bad_windows() {
        let c = natural();
        let mut params = ScanParams {
            tau: 1.0,
            rho: 1e-3,
            a1: 1e-3,
            a2: 0.0,
            omega_min: 2.0,
            omega_max: 1.0,
        };
        assert!(scan_drive_frequency(&params, &ScanPolicy::default(), &c).is_err());
        params.omega_min = 0.0;
        assert!(scan_drive_frequency(&params, &ScanPolicy::default(), &c).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in [
            ScanMethod::Resummed,
            ScanMethod::ModeSum,
            ScanMethod::Quadrature,
        ] {
            assert_eq!(m.to_string().parse::<ScanMethod>().unwrap(), m);
        }
        assert!("simpson".parse::<ScanMethod>().is_err());
    }
}
