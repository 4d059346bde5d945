//! Domain model: mirror scattering amplitudes, harmonic drives, cavity
//! geometry, thermal environment, and the dimensionless reduction used by the
//! numeric internals.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// Samples with |r|^2 + |s|^2 farther than this from 1 are rejected.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Peak mirror velocity above this fraction of c degrades the perturbative
/// treatment, which is accurate to relative order (v/c)^2.
pub const PERTURBATIVE_VELOCITY_RATIO: f64 = 1e-3;

/// Loss parameter above this value strains the high-finesse approximations.
pub const HIGH_LOSS_RHO: f64 = 0.1;

fn require_finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidInput(format!(
            "{name} must be finite, got {v}"
        )))
    }
}

fn require_positive(name: &str, v: f64) -> Result<f64> {
    require_finite(name, v)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidInput(format!("{name} must be > 0, got {v}")))
    }
}

/// Non-fatal advisory attached to parameter sets that leave the regime in
/// which the model is quantitatively reliable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RegimeWarning {
    /// Peak mirror velocity exceeds `PERTURBATIVE_VELOCITY_RATIO` of c.
    FastDrive { v_over_c: f64 },
    /// Loss parameter exceeds `HIGH_LOSS_RHO`.
    HighLoss { rho: f64 },
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeWarning::FastDrive { v_over_c } => write!(
                f,
                "peak mirror velocity v/c = {v_over_c:.3e} exceeds {PERTURBATIVE_VELOCITY_RATIO:.0e}; \
                 results carry relative errors of order (v/c)^2"
            ),
            RegimeWarning::HighLoss { rho } => write!(
                f,
                "loss parameter rho = {rho:.3e} exceeds {HIGH_LOSS_RHO}; \
                 high-finesse approximations degrade"
            ),
        }
    }
}

/// Frequency-dependent scattering amplitudes (r[w], s[w]) of one lossless
/// mirror: r is the reflection amplitude, s the transmission amplitude, with
/// |r|^2 + |s|^2 = 1 at every frequency.
#[derive(Debug, Clone, PartialEq)]
pub enum MirrorModel {
    /// r = -1, s = 0 at all frequencies.
    PerfectReflector,
    /// Frequency-independent real amplitudes.
    ConstantReal { r: f64, s: f64 },
    /// Sampled complex amplitudes, linearly interpolated.
    Tabulated(ReflectivityTable),
}

impl MirrorModel {
    /// Constant real amplitudes, validated against |r|^2 + |s|^2 = 1.
    pub fn constant_real(r: f64, s: f64) -> Result<Self> {
        require_finite("r", r)?;
        require_finite("s", s)?;
        let norm = r * r + s * s;
        if (norm - 1.0).abs() > UNITARITY_TOL {
            return Err(Error::InvalidInput(format!(
                "mirror amplitudes must satisfy r^2 + s^2 = 1 within {UNITARITY_TOL:e}; \
                 got r = {r}, s = {s} (norm {norm})"
            )));
        }
        Ok(MirrorModel::ConstantReal { r, s })
    }

    /// Real reflection amplitude r with the transmission fixed by
    /// losslessness, s = sqrt(1 - r^2). Requires |r| <= 1.
    pub fn from_reflectivity(r: f64) -> Result<Self> {
        require_finite("r", r)?;
        if r.abs() > 1.0 {
            return Err(Error::InvalidInput(format!(
                "reflection amplitude must satisfy |r| <= 1, got {r}"
            )));
        }
        Ok(MirrorModel::ConstantReal {
            r,
            s: (1.0 - r * r).sqrt(),
        })
    }

    /// Amplitudes at a given frequency.
    pub fn amplitudes(&self, omega: f64) -> (Complex64, Complex64) {
        match self {
            MirrorModel::PerfectReflector => (Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)),
            MirrorModel::ConstantReal { r, s } => {
                (Complex64::new(*r, 0.0), Complex64::new(*s, 0.0))
            }
            MirrorModel::Tabulated(table) => table.sample(omega),
        }
    }
}

/// Tabulated complex amplitudes on an ascending frequency grid.
///
/// Queries between nodes interpolate (r, s) linearly and renormalize so the
/// interpolant stays lossless; queries outside the grid clamp to the nearest
/// end point. Consecutive samples must not be nearly antipodal, otherwise the
/// interpolant would pass close to zero where renormalization is ill defined;
/// construction rejects jumps larger than sqrt(2) in the joint (r, s) vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectivityTable {
    omega: Vec<f64>,
    r: Vec<Complex64>,
    s: Vec<Complex64>,
}

impl ReflectivityTable {
    pub fn new(omega: Vec<f64>, r: Vec<Complex64>, s: Vec<Complex64>) -> Result<Self> {
        if omega.is_empty() || omega.len() != r.len() || omega.len() != s.len() {
            return Err(Error::InvalidInput(format!(
                "reflectivity table needs equal, nonzero column lengths; got {} / {} / {}",
                omega.len(),
                r.len(),
                s.len()
            )));
        }
        for (i, &w) in omega.iter().enumerate() {
            require_positive("table frequency", w)?;
            if i > 0 && w <= omega[i - 1] {
                return Err(Error::InvalidInput(
                    "table frequencies must be strictly ascending".into(),
                ));
            }
            let norm = r[i].norm_sqr() + s[i].norm_sqr();
            if (norm - 1.0).abs() > UNITARITY_TOL {
                return Err(Error::InvalidInput(format!(
                    "table row {i} violates |r|^2 + |s|^2 = 1 (norm {norm})"
                )));
            }
            if i > 0 {
                let jump = ((r[i] - r[i - 1]).norm_sqr() + (s[i] - s[i - 1]).norm_sqr()).sqrt();
                if jump > std::f64::consts::SQRT_2 {
                    return Err(Error::InvalidInput(format!(
                        "table rows {} and {i} are nearly antipodal (jump {jump:.3}); \
                         refine the grid",
                        i - 1
                    )));
                }
            }
        }
        Ok(ReflectivityTable { omega, r, s })
    }

    /// Interpolated amplitudes, renormalized to the unit sphere.
    pub fn sample(&self, omega: f64) -> (Complex64, Complex64) {
        let n = self.omega.len();
        if omega <= self.omega[0] {
            return (self.r[0], self.s[0]);
        }
        if omega >= self.omega[n - 1] {
            return (self.r[n - 1], self.s[n - 1]);
        }
        let i = match self.omega.binary_search_by(|probe| probe.total_cmp(&omega)) {
            Ok(exact) => return (self.r[exact], self.s[exact]),
            Err(insertion) => insertion,
        };
        let t = (omega - self.omega[i - 1]) / (self.omega[i] - self.omega[i - 1]);
        let r = self.r[i - 1] * (1.0 - t) + self.r[i] * t;
        let s = self.s[i - 1] * (1.0 - t) + self.s[i] * t;
        let norm = (r.norm_sqr() + s.norm_sqr()).sqrt();
        (r / norm, s / norm)
    }
}

/// Harmonic mirror motion q(t) = 2 a cos(Omega t) observed for a duration T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicDrive {
    /// Motion amplitude a, m (the peak excursion is 2a).
    pub amplitude: f64,
    /// Drive angular frequency Omega, rad/s.
    pub omega: f64,
    /// Observation time T, s.
    pub duration: f64,
}

impl HarmonicDrive {
    pub fn new(amplitude: f64, omega: f64, duration: f64) -> Result<Self> {
        require_finite("amplitude", amplitude)?;
        if amplitude < 0.0 {
            return Err(Error::InvalidInput(format!(
                "amplitude must be >= 0, got {amplitude}"
            )));
        }
        require_positive("omega", omega)?;
        require_positive("duration", duration)?;
        Ok(HarmonicDrive {
            amplitude,
            omega,
            duration,
        })
    }

    /// Peak mirror velocity v = 2 a Omega, m/s.
    pub fn peak_velocity(&self) -> f64 {
        2.0 * self.amplitude * self.omega
    }

    pub fn regime_warnings(&self, constants: &PhysicalConstants) -> Vec<RegimeWarning> {
        let v_over_c = self.peak_velocity() / constants.c;
        if v_over_c > PERTURBATIVE_VELOCITY_RATIO {
            vec![RegimeWarning::FastDrive { v_over_c }]
        } else {
            vec![]
        }
    }
}

/// A linear two-mirror cavity whose mirrors vibrate harmonically at a common
/// frequency Omega with amplitudes a1 and a2 (signed, so the relative phase
/// of the two motions is 0 or pi: a1 = a2 is a global translation, a1 = -a2 a
/// pure elongation).
///
/// tau is the one-way photon flight time (cavity length / c); the cavity
/// modes sit at k pi / tau. rho is the loss parameter: the product of the
/// reflection amplitudes is r1 r2 = e^(-2 rho) and the finesse is 1/rho.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityConfig {
    /// One-way flight time tau, s.
    pub tau: f64,
    /// Loss parameter rho (dimensionless, > 0).
    pub rho: f64,
    /// Drive amplitude of mirror 1, m (signed).
    pub a1: f64,
    /// Drive amplitude of mirror 2, m (signed).
    pub a2: f64,
    /// Drive angular frequency Omega, rad/s.
    pub omega: f64,
    /// Observation time T, s.
    pub duration: f64,
}

impl CavityConfig {
    pub fn new(tau: f64, rho: f64, a1: f64, a2: f64, omega: f64, duration: f64) -> Result<Self> {
        require_positive("tau", tau)?;
        require_positive("rho", rho)?;
        require_finite("a1", a1)?;
        require_finite("a2", a2)?;
        require_positive("omega", omega)?;
        require_positive("duration", duration)?;
        Ok(CavityConfig {
            tau,
            rho,
            a1,
            a2,
            omega,
            duration,
        })
    }

    /// Dimensionless drive frequency x = Omega tau.
    pub fn x_drive(&self) -> f64 {
        self.omega * self.tau
    }

    /// Drive frequency in units of the mode spacing: Omega tau / pi.
    /// Integer values are the cavity resonances.
    pub fn resonance_order(&self) -> f64 {
        self.x_drive() / std::f64::consts::PI
    }

    /// Product of the two reflection amplitudes, e^(-2 rho).
    pub fn reflectivity_product(&self) -> f64 {
        (-2.0 * self.rho).exp()
    }

    /// Cavity finesse, 1/rho.
    pub fn finesse(&self) -> f64 {
        1.0 / self.rho
    }

    /// Frequency of cavity mode k, k pi / tau (rad/s).
    pub fn mode_frequency(&self, k: u32) -> f64 {
        f64::from(k) * std::f64::consts::PI / self.tau
    }

    pub fn regime_warnings(&self, constants: &PhysicalConstants) -> Vec<RegimeWarning> {
        let mut warnings = Vec::new();
        let v_max = 2.0 * self.omega * self.a1.abs().max(self.a2.abs());
        let v_over_c = v_max / constants.c;
        if v_over_c > PERTURBATIVE_VELOCITY_RATIO {
            warnings.push(RegimeWarning::FastDrive { v_over_c });
        }
        if self.rho > HIGH_LOSS_RHO {
            warnings.push(RegimeWarning::HighLoss { rho: self.rho });
        }
        warnings
    }
}

/// Cavity parameters reduced to dimensionless form: x_drive = Omega tau,
/// alpha_i = a_i / (c tau), n_cycles = Omega T / 2 pi. The time scale tau is
/// deliberately not stored; supply it again to [`redimensionalize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessCavity {
    pub x_drive: f64,
    pub rho: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub n_cycles: f64,
}

pub fn nondimensionalize(
    cavity: &CavityConfig,
    constants: &PhysicalConstants,
) -> DimensionlessCavity {
    DimensionlessCavity {
        x_drive: cavity.omega * cavity.tau,
        rho: cavity.rho,
        alpha1: cavity.a1 / (constants.c * cavity.tau),
        alpha2: cavity.a2 / (constants.c * cavity.tau),
        n_cycles: cavity.omega * cavity.duration / (2.0 * std::f64::consts::PI),
    }
}

pub fn redimensionalize(
    reduced: &DimensionlessCavity,
    tau: f64,
    constants: &PhysicalConstants,
) -> Result<CavityConfig> {
    require_positive("tau", tau)?;
    let omega = reduced.x_drive / tau;
    CavityConfig::new(
        tau,
        reduced.rho,
        reduced.alpha1 * constants.c * tau,
        reduced.alpha2 * constants.c * tau,
        omega,
        reduced.n_cycles * 2.0 * std::f64::consts::PI / omega,
    )
}

/// Thermal environment at temperature theta (K). theta = 0 is exact vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalContext {
    pub theta: f64,
}

impl ThermalContext {
    pub fn new(theta: f64) -> Result<Self> {
        require_finite("theta", theta)?;
        if theta < 0.0 {
            return Err(Error::InvalidInput(format!(
                "temperature must be >= 0, got {theta}"
            )));
        }
        Ok(ThermalContext { theta })
    }

    /// Mean thermal photon number per mode at angular frequency omega:
    /// 1 / (exp(hbar omega / k_B theta) - 1).
    pub fn occupation(&self, omega: f64, constants: &PhysicalConstants) -> Result<f64> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::Domain(format!(
                "thermal occupation needs omega > 0, got {omega}"
            )));
        }
        if self.theta == 0.0 {
            return Ok(0.0);
        }
        let x = constants.hbar * omega / (constants.k_b * self.theta);
        Ok(1.0 / x.exp_m1())
    }

    /// True when thermal photons do not swamp pair creation at omega, i.e.
    /// occupation < 1. The boundary sits at hbar omega = k_B theta ln 2.
    pub fn vacuum_ok(&self, omega: f64, constants: &PhysicalConstants) -> Result<bool> {
        Ok(self.occupation(omega, constants)? < 1.0)
    }
}

/// Free-function form of [`ThermalContext::occupation`].
pub fn thermal_occupation(theta: f64, omega: f64, constants: &PhysicalConstants) -> Result<f64> {
    ThermalContext::new(theta)?.occupation(omega, constants)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_real_mirror_enforces_losslessness() {
        assert!(MirrorModel::constant_real(0.8, 0.6).is_ok());
        assert!(MirrorModel::constant_real(0.8, 0.7).is_err());
        assert!(MirrorModel::constant_real(f64::NAN, 0.0).is_err());
        let m = MirrorModel::from_reflectivity(-1.0).unwrap();
        assert_eq!(m, MirrorModel::ConstantReal { r: -1.0, s: 0.0 });
        assert!(MirrorModel::from_reflectivity(1.2).is_err());
    }

    #[test]
    fn tabulated_mirror_interpolates_and_clamps() {
        let table = ReflectivityTable::new(
            vec![1.0, 2.0],
            vec![Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
        )
        .unwrap();
        // Midpoint of the two unit reflection amplitudes, renormalized.
        let (r, s) = table.sample(1.5);
        assert_relative_eq!(r.norm_sqr() + s.norm_sqr(), 1.0, max_relative = 1e-14);
        // Clamped outside the grid.
        assert_eq!(table.sample(0.5), table.sample(1.0));
        assert_eq!(table.sample(9.0), table.sample(2.0));
    }

    #[test]
    fn tabulated_mirror_rejects_bad_tables() {
        let unit_r = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        // Non-ascending frequency grid.
        assert!(ReflectivityTable::new(vec![2.0, 1.0], vec![unit_r; 2], vec![zero; 2]).is_err());
        // Unitarity violation.
        assert!(ReflectivityTable::new(
            vec![1.0, 2.0],
            vec![unit_r, Complex64::new(0.5, 0.0)],
            vec![zero, zero],
        )
        .is_err());
        // Antipodal neighbors.
        assert!(
            ReflectivityTable::new(vec![1.0, 2.0], vec![unit_r, -unit_r], vec![zero, zero],)
                .is_err()
        );
    }

    #[test]
    fn drive_validation_and_velocity() {
        let d = HarmonicDrive::new(1e-9, 2.0e9, 1.0).unwrap();
        assert_relative_eq!(d.peak_velocity(), 4.0, max_relative = 1e-15);
        assert!(HarmonicDrive::new(-1.0, 1.0, 1.0).is_err());
        assert!(HarmonicDrive::new(1.0, 0.0, 1.0).is_err());
        assert!(HarmonicDrive::new(1.0, 1.0, -3.0).is_err());
    }

    #[test]
    fn fast_drive_warning_fires_above_threshold() {
        let consts = PhysicalConstants::si();
        let quiet = HarmonicDrive::new(1e-12, 1e9, 1.0).unwrap();
        assert!(quiet.regime_warnings(&consts).is_empty());
        // v = 2 a Omega = 6e5 m/s, v/c = 2e-3.
        let fast = HarmonicDrive::new(3e-4, 1e9, 1.0).unwrap();
        let warnings = fast.regime_warnings(&consts);
        assert_eq!(warnings.len(), 1);
        match warnings[0] {
            RegimeWarning::FastDrive { v_over_c } => {
                assert_relative_eq!(v_over_c, 6e5 / 299_792_458.0, max_relative = 1e-12)
            }
            _ => panic!("expected FastDrive"),
        }
    }

    #[test]
    fn cavity_accessors() {
        let consts = PhysicalConstants::natural();
        let cav = CavityConfig::new(2.0, 1e-2, 1e-4, -1e-4, std::f64::consts::PI, 1.0).unwrap();
        assert_relative_eq!(cav.x_drive(), 2.0 * std::f64::consts::PI);
        assert_relative_eq!(cav.resonance_order(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(cav.reflectivity_product(), (-0.02f64).exp());
        assert_relative_eq!(cav.finesse(), 100.0);
        assert_relative_eq!(cav.mode_frequency(3), 1.5 * std::f64::consts::PI);
        assert!(cav.regime_warnings(&consts).is_empty());

        let lossy = CavityConfig::new(2.0, 0.5, 0.1, 0.0, 1.0, 1.0).unwrap();
        assert!(lossy
            .regime_warnings(&consts)
            .iter()
            .any(|w| matches!(w, RegimeWarning::HighLoss { .. })));
        assert!(CavityConfig::new(0.0, 1e-2, 0.1, 0.0, 1.0, 1.0).is_err());
        assert!(CavityConfig::new(1.0, -1e-2, 0.1, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn nondimensionalize_round_trips() {
        let consts = PhysicalConstants::si();
        let cav = CavityConfig::new(5e-10, 1e-3, 2e-11, -3e-11, 6.0e9, 2.5).unwrap();
        let reduced = nondimensionalize(&cav, &consts);
        assert_relative_eq!(reduced.x_drive, 3.0, max_relative = 1e-15);
        let back = redimensionalize(&reduced, cav.tau, &consts).unwrap();
        assert_relative_eq!(back.tau, cav.tau, max_relative = 1e-15);
        assert_relative_eq!(back.rho, cav.rho, max_relative = 1e-15);
        assert_relative_eq!(back.a1, cav.a1, max_relative = 1e-15);
        assert_relative_eq!(back.a2, cav.a2, max_relative = 1e-15);
        assert_relative_eq!(back.omega, cav.omega, max_relative = 1e-15);
        assert_relative_eq!(back.duration, cav.duration, max_relative = 1e-15);
    }

    #[test]
    fn thermal_occupation_matches_bose_factor() {
        let consts = PhysicalConstants::si();
        let ctx = ThermalContext::new(0.030).unwrap();
        let omega = 2.0 * std::f64::consts::PI * 1.0e9;
        // Direct evaluation: x = h f / (k_B theta) = 1.5997477, 1/(e^x - 1).
        let n = ctx.occupation(omega, &consts).unwrap();
        assert_relative_eq!(n, 0.2530503394478342, max_relative = 1e-12);
        assert!(ctx.vacuum_ok(omega, &consts).unwrap());
    }

    #[test]
    fn thermal_occupation_edges() {
        let consts = PhysicalConstants::si();
        let vacuum = ThermalContext::new(0.0).unwrap();
        assert_eq!(vacuum.occupation(1e9, &consts).unwrap(), 0.0);
        let warm = ThermalContext::new(300.0).unwrap();
        assert!(warm.occupation(0.0, &consts).is_err());
        assert!(warm.occupation(-1.0, &consts).is_err());
        assert!(ThermalContext::new(-0.1).is_err());
        // Deep quantum limit underflows cleanly to zero occupation.
        let cold = ThermalContext::new(1e-6).unwrap();
        assert_eq!(cold.occupation(1e15, &consts).unwrap(), 0.0);
    }

    #[test]
    fn thermal_monotonicity() {
        let consts = PhysicalConstants::si();
        let ctx = ThermalContext::new(0.1).unwrap();
        let mut previous = f64::INFINITY;
        for exp in 0..12 {
            let omega = 1e7 * 10f64.powi(exp / 2) * if exp % 2 == 0 { 1.0 } else { 3.0 };
            let n = ctx.occupation(omega, &consts).unwrap();
            assert!(n < previous, "occupation must decrease with omega");
            previous = n;
        }
    }
}
