//! Command-line front end for the motrad library.
//!
//! Scalar results are printed as `key value` lines in scientific notation;
//! tables (spectra, scans) are written as CSV or JSON. Identical argument
//! vectors produce byte-identical output: nothing here depends on time,
//! environment or randomness. Regime warnings and errors go to standard
//! error, so data pipelines stay clean.
//!
//! Exit codes: 0 success, 2 rejected input, 3 computation failure.

use std::fmt::Display;
use std::fmt::Write as _;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use motrad::cavity::{
    default_shell_cutoff, flux_mode_sum, flux_quadrature, flux_resummed, intracavity_photons,
    intracavity_total, order_of_magnitude, resummed_breakdown, FluxBreakdown,
};
use motrad::experiments::{
    sample_cavity_spectrum, sample_single_mirror_spectrum, scan_drive_frequency, ScanMethod,
    ScanParams, ScanPolicy, ScanResult, SpectrumPolicy, SpectrumTable,
};
use motrad::export::{
    write_scan, write_scan_to_path, write_spectrum, write_spectrum_to_path, ExportFormat,
};
use motrad::model::{CavityConfig, HarmonicDrive, MirrorModel, RegimeWarning, ThermalContext};
use motrad::quadrature::IntegrationSettings;
use motrad::single_mirror;
use motrad::{Error, PhysicalConstants, Result};

#[derive(Parser)]
#[command(
    name = "motrad",
    version,
    about = "Photon fluxes and spectra from vibrating mirrors and cavities"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Unit system: SI (metres, seconds, rad/s) or dimensionless (c = 1).
    #[arg(long, value_enum, global = true, default_value_t = UnitsArg::Si)]
    units: UnitsArg,

    /// Relative tolerance for adaptive integration.
    #[arg(long, global = true, env = "MOTRAD_REL_TOL", default_value_t = 1e-9)]
    rel_tol: f64,

    /// Significant digits in scalar output lines (tables always carry full
    /// precision).
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=17))]
    digits: u32,

    /// Table output format.
    #[arg(long, value_enum, global = true, default_value_t = FormatArg::Csv)]
    format: FormatArg,

    /// Write results to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UnitsArg {
    Si,
    Dimensionless,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for ExportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => ExportFormat::Csv,
            FormatArg::Json => ExportFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Resummed,
    ModeSum,
    Quadrature,
}

impl From<MethodArg> for ScanMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Resummed => ScanMethod::Resummed,
            MethodArg::ModeSum => ScanMethod::ModeSum,
            MethodArg::Quadrature => ScanMethod::Quadrature,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MirrorArg {
    /// Perfectly reflecting at all frequencies.
    Perfect,
    /// Frequency-independent real amplitudes r and s.
    Constant,
}

#[derive(Args)]
struct MirrorArgs {
    /// Mirror model.
    #[arg(long, value_enum, default_value_t = MirrorArg::Perfect)]
    mirror: MirrorArg,

    /// Reflection amplitude for --mirror constant.
    #[arg(long, requires = "s", allow_hyphen_values = true)]
    r: Option<f64>,

    /// Transmission amplitude for --mirror constant.
    #[arg(long, requires = "r", allow_hyphen_values = true)]
    s: Option<f64>,
}

impl MirrorArgs {
    fn build(&self) -> Result<MirrorModel> {
        match self.mirror {
            MirrorArg::Perfect => Ok(MirrorModel::PerfectReflector),
            MirrorArg::Constant => {
                let (r, s) = match (self.r, self.s) {
                    (Some(r), Some(s)) => (r, s),
                    _ => {
                        return Err(Error::InvalidInput(
                            "--mirror constant needs both --r and --s".into(),
                        ))
                    }
                };
                if !r.is_finite() || !s.is_finite() || r * r + s * s > 1.0 + 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "mirror amplitudes must satisfy r^2 + s^2 <= 1, got r={r}, s={s}"
                    )));
                }
                Ok(MirrorModel::ConstantReal { r, s })
            }
        }
    }
}

/// Geometry and drive of the two-mirror cavity, shared by the cavity
/// subcommands.
#[derive(Args)]
struct CavityArgs {
    /// One-way light flight time between the mirrors.
    #[arg(long, default_value_t = 1.0)]
    tau: f64,

    /// Loss parameter; the finesse is 1/rho.
    #[arg(long)]
    rho: f64,

    /// Vibration amplitude of the first mirror.
    #[arg(long, allow_hyphen_values = true)]
    a1: f64,

    /// Vibration amplitude of the second mirror.
    #[arg(long, allow_hyphen_values = true)]
    a2: f64,

    /// Drive angular frequency.
    #[arg(long)]
    omega: f64,

    /// Observation time.
    #[arg(long, default_value_t = 1.0)]
    time: f64,
}

impl CavityArgs {
    fn build(&self) -> Result<CavityConfig> {
        CavityConfig::new(self.tau, self.rho, self.a1, self.a2, self.omega, self.time)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Photon flux, photon count and radiated power of one vibrating mirror.
    FluxSingle(FluxSingleArgs),
    /// Emission spectrum of one vibrating mirror.
    SpectrumSingle(SpectrumSingleArgs),
    /// Photon flux from a vibrating cavity, by the method of your choice.
    FluxCavity(FluxCavityArgs),
    /// Steady-state photon number stored inside the cavity.
    Intracavity(IntracavityArgs),
    /// Emission spectrum of a vibrating cavity, with resonance lines located.
    SpectrumCavity(SpectrumCavityArgs),
    /// Sweep the drive frequency and tabulate fluxes per method.
    Scan(ScanArgs),
    /// Laboratory order-of-magnitude estimate (SI units only).
    Estimate(EstimateArgs),
}

#[derive(Args)]
struct FluxSingleArgs {
    /// Vibration amplitude.
    #[arg(long = "a")]
    amplitude: f64,

    /// Drive angular frequency.
    #[arg(long)]
    omega: f64,

    /// Observation time.
    #[arg(long, default_value_t = 1.0)]
    time: f64,

    #[command(flatten)]
    mirror: MirrorArgs,
}

#[derive(Args)]
struct SpectrumSingleArgs {
    #[arg(long = "a")]
    amplitude: f64,

    #[arg(long)]
    omega: f64,

    #[arg(long, default_value_t = 1.0)]
    time: f64,

    #[command(flatten)]
    mirror: MirrorArgs,

    /// Grid points across the emission band.
    #[arg(long, default_value_t = 801)]
    points: usize,
}

#[derive(Args)]
struct FluxCavityArgs {
    #[command(flatten)]
    cavity: CavityArgs,

    #[arg(long, value_enum, default_value_t = MethodArg::Resummed)]
    method: MethodArg,

    /// Highest k + k' shell in the mode sum (default: auto from geometry).
    #[arg(long)]
    k_max: Option<u32>,

    /// Also run the other methods and report the cross-check spread.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct IntracavityArgs {
    #[command(flatten)]
    cavity: CavityArgs,

    /// First mode index; give --kp too for a single pair.
    #[arg(long, requires = "kp")]
    k: Option<u32>,

    /// Second mode index.
    #[arg(long, requires = "k")]
    kp: Option<u32>,

    /// Highest k + k' shell when summing all pairs (default: auto).
    #[arg(long, conflicts_with_all = ["k", "kp"])]
    k_max: Option<u32>,
}

#[derive(Args)]
struct SpectrumCavityArgs {
    #[command(flatten)]
    cavity: CavityArgs,

    /// Grid points across the emission band, before resonance clustering.
    #[arg(long, default_value_t = 801)]
    points: usize,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 1.0)]
    tau: f64,

    #[arg(long)]
    rho: f64,

    #[arg(long, allow_hyphen_values = true)]
    a1: f64,

    #[arg(long, allow_hyphen_values = true)]
    a2: f64,

    /// Lower end of the drive-frequency sweep.
    #[arg(long)]
    omega_min: f64,

    /// Upper end of the drive-frequency sweep.
    #[arg(long)]
    omega_max: f64,

    #[arg(long, value_enum, default_value_t = MethodArg::Resummed)]
    method: MethodArg,

    /// Uniform grid size before resonance clustering.
    #[arg(long, default_value_t = 201)]
    points: usize,
}

#[derive(Args)]
struct EstimateArgs {
    /// Peak mirror velocity (m/s).
    #[arg(long)]
    v: f64,

    /// Drive frequency Omega / 2 pi (GHz).
    #[arg(long)]
    freq_ghz: f64,

    /// Loss parameter; the finesse is 1/rho.
    #[arg(long)]
    rho: f64,

    /// Observation time (s).
    #[arg(long, default_value_t = 1.0)]
    time: f64,

    /// Geometric reduction factor in (0, 1] for mirrors smaller than the
    /// diffraction spot.
    #[arg(long)]
    fresnel: Option<f64>,

    /// Ambient temperature (mK); adds a thermal-background check.
    #[arg(long)]
    theta_mk: Option<f64>,
}

/// Accumulates `key value` lines so a command writes its whole payload in
/// one shot, to stdout or to --output.
struct Scalars {
    digits: u32,
    text: String,
}

impl Scalars {
    fn new(digits: u32) -> Self {
        Scalars {
            digits,
            text: String::new(),
        }
    }

    fn line(&mut self, key: &str, value: f64) {
        let precision = (self.digits - 1) as usize;
        // Adding zero folds -0.0 into 0.0 so signs in the output are
        // meaningful.
        let value = value + 0.0;
        writeln!(self.text, "{key} {value:.precision$e}").expect("string write");
    }

    fn raw(&mut self, key: &str, value: impl Display) {
        writeln!(self.text, "{key} {value}").expect("string write");
    }

    fn emit(self, output: &Option<PathBuf>) -> Result<()> {
        match output {
            Some(path) => std::fs::write(path, self.text).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            }),
            None => {
                print!("{}", self.text);
                Ok(())
            }
        }
    }
}

fn emit_warnings(warnings: &[RegimeWarning]) {
    for w in warnings {
        match w {
            RegimeWarning::FastDrive { v_over_c } => eprintln!(
                "warning: fast-drive v/c={v_over_c:.3e} is outside the perturbative window"
            ),
            RegimeWarning::HighLoss { rho } => {
                eprintln!("warning: high-loss rho={rho:.3e} blurs the narrow-resonance picture")
            }
        }
    }
}

fn write_scan_output(
    scan: &ScanResult,
    format: ExportFormat,
    output: &Option<PathBuf>,
) -> Result<()> {
    match output {
        Some(path) => write_scan_to_path(scan, format, path),
        None => write_scan(scan, format, &mut io::stdout().lock()),
    }
}

fn write_spectrum_output(
    table: &SpectrumTable,
    format: ExportFormat,
    output: &Option<PathBuf>,
) -> Result<()> {
    match output {
        Some(path) => write_spectrum_to_path(table, format, path),
        None => write_spectrum(table, format, &mut io::stdout().lock()),
    }
}

/// Largest single-pair flux in the shell nearest the drive resonance. Zero
/// when a selection rule silences the whole shell.
fn resonant_peak(breakdown: &FluxBreakdown, cavity: &CavityConfig) -> f64 {
    let shell = (cavity.x_drive() / std::f64::consts::PI).round().max(2.0) as u32;
    breakdown
        .peaks
        .iter()
        .filter(|p| p.k + p.k_p == shell)
        .map(|p| p.flux)
        .fold(0.0, f64::max)
}

fn run(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    if !g.rel_tol.is_finite() || g.rel_tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "--rel-tol must be finite and > 0, got {}",
            g.rel_tol
        )));
    }
    let consts = match g.units {
        UnitsArg::Si => PhysicalConstants::si(),
        UnitsArg::Dimensionless => PhysicalConstants::natural(),
    };
    let settings = IntegrationSettings {
        rel_tol: g.rel_tol,
        ..IntegrationSettings::default()
    };
    let format = ExportFormat::from(g.format);

    match &cli.command {
        Command::FluxSingle(args) => {
            let drive = HarmonicDrive::new(args.amplitude, args.omega, args.time)?;
            emit_warnings(&drive.regime_warnings(&consts));
            let mirror = args.mirror.build()?;
            let flux_value = match mirror {
                MirrorModel::PerfectReflector => single_mirror::flux_perfect(&drive, &consts),
                _ => single_mirror::flux(&mirror, &drive, &consts, &settings)?.value,
            };
            let mut out = Scalars::new(g.digits);
            out.line("flux", flux_value);
            out.line("photons", flux_value * drive.duration);
            out.line(
                "power",
                single_mirror::radiated_power(flux_value, &drive, &consts),
            );
            out.emit(&g.output)
        }

        Command::SpectrumSingle(args) => {
            let drive = HarmonicDrive::new(args.amplitude, args.omega, args.time)?;
            emit_warnings(&drive.regime_warnings(&consts));
            let mirror = args.mirror.build()?;
            let policy = SpectrumPolicy {
                points: args.points,
                ..SpectrumPolicy::default()
            };
            let table = sample_single_mirror_spectrum(&mirror, &drive, &consts, &policy)?;
            write_spectrum_output(&table, format, &g.output)
        }

        Command::FluxCavity(args) => {
            let cavity = args.cavity.build()?;
            emit_warnings(&cavity.regime_warnings(&consts));
            let cutoff = args.k_max.unwrap_or_else(|| default_shell_cutoff(&cavity));
            let mut out = Scalars::new(g.digits);
            match args.method {
                MethodArg::Resummed => {
                    let parts = resummed_breakdown(&cavity, &consts)?;
                    out.line("flux", parts.total());
                    out.line("nonresonant", parts.nonresonant);
                    out.line("translation", parts.translation);
                    out.line("elongation", parts.elongation);
                }
                MethodArg::ModeSum => {
                    let breakdown = flux_mode_sum(&cavity, &consts, cutoff)?;
                    out.line("flux", breakdown.total);
                    out.line("nonresonant", breakdown.nonresonant);
                    out.line("resonant_peak", resonant_peak(&breakdown, &cavity));
                    out.line("tail_estimate", breakdown.tail_estimate);
                }
                MethodArg::Quadrature => {
                    out.line("flux", flux_quadrature(&cavity, &consts, &settings)?);
                }
            }
            if args.verify {
                let resummed = flux_resummed(&cavity, &consts)?;
                let mode_sum = flux_mode_sum(&cavity, &consts, cutoff)?.total;
                let quad = flux_quadrature(&cavity, &consts, &settings)?;
                let scale = resummed.abs().max(mode_sum.abs()).max(quad.abs());
                let spread = (resummed - mode_sum)
                    .abs()
                    .max((resummed - quad).abs())
                    .max((mode_sum - quad).abs())
                    / scale.max(f64::MIN_POSITIVE);
                out.line("flux_resummed", resummed);
                out.line("flux_mode_sum", mode_sum);
                out.line("flux_quadrature", quad);
                out.line("max_relative_spread", spread);
            }
            out.emit(&g.output)
        }

        Command::Intracavity(args) => {
            let cavity = args.cavity.build()?;
            emit_warnings(&cavity.regime_warnings(&consts));
            let mut out = Scalars::new(g.digits);
            match (args.k, args.kp) {
                (Some(k), Some(kp)) => {
                    out.line("photons", intracavity_photons(&cavity, &consts, k, kp)?);
                }
                _ => {
                    let cutoff = args.k_max.unwrap_or_else(|| default_shell_cutoff(&cavity));
                    out.line("photons", intracavity_total(&cavity, &consts, cutoff)?);
                }
            }
            out.emit(&g.output)
        }

        Command::SpectrumCavity(args) => {
            let cavity = args.cavity.build()?;
            emit_warnings(&cavity.regime_warnings(&consts));
            let policy = SpectrumPolicy {
                points: args.points,
                ..SpectrumPolicy::default()
            };
            let table = sample_cavity_spectrum(&cavity, &consts, &policy)?;
            write_spectrum_output(&table, format, &g.output)
        }

        Command::Scan(args) => {
            let params = ScanParams {
                tau: args.tau,
                rho: args.rho,
                a1: args.a1,
                a2: args.a2,
                omega_min: args.omega_min,
                omega_max: args.omega_max,
            };
            let policy = ScanPolicy {
                base_points: args.points,
                rel_tol: g.rel_tol,
                method: args.method.into(),
                ..ScanPolicy::default()
            };
            let scan = scan_drive_frequency(&params, &policy, &consts)?;
            write_scan_output(&scan, format, &g.output)
        }

        Command::Estimate(args) => {
            if g.units == UnitsArg::Dimensionless {
                return Err(Error::InvalidInput(
                    "estimate works in SI units only; drop --units dimensionless".into(),
                ));
            }
            let omega = 2.0 * std::f64::consts::PI * args.freq_ghz * 1e9;
            let est =
                order_of_magnitude(args.v, omega, args.rho, args.time, args.fresnel, &consts)?;
            let mut out = Scalars::new(g.digits);
            out.line("photons_outside", est.photons_outside);
            out.line("photons_inside", est.photons_inside);
            if let Some(theta_mk) = args.theta_mk {
                let ctx = ThermalContext::new(theta_mk * 1e-3)?;
                out.line("occupation", ctx.occupation(omega, &consts)?);
                out.raw("vacuum_ok", ctx.vacuum_ok(omega, &consts)?);
            }
            out.emit(&g.output)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: kind={} message={:?}", err.kind(), err.to_string());
            match err {
                Error::InvalidInput(_) | Error::Domain(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}
