//! Table export and import.
//!
//! Two formats: JSON (lossless, round-trips through serde) and CSV with
//! `#`-prefixed metadata lines (for plotting tools). Both renderings are
//! deterministic: floats are written with 17 significant digits, which
//! round-trips every f64 bit pattern, metadata keys are emitted in sorted
//! order, and nothing environment-dependent (timestamps, hostnames, locales)
//! is ever written.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::experiments::{ScanResult, SpectrumTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::InvalidInput(format!(
                "unknown export format '{other}' (expected csv or json)"
            ))),
        }
    }
}

impl std::fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExportFormat::Csv => "csv",
            ExportFormat::Json => "json",
        })
    }
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

fn opt_int(x: Option<u32>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Quote a free-text CSV field per RFC 4180 (always quoted, inner quotes
/// doubled) so embedded commas cannot shift columns.
fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// Render serializable params as sorted `# key: value` lines.
fn param_lines(out: &mut String, params: &impl serde::Serialize) -> Result<()> {
    let value = serde_json::to_value(params)?;
    let map = value
        .as_object()
        .ok_or_else(|| Error::InvalidInput("params must serialize to a JSON object".into()))?;
    for (key, v) in map {
        let rendered = match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Null => String::new(),
            other => other.to_string(),
        };
        writeln!(out, "# {key}: {rendered}").expect("writing to String cannot fail");
    }
    Ok(())
}

fn scan_csv(scan: &ScanResult) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "# motrad scan v{}", scan.schema_version).unwrap();
    param_lines(&mut out, &scan.params)?;
    writeln!(out, "# method: {}", scan.method).unwrap();
    writeln!(
        out,
        "# reproducibility: byte-identical for identical inputs and library version"
    )
    .unwrap();
    writeln!(
        out,
        "omega,x_drive,flux_total,flux_nonresonant,dominant_k,dominant_k_p,regime_flags,error"
    )
    .unwrap();
    for row in &scan.rows {
        let flags = row
            .regime_flags
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(";");
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            float(row.omega),
            float(row.x_drive),
            opt_float(row.flux_total),
            float(row.flux_nonresonant),
            opt_int(row.dominant_k),
            opt_int(row.dominant_k_p),
            flags,
            row.error.as_deref().map(quoted).unwrap_or_default(),
        )
        .unwrap();
    }
    Ok(out)
}

fn spectrum_csv(table: &SpectrumTable) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "# motrad spectrum v{}", table.schema_version).unwrap();
    param_lines(&mut out, &table.params)?;
    writeln!(
        out,
        "# reproducibility: byte-identical for identical inputs and library version"
    )
    .unwrap();
    for p in &table.peaks {
        writeln!(
            out,
            "# peak: center={} height={} fwhm={}",
            float(p.center),
            float(p.height),
            float(p.fwhm)
        )
        .unwrap();
    }
    writeln!(out, "omega,density").unwrap();
    for row in &table.rows {
        writeln!(out, "{},{}", float(row.omega), float(row.density)).unwrap();
    }
    Ok(out)
}

fn render_scan(scan: &ScanResult, format: ExportFormat) -> Result<String> {
    match format {
        ExportFormat::Csv => scan_csv(scan),
        ExportFormat::Json => Ok(serde_json::to_string_pretty(scan)? + "\n"),
    }
}

fn render_spectrum(table: &SpectrumTable, format: ExportFormat) -> Result<String> {
    match format {
        ExportFormat::Csv => spectrum_csv(table),
        ExportFormat::Json => Ok(serde_json::to_string_pretty(table)? + "\n"),
    }
}

fn stream_io(source: io::Error) -> Error {
    Error::Io {
        path: "<stream>".into(),
        source,
    }
}

fn path_io(path: &Path) -> impl FnOnce(io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Write a scan table to any byte sink.
pub fn write_scan(scan: &ScanResult, format: ExportFormat, out: &mut dyn io::Write) -> Result<()> {
    out.write_all(render_scan(scan, format)?.as_bytes())
        .map_err(stream_io)
}

/// Write a spectrum table to any byte sink.
pub fn write_spectrum(
    table: &SpectrumTable,
    format: ExportFormat,
    out: &mut dyn io::Write,
) -> Result<()> {
    out.write_all(render_spectrum(table, format)?.as_bytes())
        .map_err(stream_io)
}

/// Write a scan table to a file, creating or truncating it.
pub fn write_scan_to_path(scan: &ScanResult, format: ExportFormat, path: &Path) -> Result<()> {
    fs::write(path, render_scan(scan, format)?).map_err(path_io(path))
}

/// Write a spectrum table to a file, creating or truncating it.
pub fn write_spectrum_to_path(
    table: &SpectrumTable,
    format: ExportFormat,
    path: &Path,
) -> Result<()> {
    fs::write(path, render_spectrum(table, format)?).map_err(path_io(path))
}

/// Read back a JSON scan table.
pub fn read_scan_json(reader: impl io::Read) -> Result<ScanResult> {
    Ok(serde_json::from_reader(reader)?)
}

/// Read back a JSON spectrum table.
pub fn read_spectrum_json(reader: impl io::Read) -> Result<SpectrumTable> {
    Ok(serde_json::from_reader(reader)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::experiments::{
        scan_drive_frequency, ScanMethod, ScanParams, ScanPolicy, SpectrumParams, SpectrumRow,
        SpectrumTable, SCHEMA_VERSION,
    };

    fn small_scan() -> ScanResult {
        let params = ScanParams {
            tau: 1.0,
            rho: 1e-2,
            a1: 1e-3,
            a2: 4e-4,
            omega_min: 4.0,
            omega_max: 7.0,
        };
        let policy = ScanPolicy {
            base_points: 11,
            samples_per_fwhm: 4,
            window_fwhms: 2.0,
            method: ScanMethod::Resummed,
            ..Default::default()
        };
        scan_drive_frequency(&params, &policy, &PhysicalConstants::natural()).unwrap()
    }

    fn small_spectrum() -> SpectrumTable {
        SpectrumTable {
            schema_version: SCHEMA_VERSION,
            params: SpectrumParams::Cavity {
                tau: 1.0,
                rho: 1e-3,
                a1: 1e-3,
                a2: 0.0,
                omega: 4.0 * std::f64::consts::PI,
            },
            rows: vec![
                SpectrumRow {
                    omega: 0.5,
                    density: 1.25e-7,
                },
                SpectrumRow {
                    omega: 1.0,
                    density: 0.1 + f64::EPSILON,
                },
            ],
            peaks: vec![],
        }
    }

    #[test]
    fn scan_json_round_trips_exactly() {
        let scan = small_scan();
        let mut buf = Vec::new();
        write_scan(&scan, ExportFormat::Json, &mut buf).unwrap();
        let back = read_scan_json(buf.as_slice()).unwrap();
        assert_eq!(back, scan);
    }

    #[test]
    fn spectrum_json_round_trips_exactly() {
        let table = small_spectrum();
        let mut buf = Vec::new();
        write_spectrum(&table, ExportFormat::Json, &mut buf).unwrap();
        let back = read_spectrum_json(buf.as_slice()).unwrap();
        assert_eq!(back, table);
    }

    #[test]
    fn csv_floats_round_trip_bit_exactly() {
        let scan = small_scan();
        let mut buf = Vec::new();
        write_scan(&scan, ExportFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let data_rows: Vec<&str> = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("omega,"))
            .collect();
        assert_eq!(data_rows.len(), scan.rows.len());
        for (line, row) in data_rows.iter().zip(&scan.rows) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[0].parse::<f64>().unwrap(), row.omega);
            assert_eq!(fields[1].parse::<f64>().unwrap(), row.x_drive);
            assert_eq!(
                fields[2].parse::<f64>().unwrap(),
                row.flux_total.unwrap(),
                "flux column must round-trip"
            );
        }
    }

    #[test]
    fn csv_headers_carry_params_and_schema() {
        let scan = small_scan();
        let mut buf = Vec::new();
        write_scan(&scan, ExportFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# motrad scan v1\n"));
        assert!(text.contains("# rho: 0.01\n"));
        assert!(text.contains("# method: resummed\n"));
        assert!(text.contains("\nomega,x_drive,"));
    }

    #[test]
    fn repeated_renders_are_byte_identical() {
        let scan = small_scan();
        for format in [ExportFormat::Csv, ExportFormat::Json] {
            let mut a = Vec::new();
            let mut b = Vec::new();
            write_scan(&scan, format, &mut a).unwrap();
            write_scan(&scan, format, &mut b).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn path_writers_report_the_offending_path() {
        let scan = small_scan();
        let path = Path::new("/nonexistent-dir/motrad-test.csv");
        let err = write_scan_to_path(&scan, ExportFormat::Csv, path).unwrap_err();
        match err {
            Error::Io { path, .. } => assert!(path.contains("nonexistent-dir")),
            other => panic!("expected Io error, got {other:?}"),
        }
        assert_eq!(
            write_scan_to_path(&scan, ExportFormat::Csv, path)
                .unwrap_err()
                .kind(),
            "io"
        );
    }

    #[test]
    fn format_names_parse() {
        assert_eq!("csv".parse::<ExportFormat>().unwrap(), ExportFormat::Csv);
        assert_eq!("json".parse::<ExportFormat>().unwrap(), ExportFormat::Json);
        assert!("yaml".parse::<ExportFormat>().is_err());
    }
}
