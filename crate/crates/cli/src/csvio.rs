//! CSV exchange formats: C-V curves and doping profiles.
//!
//! Both formats are canonical: LF line endings, a fixed header, and
//! scientific notation with nine significant digits. Re-writing a parsed
//! file reproduces it byte for byte.

use std::io::Write;
use std::path::Path;

use moscap_core::constants::CM_PER_UM;
use moscap_core::curve::{CVCurve, CVPoint, Regime};
use moscap_core::extract::{DopingProfile, ProfilePoint};

use crate::CliError;

/// Header line of a C-V file.
pub const CURVE_HEADER: &str = "voltage_V,capacitance_F";

/// Header line of a doping-profile file.
pub const PROFILE_HEADER: &str = "depth_um,concentration_per_cm3";

/// Serializes a curve in canonical form.
pub fn write_curve(curve: &CVCurve) -> String {
    let mut out = String::with_capacity(32 * (curve.len() + 1));
    out.push_str(CURVE_HEADER);
    out.push('\n');
    for p in curve.points() {
        out.push_str(&format!("{:.8e},{:.8e}\n", p.bias, p.capacitance));
    }
    out
}

/// Serializes a doping profile in canonical form, depths in micrometers.
pub fn write_profile(profile: &DopingProfile) -> String {
    let mut out = String::with_capacity(32 * (profile.len() + 1));
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for p in profile.points() {
        out.push_str(&format!(
            "{:.8e},{:.8e}\n",
            p.depth / CM_PER_UM,
            p.concentration
        ));
    }
    out
}

fn parse_error(location: &str, line: usize, message: String) -> CliError {
    CliError::Parse { location: format!("{location}:{line}"), message }
}

fn parse_cell(
    cell: &str,
    column: &str,
    location: &str,
    line: usize,
) -> Result<f64, CliError> {
    let value: f64 = cell.trim().parse().map_err(|_| {
        parse_error(location, line, format!("column {column}: invalid number {cell:?}"))
    })?;
    if !value.is_finite() {
        return Err(parse_error(
            location,
            line,
            format!("column {column}: value {cell:?} is not finite"),
        ));
    }
    Ok(value)
}

fn split_row<'a>(
    row: &'a str,
    location: &str,
    line: usize,
) -> Result<(&'a str, &'a str), CliError> {
    let mut cells = row.split(',');
    match (cells.next(), cells.next(), cells.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(parse_error(
            location,
            line,
            format!("expected two comma-separated columns, got {row:?}"),
        )),
    }
}

/// Parses a C-V file, tagging the curve as a raw measurement.
///
/// `location` names the source (usually the file path) in diagnostics.
pub fn parse_curve(text: &str, location: &str) -> Result<CVCurve, CliError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CURVE_HEADER => {}
        Some((_, header)) => {
            return Err(parse_error(
                location,
                1,
                format!("expected header {CURVE_HEADER:?}, got {header:?}"),
            ));
        }
        None => return Err(parse_error(location, 1, "file is empty".to_string())),
    }
    let mut points: Vec<CVPoint> = Vec::new();
    for (index, row) in lines {
        let line = index + 1;
        if row.trim().is_empty() {
            return Err(parse_error(location, line, "empty row".to_string()));
        }
        let (bias_cell, cap_cell) = split_row(row, location, line)?;
        let bias = parse_cell(bias_cell, "voltage_V", location, line)?;
        let capacitance = parse_cell(cap_cell, "capacitance_F", location, line)?;
        if capacitance <= 0.0 {
            return Err(parse_error(
                location,
                line,
                format!("column capacitance_F: must be positive, got {capacitance}"),
            ));
        }
        if let Some(previous) = points.last() {
            if bias <= previous.bias {
                return Err(parse_error(
                    location,
                    line,
                    format!(
                        "column voltage_V: bias {bias} V does not increase past the \
                         previous row's {} V",
                        previous.bias
                    ),
                ));
            }
        }
        points.push(CVPoint { bias, capacitance });
    }
    if points.is_empty() {
        return Err(parse_error(location, 1, "no data rows after the header".to_string()));
    }
    CVCurve::new(points, Regime::RawMeasurement).map_err(CliError::from)
}

/// Parses a doping-profile file; depths are micrometers in the file and
/// centimeters in the returned profile.
pub fn parse_profile(text: &str, location: &str) -> Result<DopingProfile, CliError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == PROFILE_HEADER => {}
        Some((_, header)) => {
            return Err(parse_error(
                location,
                1,
                format!("expected header {PROFILE_HEADER:?}, got {header:?}"),
            ));
        }
        None => return Err(parse_error(location, 1, "file is empty".to_string())),
    }
    let mut points: Vec<ProfilePoint> = Vec::new();
    for (index, row) in lines {
        let line = index + 1;
        if row.trim().is_empty() {
            return Err(parse_error(location, line, "empty row".to_string()));
        }
        let (depth_cell, conc_cell) = split_row(row, location, line)?;
        let depth_um = parse_cell(depth_cell, "depth_um", location, line)?;
        let concentration = parse_cell(conc_cell, "concentration_per_cm3", location, line)?;
        if concentration <= 0.0 {
            return Err(parse_error(
                location,
                line,
                format!(
                    "column concentration_per_cm3: must be positive, got {concentration}"
                ),
            ));
        }
        let depth = depth_um * CM_PER_UM;
        if let Some(previous) = points.last() {
            if depth <= previous.depth {
                return Err(parse_error(
                    location,
                    line,
                    format!(
                        "column depth_um: depth {depth_um} um does not increase past \
                         the previous row"
                    ),
                ));
            }
        }
        points.push(ProfilePoint { depth, concentration });
    }
    DopingProfile::new(points).map_err(CliError::from)
}

/// Writes a file through a temporary sibling and an atomic rename, so a
/// crash never leaves a half-written file behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let io_err = |source: std::io::Error| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
