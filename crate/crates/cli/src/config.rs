//! Stack description files: `key = value` lines with unit suffixes.
//!
//! A config names one capacitor under test. Lines are `key = value`,
//! `#` starts a comment, blank lines are ignored. Every key is accepted
//! at most once and unknown keys are rejected, so a typo fails loudly
//! instead of silently falling back to a default.

use moscap_core::constants::{
    PhysicalConstants, CM_PER_NM, CM_PER_UM, DEFAULT_TEMPERATURE, SIO2_RELATIVE_PERMITTIVITY,
};
use moscap_core::device::{
    DeviceStack, OxideSpec, Polarity, StackKind, SubstrateSpec, DEFAULT_WORKFUNCTION_DIFFERENCE,
};

use crate::CliError;

/// Parsed stack plus a record of every resolved key for `--verbose`.
#[derive(Debug)]
pub struct StackConfig {
    /// The device the file describes.
    pub stack: DeviceStack,
    /// `(key, rendered value, came from a default)` in a fixed order.
    pub resolved: Vec<ResolvedKey>,
}

/// One key after defaulting, for diagnostic echo.
#[derive(Debug)]
pub struct ResolvedKey {
    /// Config key name.
    pub key: &'static str,
    /// Human-readable value with its unit.
    pub value: String,
    /// True when the file did not set the key.
    pub defaulted: bool,
}

/// Splits a value like `500 nm` or `3.9` into number and optional suffix.
fn split_unit(value: &str) -> Result<(f64, Option<&str>), String> {
    let trimmed = value.trim();
    let boundary = trimmed
        .char_indices()
        .find(|&(_, c)| !(c.is_ascii_digit() || "+-.eE".contains(c)))
        .map(|(i, _)| i)
        .unwrap_or(trimmed.len());
    let (number, suffix) = trimmed.split_at(boundary);
    let parsed: f64 = number
        .parse()
        .map_err(|_| format!("invalid number {number:?} in {trimmed:?}"))?;
    if !parsed.is_finite() {
        return Err(format!("number {number:?} overflows to a non-finite value"));
    }
    let suffix = suffix.trim();
    Ok((parsed, if suffix.is_empty() { None } else { Some(suffix) }))
}

/// Parses a length with a required `nm`, `um`, or `cm` suffix into cm.
pub fn parse_length_cm(value: &str) -> Result<f64, String> {
    let (number, suffix) = split_unit(value)?;
    match suffix {
        Some("nm") => Ok(number * CM_PER_NM),
        Some("um") => Ok(number * CM_PER_UM),
        Some("cm") => Ok(number),
        Some(other) => Err(format!("unknown length unit {other:?}, expected nm, um, or cm")),
        None => Err(format!("length {value:?} needs a unit: nm, um, or cm")),
    }
}

/// Parses an area in cm^2; the `cm2` suffix is optional.
pub fn parse_area_cm2(value: &str) -> Result<f64, String> {
    let (number, suffix) = split_unit(value)?;
    match suffix {
        None | Some("cm2") => Ok(number),
        Some(other) => Err(format!("unknown area unit {other:?}, expected cm2")),
    }
}

/// Parses a concentration in cm^-3; the `per_cm3` suffix is optional.
pub fn parse_doping(value: &str) -> Result<f64, String> {
    let (number, suffix) = split_unit(value)?;
    match suffix {
        None | Some("per_cm3") => Ok(number),
        Some(other) => Err(format!("unknown doping unit {other:?}, expected per_cm3")),
    }
}

/// Parses a voltage; the `V` suffix is optional.
pub fn parse_voltage(value: &str) -> Result<f64, String> {
    let (number, suffix) = split_unit(value)?;
    match suffix {
        None | Some("V") => Ok(number),
        Some(other) => Err(format!("unknown voltage unit {other:?}, expected V")),
    }
}

/// Parses a temperature in kelvin; the `K` suffix is optional.
pub fn parse_temperature(value: &str) -> Result<f64, String> {
    let (number, suffix) = split_unit(value)?;
    match suffix {
        None | Some("K") => Ok(number),
        Some(other) => Err(format!("unknown temperature unit {other:?}, expected K")),
    }
}

/// Parses a capacitance into farads. Bare numbers are farads; `pF`,
/// `fF`, `nF`, and `F` suffixes are accepted.
pub fn parse_capacitance_f(value: &str) -> Result<f64, String> {
    let (number, suffix) = split_unit(value)?;
    match suffix {
        None | Some("F") => Ok(number),
        Some("pF") => Ok(number * 1e-12),
        Some("fF") => Ok(number * 1e-15),
        Some("nF") => Ok(number * 1e-9),
        Some(other) => Err(format!(
            "unknown capacitance unit {other:?}, expected pF, fF, nF, or F"
        )),
    }
}

const KNOWN_KEYS: [&str; 9] = [
    "kind",
    "polarity",
    "t_ox",
    "area",
    "doping",
    "phi_ms",
    "q_f",
    "epsilon_r",
    "temperature",
];

struct RawEntry {
    line: usize,
    value: String,
}

/// Parses a config document. `location` (usually the file path) prefixes
/// every diagnostic as `location:line`.
pub fn parse_stack_config(text: &str, location: &str) -> Result<StackConfig, CliError> {
    let fail = |line: usize, message: String| CliError::Parse {
        location: format!("{location}:{line}"),
        message,
    };

    let mut entries: Vec<(&'static str, RawEntry)> = Vec::new();
    for (index, raw_line) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(fail(line, format!("expected `key = value`, got {content:?}")));
        };
        let key = key.trim();
        let value = value.trim();
        let Some(&known) = KNOWN_KEYS.iter().find(|&&k| k == key) else {
            return Err(fail(line, format!("unknown key {key:?}")));
        };
        if let Some((_, previous)) = entries.iter().find(|(k, _)| *k == known) {
            return Err(fail(
                line,
                format!("duplicate key {key:?}, first set on line {}", previous.line),
            ));
        }
        if value.is_empty() {
            return Err(fail(line, format!("key {key:?} has no value")));
        }
        entries.push((known, RawEntry { line, value: value.to_string() }));
    }

    let take = |key: &str| entries.iter().find(|(k, _)| *k == key).map(|(_, e)| e);
    let parse_with = |key: &str, parser: fn(&str) -> Result<f64, String>| {
        take(key)
            .map(|e| parser(&e.value).map_err(|m| fail(e.line, format!("key {key:?}: {m}"))))
            .transpose()
    };

    let kind = match take("kind") {
        None => StackKind::Mos,
        Some(e) => match e.value.as_str() {
            "mos" => StackKind::Mos,
            "mim" => StackKind::MetalInsulatorMetal,
            other => {
                return Err(fail(e.line, format!("key \"kind\": expected mos or mim, got {other:?}")));
            }
        },
    };

    if kind == StackKind::MetalInsulatorMetal {
        for forbidden in ["polarity", "doping", "phi_ms", "q_f"] {
            if let Some(e) = take(forbidden) {
                return Err(fail(
                    e.line,
                    format!("key {forbidden:?} does not apply to a metal-insulator-metal stack"),
                ));
            }
        }
    }

    let polarity = match take("polarity") {
        None => Polarity::PType,
        Some(e) => match e.value.as_str() {
            "p" => Polarity::PType,
            "n" => Polarity::NType,
            other => {
                return Err(fail(e.line, format!("key \"polarity\": expected p or n, got {other:?}")));
            }
        },
    };

    let require = |key: &'static str| {
        take(key).ok_or_else(|| fail(0, String::new())).map_err(|_| CliError::Parse {
            location: location.to_string(),
            message: format!("missing required key {key:?} for a {} stack", kind.as_str()),
        })
    };

    let t_ox_entry = require("t_ox")?;
    let t_ox = parse_length_cm(&t_ox_entry.value)
        .map_err(|m| fail(t_ox_entry.line, format!("key \"t_ox\": {m}")))?;
    if t_ox <= 0.0 {
        return Err(fail(
            t_ox_entry.line,
            format!("key \"t_ox\": thickness must be positive, got {}", t_ox_entry.value),
        ));
    }
    let area_entry = require("area")?;
    let area = parse_area_cm2(&area_entry.value)
        .map_err(|m| fail(area_entry.line, format!("key \"area\": {m}")))?;
    if area <= 0.0 {
        return Err(fail(
            area_entry.line,
            format!("key \"area\": area must be positive, got {}", area_entry.value),
        ));
    }

    let epsilon_r = parse_with("epsilon_r", |v| {
        let (number, suffix) = split_unit(v)?;
        match suffix {
            None => Ok(number),
            Some(other) => Err(format!("unexpected unit {other:?}")),
        }
    })?
    .unwrap_or(SIO2_RELATIVE_PERMITTIVITY);
    if epsilon_r < 1.0 {
        let line = take("epsilon_r").map(|e| e.line).unwrap_or(0);
        return Err(fail(
            line,
            format!("key \"epsilon_r\": relative permittivity must be >= 1, got {epsilon_r}"),
        ));
    }

    let temperature = parse_with("temperature", parse_temperature)?.unwrap_or(DEFAULT_TEMPERATURE);
    if temperature <= 0.0 {
        let line = take("temperature").map(|e| e.line).unwrap_or(0);
        return Err(fail(
            line,
            format!("key \"temperature\": must be positive, got {temperature} K"),
        ));
    }
    let constants = PhysicalConstants::at_temperature(temperature);

    let oxide = OxideSpec::new(t_ox, area, epsilon_r).map_err(CliError::from)?;

    let mut resolved = vec![
        ResolvedKey {
            key: "kind",
            value: kind.as_str().to_string(),
            defaulted: take("kind").is_none(),
        },
        ResolvedKey {
            key: "t_ox",
            value: format!("{} nm", crate::format_compact(t_ox / CM_PER_NM)),
            defaulted: false,
        },
        ResolvedKey {
            key: "area",
            value: format!("{} cm2", crate::format_compact(area)),
            defaulted: false,
        },
        ResolvedKey {
            key: "epsilon_r",
            value: crate::format_compact(epsilon_r),
            defaulted: take("epsilon_r").is_none(),
        },
        ResolvedKey {
            key: "temperature",
            value: format!("{} K", crate::format_compact(temperature)),
            defaulted: take("temperature").is_none(),
        },
    ];

    let stack = match kind {
        StackKind::MetalInsulatorMetal => DeviceStack::metal_insulator_metal(oxide, constants),
        StackKind::Mos => {
            let doping_entry = require("doping")?;
            let doping = parse_doping(&doping_entry.value)
                .map_err(|m| fail(doping_entry.line, format!("key \"doping\": {m}")))?;
            let substrate = SubstrateSpec::new(polarity, doping, &constants)
                .map_err(|e| fail(doping_entry.line, format!("key \"doping\": {e}")))?;
            let phi_ms_default = match polarity {
                Polarity::PType => DEFAULT_WORKFUNCTION_DIFFERENCE,
                Polarity::NType => 0.0,
            };
            let phi_ms = parse_with("phi_ms", parse_voltage)?.unwrap_or(phi_ms_default);
            let q_f = parse_with("q_f", |v| {
                let (number, suffix) = split_unit(v)?;
                match suffix {
                    None => Ok(number),
                    Some(other) => Err(format!("unexpected unit {other:?}")),
                }
            })?
            .unwrap_or(0.0);
            resolved.push(ResolvedKey {
                key: "polarity",
                value: polarity.as_str().to_string(),
                defaulted: take("polarity").is_none(),
            });
            resolved.push(ResolvedKey {
                key: "doping",
                value: format!("{} per_cm3", crate::format_compact(doping)),
                defaulted: false,
            });
            resolved.push(ResolvedKey {
                key: "phi_ms",
                value: format!("{} V", crate::format_compact(phi_ms)),
                defaulted: take("phi_ms").is_none(),
            });
            resolved.push(ResolvedKey {
                key: "q_f",
                value: crate::format_compact(q_f),
                defaulted: take("q_f").is_none(),
            });
            DeviceStack::mos(oxide, substrate, phi_ms, q_f, constants).map_err(CliError::from)?
        }
    };

    Ok(StackConfig { stack, resolved })
}
