//! Command-line wiring for the C-V workbench: argument parsing, command
//! dispatch, exit codes, and the text formats the commands speak.
//!
//! All diagnostics go to the error stream; data goes to standard output
//! or to `--out` files, so command output can always be piped onward.
//! Exit codes: 0 success, 1 usage or parse error, 2 numerical
//! non-convergence, 3 invalid physical input.

pub mod config;
pub mod csvio;
pub mod svg;

use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{ColorChoice, Parser, Subcommand};
use moscap_core::constants::{CM_PER_NM, CM_PER_UM, F_PER_PF, SIO2_RELATIVE_PERMITTIVITY};
use moscap_core::curve::{CVCurve, Regime};
use moscap_core::device::{Polarity, StackKind};
use moscap_core::error::Error as CoreError;
use moscap_core::extract::{
    detect_markers, doping_profile_from_cv, extract_area, extract_doping_maxmin,
    extract_oxide_capacitance, extract_tox, junction_depth, ThreePointMarkers,
};
use moscap_core::fit::{fit_cv_in_regime, FreeParameter};
use moscap_core::model;
use moscap_core::reference::{reference_curves, ReferenceStructure};
use moscap_core::sweep::{simulate_sweep, SweepPlan};

use config::{
    parse_area_cm2, parse_capacitance_f, parse_length_cm, parse_stack_config, StackConfig,
};

/// Everything that can go wrong between argv and a finished command.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The invocation itself is wrong: bad flag combination, unknown
    /// identifier, malformed value.
    #[error("{0}")]
    Usage(String),
    /// A file could not be read or written.
    #[error("{path}: {source}")]
    Io {
        /// Path involved.
        path: String,
        /// Underlying system error.
        source: std::io::Error,
    },
    /// An input document is malformed; `location` is `file:line`.
    #[error("{location}: {message}")]
    Parse {
        /// Where in which document.
        location: String,
        /// What is wrong there.
        message: String,
    },
    /// The numerics underneath rejected the request.
    #[error(transparent)]
    Core(#[from] moscap_core::Error),
}

impl CliError {
    /// Process exit code this failure maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::Core(e) => match e {
                CoreError::Convergence { .. }
                | CoreError::RankDeficient { .. }
                | CoreError::FitDiverged { .. } => 2,
                _ => 3,
            },
        }
    }
}

/// Formats a number with up to `decimals` fraction digits, trimming
/// trailing zeros so `0.800000` becomes `0.8` and `2.0` becomes `2`.
pub fn format_trimmed(value: f64, decimals: usize) -> String {
    let mut text = format!("{value:.decimals$}");
    if text.contains('.') {
        while text.ends_with('0') {
            text.pop();
        }
        if text.ends_with('.') {
            text.pop();
        }
    }
    if text == "-0" {
        text = "0".to_string();
    }
    text
}

/// Human-facing number: plain decimal in a mid-range, mantissa-exponent
/// outside it, trailing zeros trimmed either way.
pub fn format_compact(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    let magnitude = value.abs();
    if (1e-3..1e5).contains(&magnitude) {
        return format_trimmed(value, 6);
    }
    let mut exponent = magnitude.log10().floor() as i32;
    let mut mantissa = value / 10f64.powi(exponent);
    // Rounding to six digits can push the mantissa up to 10.
    if format!("{:.6}", mantissa.abs()).starts_with("10") {
        mantissa /= 10.0;
        exponent += 1;
    }
    format!("{}e{}", format_trimmed(mantissa, 6), exponent)
}

#[derive(Parser)]
#[command(
    name = "moscap",
    version,
    about = "MOS capacitor C-V modeling, virtual measurement, and extraction",
    color = ColorChoice::Never
)]
struct Cli {
    /// Echo resolved configuration and progress notes to stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print summary quantities of a device stack.
    Model {
        /// Stack description file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Simulate a C-V sweep and write it as CSV.
    Sweep {
        /// Stack description file.
        #[arg(long)]
        config: PathBuf,
        /// First gate bias [V].
        #[arg(long, allow_hyphen_values = true)]
        start: f64,
        /// Last gate bias [V].
        #[arg(long, allow_hyphen_values = true)]
        stop: f64,
        /// Grid spacing [V].
        #[arg(long)]
        step: f64,
        /// Measurement regime: hf, lf, or dd.
        #[arg(long, default_value = "hf")]
        regime: String,
        /// Additive noise sigma, e.g. `0.05 pF` or a bare number in F.
        #[arg(long, default_value = "0.05 pF")]
        noise: String,
        /// Seed of the noise stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Leading settling points to discard.
        #[arg(long, default_value_t = 0)]
        settle: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover stack quantities from measured data.
    Extract {
        #[command(subcommand)]
        what: ExtractCommand,
    },
    /// Fit free stack parameters to a measured curve.
    Fit {
        /// Measured C-V CSV file.
        #[arg(long)]
        input: PathBuf,
        /// Initial stack description file.
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated free parameters: tox, area, doping, flat_band.
        #[arg(long, default_value = "tox,doping")]
        free: String,
        /// Model regime the data was measured in: hf, lf, or dd.
        #[arg(long, default_value = "hf")]
        regime: String,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render one or more C-V CSV files as an SVG plot.
    Plot {
        /// Input CSV files, one series each.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the tabulated bench series next to model predictions.
    Reference {
        /// Restrict to one structure: al_p_plus, al_n_plus, metal1_metal2.
        #[arg(long)]
        structure: Option<String>,
    },
}

#[derive(Subcommand)]
enum ExtractCommand {
    /// Oxide thickness from the accumulation capacitance.
    Tox {
        /// Accumulation capacitance, e.g. `28.62 pF`.
        #[arg(long, conflicts_with = "input")]
        cox: Option<String>,
        /// C-V CSV to read the accumulation plateau from instead.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Substrate polarity of the measured device: p or n.
        #[arg(long, default_value = "p")]
        polarity: String,
        /// Gate area [cm2].
        #[arg(long)]
        area: String,
        /// Relative permittivity of the insulator.
        #[arg(long, default_value_t = SIO2_RELATIVE_PERMITTIVITY)]
        epsilon_r: f64,
    },
    /// Gate area from the accumulation capacitance.
    Area {
        /// Accumulation capacitance, e.g. `28.62 pF`.
        #[arg(long, conflicts_with = "input")]
        cox: Option<String>,
        /// C-V CSV to read the accumulation plateau from instead.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Substrate polarity of the measured device: p or n.
        #[arg(long, default_value = "p")]
        polarity: String,
        /// Oxide thickness with unit, e.g. `500 nm`.
        #[arg(long)]
        tox: String,
        /// Relative permittivity of the insulator.
        #[arg(long, default_value_t = SIO2_RELATIVE_PERMITTIVITY)]
        epsilon_r: f64,
    },
    /// Substrate doping from the max/min capacitance pair.
    Doping {
        /// Accumulation capacitance, e.g. `28.62 pF`.
        #[arg(long, conflicts_with = "input", requires = "cmin")]
        cox: Option<String>,
        /// High-frequency minimum capacitance.
        #[arg(long, conflicts_with = "input")]
        cmin: Option<String>,
        /// C-V CSV to read both capacitances from instead.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Substrate polarity of the measured device: p or n.
        #[arg(long, default_value = "p")]
        polarity: String,
        /// Gate area [cm2].
        #[arg(long)]
        area: String,
    },
    /// Junction depth from three profile markers.
    Junction {
        /// Onset, minimum, and saturation depths [um].
        #[arg(
            value_name = "UM",
            num_args = 3,
            allow_hyphen_values = true,
            required_unless_present = "profile",
            conflicts_with = "profile"
        )]
        markers: Vec<f64>,
        /// Doping-profile CSV to detect the markers from instead.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Doping profile from a C-V curve via 1/C^2 differentiation.
    Profile {
        /// Measured C-V CSV file.
        #[arg(long)]
        input: PathBuf,
        /// Gate area [cm2].
        #[arg(long)]
        area: String,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses argv and runs one command against the given streams.
///
/// Returns the process exit code instead of exiting, so tests can drive
/// the whole CLI in memory.
pub fn run(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            return if err.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                1
            } else {
                let _ = write!(stdout, "{rendered}");
                0
            };
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(error) => {
            let code = error.exit_code();
            let styled = std::env::var_os("MOSCAP_NO_COLOR").is_none()
                && std::io::stderr().is_terminal();
            if styled {
                let _ = writeln!(stderr, "\x1b[31merror:\x1b[0m {error}");
            } else {
                let _ = writeln!(stderr, "error: {error}");
            }
            code
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_config(
    path: &Path,
    verbose: bool,
    stderr: &mut dyn Write,
) -> Result<StackConfig, CliError> {
    let text = read_file(path)?;
    let config = parse_stack_config(&text, &path.display().to_string())?;
    if verbose {
        let _ = writeln!(stderr, "config {}:", path.display());
        for key in &config.resolved {
            let marker = if key.defaulted { " (default)" } else { "" };
            let _ = writeln!(stderr, "  {} = {}{marker}", key.key, key.value);
        }
    }
    Ok(config)
}

fn load_curve(path: &Path) -> Result<CVCurve, CliError> {
    let text = read_file(path)?;
    csvio::parse_curve(&text, &path.display().to_string())
}

/// Writes data to `--out` atomically, or to stdout when no path given.
fn emit(
    out: Option<&PathBuf>,
    stdout: &mut dyn Write,
    contents: &str,
) -> Result<(), CliError> {
    match out {
        Some(path) => csvio::write_atomic(path, contents),
        None => stdout.write_all(contents.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".to_string(),
            source,
        }),
    }
}

fn parse_regime(name: &str) -> Result<Regime, CliError> {
    match name {
        "hf" => Ok(Regime::HighFrequency),
        "lf" => Ok(Regime::LowFrequency),
        "dd" => Ok(Regime::DeepDepletion),
        other => Err(usage(format!("unknown regime {other:?}, expected hf, lf, or dd"))),
    }
}

fn parse_polarity(name: &str) -> Result<Polarity, CliError> {
    match name {
        "p" => Ok(Polarity::PType),
        "n" => Ok(Polarity::NType),
        other => Err(usage(format!("unknown polarity {other:?}, expected p or n"))),
    }
}

fn parse_free_list(list: &str) -> Result<Vec<FreeParameter>, CliError> {
    list.split(',')
        .map(|name| match name.trim() {
            "tox" => Ok(FreeParameter::OxideThickness),
            "area" => Ok(FreeParameter::Area),
            "doping" => Ok(FreeParameter::Doping),
            "flat_band" => Ok(FreeParameter::FlatBand),
            other => Err(usage(format!(
                "unknown free parameter {other:?}, expected tox, area, doping, or flat_band"
            ))),
        })
        .collect()
}

/// The accumulation capacitance, from an explicit `--cox` value or from
/// the plateau of a measured curve.
fn resolve_cox(
    cox: Option<&str>,
    input: Option<&PathBuf>,
    polarity: &str,
) -> Result<f64, CliError> {
    match (cox, input) {
        (Some(value), None) => parse_capacitance_f(value).map_err(usage),
        (None, Some(path)) => {
            let curve = load_curve(path)?;
            Ok(extract_oxide_capacitance(&curve, parse_polarity(polarity)?)?)
        }
        _ => Err(usage("pass exactly one of --cox or --input")),
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let say = |stdout: &mut dyn Write, line: String| -> Result<(), CliError> {
        writeln!(stdout, "{line}").map_err(|source| CliError::Io {
            path: "<stdout>".to_string(),
            source,
        })
    };
    match &cli.command {
        Command::Model { config } => {
            let stack = load_config(config, cli.verbose, stderr)?.stack;
            let c_ox = model::oxide_capacitance(&stack);
            say(stdout, format!("oxide capacitance: {} F", format_compact(c_ox)))?;
            if stack.kind == StackKind::Mos {
                let v_fb = model::flat_band_voltage(&stack)?;
                let v_t = model::threshold_voltage(&stack)?;
                let c_min = model::c_min(&stack)?;
                say(stdout, format!("flat-band voltage: {} V", format_compact(v_fb)))?;
                say(stdout, format!("threshold voltage: {} V", format_compact(v_t)))?;
                say(stdout, format!("minimum capacitance: {} F", format_compact(c_min)))?;
            }
            Ok(())
        }
        Command::Sweep { config, start, stop, step, regime, noise, seed, settle, out } => {
            let stack = load_config(config, cli.verbose, stderr)?.stack;
            let regime = parse_regime(regime)?;
            let sigma = parse_capacitance_f(noise).map_err(usage)?;
            let plan = SweepPlan::new(*start, *stop, *step, regime, sigma, *seed, *settle)?;
            let curve = simulate_sweep(&stack, &plan)?;
            if cli.verbose {
                let _ = writeln!(
                    stderr,
                    "sweep: {} points, {} regime, sigma {} F, seed {}",
                    curve.len(),
                    regime.as_str(),
                    format_compact(sigma),
                    seed
                );
            }
            emit(out.as_ref(), stdout, &csvio::write_curve(&curve))
        }
        Command::Extract { what } => dispatch_extract(what, cli.verbose, stdout, stderr),
        Command::Fit { input, config, free, regime, out } => {
            let curve = load_curve(input)?;
            let stack = load_config(config, cli.verbose, stderr)?.stack;
            let free = parse_free_list(free)?;
            let regime = parse_regime(regime)?;
            let result = fit_cv_in_regime(&curve, &stack, &free, regime)?;
            if !result.converged {
                let _ = writeln!(
                    stderr,
                    "warning: stopped after {} iterations without meeting the \
                     improvement tolerance",
                    result.iterations
                );
            }
            let mut text = String::new();
            text.push_str(&format!("t_ox = {} nm\n", format_compact(result.oxide_thickness_nm)));
            text.push_str(&format!("area = {} cm2\n", format_compact(result.area)));
            if let Some(doping) = result.doping {
                text.push_str(&format!("doping = {} per_cm3\n", format_compact(doping)));
            }
            if let Some(flat_band) = result.flat_band {
                text.push_str(&format!("flat_band = {} V\n", format_compact(flat_band)));
            }
            text.push_str(&format!("residual_rms = {} F\n", format_compact(result.residual_rms)));
            text.push_str(&format!("iterations = {}\n", result.iterations));
            text.push_str(&format!("converged = {}\n", result.converged));
            emit(out.as_ref(), stdout, &text)
        }
        Command::Plot { inputs, out } => {
            let mut series = Vec::with_capacity(inputs.len());
            for path in inputs {
                let curve = load_curve(path)?;
                let label = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                series.push(svg::Series {
                    label,
                    points: curve
                        .points()
                        .iter()
                        .map(|p| (p.bias, p.capacitance / F_PER_PF))
                        .collect(),
                });
            }
            let doc = svg::render(&series, "gate bias [V]", "capacitance [pF]")?;
            emit(out.as_ref(), stdout, &doc)
        }
        Command::Reference { structure } => {
            let structures: Vec<ReferenceStructure> = match structure {
                Some(name) => vec![ReferenceStructure::parse(name).ok_or_else(|| {
                    usage(format!(
                        "unknown structure {name:?}, expected al_p_plus, al_n_plus, \
                         or metal1_metal2"
                    ))
                })?],
                None => ReferenceStructure::ALL.to_vec(),
            };
            for (index, s) in structures.iter().enumerate() {
                if index > 0 {
                    say(stdout, String::new())?;
                }
                let (stack, series) = reference_curves(*s);
                let rows = series.compare(&stack)?;
                say(stdout, format!("structure: {}", s.as_str()))?;
                say(
                    stdout,
                    format!(
                        "headline: {} pF at 500 nm",
                        format_trimmed(series.headline / F_PER_PF, 6)
                    ),
                )?;
                say(
                    stdout,
                    format!(
                        "{:>14}  {:>14}  {:>14}  {:>14}",
                        "thickness [nm]", "reported [pF]", "predicted [pF]", "deviation [%]"
                    ),
                )?;
                for row in rows {
                    let signed = (row.predicted - row.reported) / row.reported * 100.0;
                    say(
                        stdout,
                        format!(
                            "{:>14}  {:>14.2}  {:>14.2}  {:>14}",
                            format_trimmed(row.thickness_nm, 0),
                            row.reported / F_PER_PF,
                            row.predicted / F_PER_PF,
                            format!("{signed:+.2}")
                        ),
                    )?;
                }
            }
            Ok(())
        }
    }
}

fn dispatch_extract(
    what: &ExtractCommand,
    verbose: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let say = |stdout: &mut dyn Write, line: String| -> Result<(), CliError> {
        writeln!(stdout, "{line}").map_err(|source| CliError::Io {
            path: "<stdout>".to_string(),
            source,
        })
    };
    match what {
        ExtractCommand::Tox { cox, input, polarity, area, epsilon_r } => {
            let c_ox = resolve_cox(cox.as_deref(), input.as_ref(), polarity)?;
            let area = parse_area_cm2(area).map_err(usage)?;
            let thickness = extract_tox(c_ox, area, *epsilon_r)?;
            say(stdout, format!("oxide thickness: {} nm", format_compact(thickness / CM_PER_NM)))
        }
        ExtractCommand::Area { cox, input, polarity, tox, epsilon_r } => {
            let c_ox = resolve_cox(cox.as_deref(), input.as_ref(), polarity)?;
            let thickness = parse_length_cm(tox).map_err(usage)?;
            let area = extract_area(c_ox, thickness, *epsilon_r)?;
            say(stdout, format!("gate area: {} cm2", format_compact(area)))
        }
        ExtractCommand::Doping { cox, cmin, input, polarity, area } => {
            let area = parse_area_cm2(area).map_err(usage)?;
            let (c_ox, c_min) = match (cox, cmin, input) {
                (Some(cox), Some(cmin), None) => (
                    parse_capacitance_f(cox).map_err(usage)?,
                    parse_capacitance_f(cmin).map_err(usage)?,
                ),
                (None, None, Some(path)) => {
                    let curve = load_curve(path)?;
                    let c_ox = extract_oxide_capacitance(&curve, parse_polarity(polarity)?)?;
                    (c_ox, curve.min_capacitance())
                }
                _ => return Err(usage("pass either --cox with --cmin, or --input")),
            };
            let doping = extract_doping_maxmin(c_ox, c_min, area)?;
            say(stdout, format!("substrate doping: {} per_cm3", format_compact(doping)))
        }
        ExtractCommand::Junction { markers, profile } => {
            let markers = match profile {
                Some(path) => {
                    let text = read_file(path)?;
                    let profile =
                        csvio::parse_profile(&text, &path.display().to_string())?;
                    detect_markers(&profile)?
                }
                None => ThreePointMarkers::new(markers[0], markers[1], markers[2])?,
            };
            if verbose {
                let _ = writeln!(
                    stderr,
                    "markers: onset {} um, minimum {} um, saturation {} um",
                    format_compact(markers.x1_onset),
                    format_compact(markers.x2_minimum),
                    format_compact(markers.x3_saturation)
                );
            }
            say(stdout, format!("{} um", format_trimmed(junction_depth(&markers), 6)))
        }
        ExtractCommand::Profile { input, area, out } => {
            let curve = load_curve(input)?;
            let area = parse_area_cm2(area).map_err(usage)?;
            let profile = doping_profile_from_cv(&curve, area)?;
            if verbose {
                let depths: Vec<f64> =
                    profile.points().iter().map(|p| p.depth / CM_PER_UM).collect();
                let _ = writeln!(
                    stderr,
                    "profile: {} points, depth {} um to {} um",
                    profile.len(),
                    format_compact(depths[0]),
                    format_compact(*depths.last().expect("profile is non-empty"))
                );
            }
            emit(out.as_ref(), stdout, &csvio::write_profile(&profile))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_vec(args: &[&str]) -> (i32, String, String) {
        let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(&argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn trimming_drops_trailing_zeros_only() {
        assert_eq!(format_trimmed(0.7999999999999999, 6), "0.8");
        assert_eq!(format_trimmed(2.0, 6), "2");
        assert_eq!(format_trimmed(-0.0000001, 6), "0");
        assert_eq!(format_trimmed(1.25, 6), "1.25");
        assert_eq!(format_trimmed(150.0, 0), "150");
    }

    #[test]
    fn compact_switches_to_exponent_form_outside_the_mid_range() {
        assert_eq!(format_compact(0.0), "0");
        assert_eq!(format_compact(0.8), "0.8");
        assert_eq!(format_compact(-5.0), "-5");
        assert_eq!(format_compact(2.862e-11), "2.862e-11");
        assert_eq!(format_compact(1e16), "1e16");
        assert_eq!(format_compact(9.999999999e15), "1e16");
        assert_eq!(format_compact(28.62), "28.62");
        assert_eq!(format_compact(-3.5e-9), "-3.5e-9");
    }

    #[test]
    fn junction_markers_print_a_trimmed_depth() {
        let (code, out, err) = run_vec(&["moscap", "extract", "junction", "0.65", "1.25", "1.45"]);
        assert_eq!(code, 0, "stderr: {err}");
        assert_eq!(out, "0.8 um\n");
        assert!(err.is_empty());
    }

    #[test]
    fn help_goes_to_stdout_with_exit_zero() {
        let (code, out, err) = run_vec(&["moscap", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("Usage"));
        assert!(err.is_empty());
    }

    #[test]
    fn unknown_subcommand_is_a_usage_error() {
        let (code, out, err) = run_vec(&["moscap", "frobnicate"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert!(err.contains("Usage") || err.contains("unrecognized"), "{err}");
    }

    #[test]
    fn doping_from_inconsistent_pair_is_invalid_input() {
        let (code, _, err) = run_vec(&[
            "moscap", "extract", "doping", "--cox", "10 pF", "--cmin", "12 pF", "--area", "1e-3",
        ]);
        assert_eq!(code, 3, "stderr: {err}");
        assert!(err.starts_with("error: "), "{err}");
    }

    #[test]
    fn extract_tox_inverts_a_known_capacitance() {
        let (code, out, _) = run_vec(&[
            "moscap", "extract", "tox", "--cox", "28.62 pF", "--area", "4.146023468057367e-3",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "oxide thickness: 500 nm\n");
    }
}
