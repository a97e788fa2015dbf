//! Least-squares extraction of stack parameters from a measured curve.
//!
//! A damped Gauss-Newton iteration adjusts the selected free parameters
//! of a starting stack until the model curve matches the measurement.
//! Doping is searched in log space; every parameter is kept inside a
//! fixed physical box so a wild step cannot leave the model's domain.

use crate::constants::CM_PER_NM;
use crate::curve::{CVCurve, Regime};
use crate::device::{DeviceStack, OxideSpec, StackKind, SubstrateSpec};
use crate::error::{Error, Result};
use crate::model;

/// Iteration cap of the Gauss-Newton loop.
pub const MAX_FIT_ITERATIONS: usize = 100;

/// Relative sum-of-squares improvement below which the fit is declared
/// converged.
pub const RELATIVE_IMPROVEMENT_TOLERANCE: f64 = 1e-8;

/// Relative forward-difference step used for the Jacobian.
const JACOBIAN_RELATIVE_STEP: f64 = 1e-4;

/// Deepest backtracking halving tried before a step is given up.
const MAX_BACKTRACK_HALVINGS: usize = 26;

/// Stack parameter a fit is allowed to move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeParameter {
    /// Oxide thickness, searched in [1 nm, 10 um].
    OxideThickness,
    /// Gate area, searched in [1e-8, 1] cm^2.
    Area,
    /// Substrate doping, searched logarithmically in [1e13, 1e20] cm^-3.
    Doping,
    /// Flat-band voltage, searched in [-10, 10] V. Moving it adjusts the
    /// work-function difference while the fixed oxide charge stays put.
    FlatBand,
}

impl FreeParameter {
    /// Name used in diagnostics and rank-deficiency reports.
    pub fn name(self) -> &'static str {
        match self {
            FreeParameter::OxideThickness => "oxide_thickness",
            FreeParameter::Area => "area",
            FreeParameter::Doping => "doping",
            FreeParameter::FlatBand => "flat_band",
        }
    }

    /// Search box in solver coordinates (doping is ln N).
    fn bounds(self) -> (f64, f64) {
        match self {
            FreeParameter::OxideThickness => (1e-7, 1e-3),
            FreeParameter::Area => (1e-8, 1.0),
            FreeParameter::Doping => (1e13f64.ln(), 1e20f64.ln()),
            FreeParameter::FlatBand => (-10.0, 10.0),
        }
    }

    /// Smallest magnitude the relative Jacobian step is taken against,
    /// so a parameter sitting at zero still gets a finite probe.
    fn step_floor(self) -> f64 {
        match self {
            FreeParameter::OxideThickness => 1e-6,
            FreeParameter::Area => 1e-5,
            FreeParameter::Doping => 1.0,
            FreeParameter::FlatBand => 1.0,
        }
    }

    /// Solver-space value of this parameter on a stack.
    fn read(self, stack: &DeviceStack) -> Result<f64> {
        match self {
            FreeParameter::OxideThickness => Ok(stack.oxide.thickness),
            FreeParameter::Area => Ok(stack.oxide.area),
            FreeParameter::Doping => {
                let sub = stack.require_substrate("doping fit")?;
                Ok(sub.doping.ln())
            }
            FreeParameter::FlatBand => model::flat_band_voltage(stack),
        }
    }
}

/// Parameters recovered by a fit, with convergence diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionResult {
    /// Oxide thickness [nm].
    pub oxide_thickness_nm: f64,
    /// Gate area [cm^2].
    pub area: f64,
    /// Substrate doping [cm^-3]; absent for metal-insulator-metal stacks.
    pub doping: Option<f64>,
    /// Flat-band voltage [V]; absent for metal-insulator-metal stacks.
    pub flat_band: Option<f64>,
    /// Root-mean-square residual of the final model against the data [F].
    pub residual_rms: f64,
    /// Accepted Gauss-Newton steps.
    pub iterations: usize,
    /// True when the relative improvement criterion was met before the
    /// iteration cap.
    pub converged: bool,
}

fn result_from(
    stack: &DeviceStack,
    sum_squares: f64,
    n_points: usize,
    iterations: usize,
    converged: bool,
) -> ExtractionResult {
    ExtractionResult {
        oxide_thickness_nm: stack.oxide.thickness / CM_PER_NM,
        area: stack.oxide.area,
        doping: stack.substrate.as_ref().map(|s| s.doping),
        flat_band: model::flat_band_voltage(stack).ok(),
        residual_rms: (sum_squares / n_points as f64).sqrt(),
        iterations,
        converged,
    }
}

/// Rebuilds the stack with the solver coordinates written into it.
///
/// Flat band is applied last: it moves the work-function difference so
/// that the resulting flat-band voltage equals the parameter even when
/// the oxide thickness changed in the same step.
fn apply(base: &DeviceStack, free: &[FreeParameter], x: &[f64]) -> Result<DeviceStack> {
    let mut thickness = base.oxide.thickness;
    let mut area = base.oxide.area;
    let mut doping = base.substrate.as_ref().map(|s| s.doping);
    let mut flat_band = None;
    for (&p, &v) in free.iter().zip(x) {
        match p {
            FreeParameter::OxideThickness => thickness = v,
            FreeParameter::Area => area = v,
            FreeParameter::Doping => doping = Some(v.exp()),
            FreeParameter::FlatBand => flat_band = Some(v),
        }
    }
    let oxide = OxideSpec::new(thickness, area, base.oxide.relative_permittivity)?;
    match base.kind {
        StackKind::MetalInsulatorMetal => {
            Ok(DeviceStack::metal_insulator_metal(oxide, base.constants))
        }
        StackKind::Mos => {
            let sub = base.substrate.as_ref().expect("mos stack carries a substrate");
            let substrate =
                SubstrateSpec::new(sub.polarity, doping.expect("mos doping"), &base.constants)?;
            let mut workfunction = base.workfunction_difference;
            if let Some(v_fb) = flat_band {
                let cox_per_area = base.constants.vacuum_permittivity
                    * oxide.relative_permittivity
                    / oxide.thickness;
                workfunction = v_fb + base.fixed_oxide_charge / cox_per_area;
            }
            DeviceStack::mos(
                oxide,
                substrate,
                workfunction,
                base.fixed_oxide_charge,
                base.constants,
            )
        }
    }
}

/// Solves (J^T J) delta = -J^T r through a Cholesky factorization of the
/// correlation-scaled normal matrix. A failing pivot names the parameter
/// pair the data cannot tell apart.
fn solve_normal_equations(
    free: &[FreeParameter],
    jtj: &[Vec<f64>],
    neg_gradient: &[f64],
) -> Result<Vec<f64>> {
    let n = free.len();
    let mut scale = vec![0.0; n];
    for j in 0..n {
        let diag = jtj[j][j];
        if diag <= 0.0 || !diag.is_finite() {
            // The column is identically zero: the data never reacts to
            // this parameter at all.
            return Err(Error::RankDeficient { parameters: vec![free[j].name()] });
        }
        scale[j] = diag.sqrt();
    }
    let mut corr = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            corr[i][j] = jtj[i][j] / (scale[i] * scale[j]);
        }
    }
    let mut lower = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = corr[i][j];
            for (left, right) in lower[i][..j].iter().zip(&lower[j][..j]) {
                sum -= left * right;
            }
            if i == j {
                if sum < 1e-12 {
                    // The pivot collapsed: column i is numerically a
                    // combination of the earlier ones. Report it with
                    // its most correlated partner.
                    let partner = (0..i).max_by(|&a, &b| {
                        corr[i][a]
                            .abs()
                            .partial_cmp(&corr[i][b].abs())
                            .expect("correlations are finite")
                    });
                    let mut parameters = vec![free[i].name()];
                    if let Some(p) = partner {
                        parameters.insert(0, free[p].name());
                    }
                    return Err(Error::RankDeficient { parameters });
                }
                lower[i][j] = sum.sqrt();
            } else {
                lower[i][j] = sum / lower[j][j];
            }
        }
    }
    let mut forward = vec![0.0; n];
    for i in 0..n {
        let mut sum = neg_gradient[i] / scale[i];
        for k in 0..i {
            sum -= lower[i][k] * forward[k];
        }
        forward[i] = sum / lower[i][i];
    }
    let mut back = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = forward[i];
        for k in i + 1..n {
            sum -= lower[k][i] * back[k];
        }
        back[i] = sum / lower[i][i];
    }
    Ok((0..n).map(|j| back[j] / scale[j]).collect())
}

fn clamp_into(free: &[FreeParameter], x: &mut [f64]) {
    for (p, v) in free.iter().zip(x.iter_mut()) {
        let (lo, hi) = p.bounds();
        *v = v.clamp(lo, hi);
    }
}

/// Fits the free parameters against a high-frequency model curve.
///
/// Shorthand for [`fit_cv_in_regime`] with the high-frequency regime,
/// which is what capacitance bridges measure.
pub fn fit_cv(
    measured: &CVCurve,
    initial: &DeviceStack,
    free: &[FreeParameter],
) -> Result<ExtractionResult> {
    fit_cv_in_regime(measured, initial, free, Regime::HighFrequency)
}

/// Fits the free parameters with the model evaluated in a chosen regime.
pub fn fit_cv_in_regime(
    measured: &CVCurve,
    initial: &DeviceStack,
    free: &[FreeParameter],
    regime: Regime,
) -> Result<ExtractionResult> {
    Ok(fit_cv_with_trace(measured, initial, free, regime)?.0)
}

/// Like [`fit_cv_in_regime`], additionally returning the residual rms
/// after the initial evaluation and after each accepted step.
pub fn fit_cv_with_trace(
    measured: &CVCurve,
    initial: &DeviceStack,
    free: &[FreeParameter],
    regime: Regime,
) -> Result<(ExtractionResult, Vec<f64>)> {
    if regime == Regime::RawMeasurement {
        return Err(Error::invalid(
            "the fit needs a model regime to evaluate against".to_string(),
        ));
    }
    for i in 0..free.len() {
        for j in i + 1..free.len() {
            if free[i] == free[j] {
                return Err(Error::invalid(format!(
                    "free parameter {} listed twice",
                    free[i].name()
                )));
            }
        }
    }
    if initial.substrate.is_none() {
        for p in free {
            if matches!(p, FreeParameter::Doping | FreeParameter::FlatBand) {
                return Err(Error::Unsupported {
                    operation: match p {
                        FreeParameter::Doping => "doping fit",
                        _ => "flat-band fit",
                    },
                    kind: initial.kind.as_str(),
                });
            }
        }
    }
    let n_points = measured.len();
    // An overdetermined system needs at least twice as many observations
    // as unknowns before the residual says anything about the fit.
    if n_points < 2 * free.len() {
        return Err(Error::InsufficientData { needed: 2 * free.len(), got: n_points });
    }
    let biases: Vec<f64> = measured.points().iter().map(|p| p.bias).collect();
    let targets: Vec<f64> = measured.points().iter().map(|p| p.capacitance).collect();
    let residuals = |stack: &DeviceStack| -> Result<Vec<f64>> {
        let curve = model::cv_curve(stack, &biases, regime)?;
        Ok(curve
            .points()
            .iter()
            .zip(&targets)
            .map(|(p, &t)| p.capacitance - t)
            .collect())
    };

    let mut x = free.iter().map(|p| p.read(initial)).collect::<Result<Vec<f64>>>()?;
    clamp_into(free, &mut x);
    let mut stack = apply(initial, free, &x)?;
    let mut residual = residuals(&stack)?;
    let mut sum_squares: f64 = residual.iter().map(|r| r * r).sum();
    if !sum_squares.is_finite() {
        return Err(Error::FitDiverged {
            reason: "initial residuals are not finite".to_string(),
            best: Box::new(result_from(&stack, sum_squares, n_points, 0, false)),
        });
    }
    let mut trace = vec![(sum_squares / n_points as f64).sqrt()];
    let mut iterations = 0;
    let mut converged = free.is_empty();

    let n = free.len();
    if n > 0 {
        for _ in 0..MAX_FIT_ITERATIONS {
            // Forward-difference Jacobian, stepping inward when a
            // parameter sits against its upper bound.
            let mut columns = Vec::with_capacity(n);
            for j in 0..n {
                let h = JACOBIAN_RELATIVE_STEP * x[j].abs().max(free[j].step_floor());
                let (_, hi) = free[j].bounds();
                let probe = if x[j] + h <= hi { x[j] + h } else { x[j] - h };
                let mut x_probe = x.clone();
                x_probe[j] = probe;
                let diverged = |e: Error, stack: &DeviceStack| Error::FitDiverged {
                    reason: format!("jacobian probe of {} failed: {e}", free[j].name()),
                    best: Box::new(result_from(stack, sum_squares, n_points, iterations, false)),
                };
                let stack_probe =
                    apply(initial, free, &x_probe).map_err(|e| diverged(e, &stack))?;
                let r_probe = residuals(&stack_probe).map_err(|e| diverged(e, &stack))?;
                let inv = 1.0 / (probe - x[j]);
                columns.push(
                    r_probe
                        .iter()
                        .zip(&residual)
                        .map(|(a, b)| (a - b) * inv)
                        .collect::<Vec<f64>>(),
                );
            }
            let mut jtj = vec![vec![0.0; n]; n];
            let mut neg_gradient = vec![0.0; n];
            for i in 0..n {
                for j in i..n {
                    let dot: f64 =
                        columns[i].iter().zip(&columns[j]).map(|(a, b)| a * b).sum();
                    jtj[i][j] = dot;
                    jtj[j][i] = dot;
                }
                neg_gradient[i] =
                    -columns[i].iter().zip(&residual).map(|(a, b)| a * b).sum::<f64>();
            }
            let delta = solve_normal_equations(free, &jtj, &neg_gradient)?;

            // Backtracking line search on the sum of squares.
            let mut accepted = None;
            let mut step = 1.0;
            for _ in 0..MAX_BACKTRACK_HALVINGS {
                let mut x_new: Vec<f64> =
                    x.iter().zip(&delta).map(|(v, d)| v + step * d).collect();
                clamp_into(free, &mut x_new);
                step *= 0.5;
                if x_new == x {
                    // The whole step was clipped away by the bounds.
                    continue;
                }
                let Ok(stack_new) = apply(initial, free, &x_new) else { continue };
                let Ok(r_new) = residuals(&stack_new) else { continue };
                let ss_new: f64 = r_new.iter().map(|r| r * r).sum();
                if ss_new.is_finite() && ss_new < sum_squares {
                    accepted = Some((x_new, stack_new, r_new, ss_new));
                    break;
                }
            }
            let Some((x_new, stack_new, r_new, ss_new)) = accepted else {
                // No damping level improves the fit: stationary within
                // float resolution.
                converged = true;
                break;
            };
            let improvement = (sum_squares - ss_new) / sum_squares;
            x = x_new;
            stack = stack_new;
            residual = r_new;
            sum_squares = ss_new;
            iterations += 1;
            trace.push((sum_squares / n_points as f64).sqrt());
            if improvement < RELATIVE_IMPROVEMENT_TOLERANCE {
                converged = true;
                break;
            }
        }
    }
    let _ = &residual;
    Ok((result_from(&stack, sum_squares, n_points, iterations, converged), trace))
}
