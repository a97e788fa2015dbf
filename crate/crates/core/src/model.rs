//! Forward C-V model: oxide electrostatics, surface potential, and
//! regime-resolved capacitance curves.
//!
//! Internally everything is evaluated in a reflected frame where the
//! depletion direction is positive regardless of substrate polarity:
//! p-type quantities are used as-is, n-type quantities are mirrored
//! through `Polarity::sign`. Public functions accept and return values
//! in the unreflected lab frame.

use crate::curve::{CVCurve, CVPoint, Regime};
use crate::device::DeviceStack;
use crate::error::{Error, Result};

/// Residual tolerance of the surface-potential balance [V].
pub const SURFACE_POTENTIAL_TOLERANCE: f64 = 1e-9;

/// Iteration cap of the surface-potential bisection.
pub const SURFACE_POTENTIAL_MAX_ITERATIONS: usize = 200;

/// Oxide capacitance of the stack [F]: eps0 * eps_r * A / t_ox.
pub fn oxide_capacitance(stack: &DeviceStack) -> f64 {
    oxide_capacitance_per_area(stack) * stack.oxide.area
}

/// Oxide capacitance per unit area [F/cm^2].
pub fn oxide_capacitance_per_area(stack: &DeviceStack) -> f64 {
    stack.constants.vacuum_permittivity * stack.oxide.relative_permittivity
        / stack.oxide.thickness
}

/// Series combination of two capacitances [F]: C1*C2 / (C1 + C2).
///
/// Both inputs must be positive; the result never exceeds the smaller
/// of the two.
pub fn series_capacitance(c1: f64, c2: f64) -> Result<f64> {
    if c1 <= 0.0 || c2 <= 0.0 || !c1.is_finite() || !c2.is_finite() {
        return Err(Error::invalid(format!(
            "series capacitance needs two positive finite values, got {c1} F and {c2} F"
        )));
    }
    Ok(c1 * c2 / (c1 + c2))
}

/// Bulk potential phi_F [V]: (kT/q) * ln(N / n_i), positive for both
/// polarities.
pub fn bulk_potential(stack: &DeviceStack) -> Result<f64> {
    let sub = stack.require_substrate("bulk potential")?;
    let c = &stack.constants;
    Ok(c.thermal_voltage * (sub.doping / c.intrinsic_concentration).ln())
}

/// Body factor gamma [V^1/2]: sqrt(2 q eps_s N) / C_ox'.
pub fn body_factor(stack: &DeviceStack) -> Result<f64> {
    let sub = stack.require_substrate("body factor")?;
    let c = &stack.constants;
    let depletion_charge_scale =
        (2.0 * c.elementary_charge * c.semiconductor_permittivity() * sub.doping).sqrt();
    Ok(depletion_charge_scale / oxide_capacitance_per_area(stack))
}

/// Flat-band voltage [V]: workfunction difference minus the fixed oxide
/// charge referred to the oxide capacitance.
pub fn flat_band_voltage(stack: &DeviceStack) -> Result<f64> {
    stack.require_substrate("flat-band voltage")?;
    Ok(stack.workfunction_difference
        - stack.fixed_oxide_charge / oxide_capacitance_per_area(stack))
}

/// Widest equilibrium depletion region [cm]: sqrt(2 eps_s (2 phi_F) / (q N)).
pub fn max_depletion_width(stack: &DeviceStack) -> Result<f64> {
    let sub = stack.require_substrate("maximum depletion width")?;
    let c = &stack.constants;
    let phi_f = bulk_potential(stack)?;
    Ok((2.0 * c.semiconductor_permittivity() * (2.0 * phi_f)
        / (c.elementary_charge * sub.doping))
        .sqrt())
}

/// Depletion width at a given surface potential [cm], clamped at the
/// equilibrium maximum.
///
/// The surface potential must point toward depletion: non-negative for a
/// p-substrate, non-positive for an n-substrate.
pub fn depletion_width(stack: &DeviceStack, surface_potential: f64) -> Result<f64> {
    let sub = stack.require_substrate("depletion width")?;
    let psi = sub.polarity.sign() * surface_potential;
    if psi < 0.0 {
        return Err(Error::invalid(format!(
            "depletion width needs a surface potential toward depletion; \
             {surface_potential} V is on the accumulation side for a \
             {}-substrate",
            sub.polarity.as_str()
        )));
    }
    let c = &stack.constants;
    let w = (2.0 * c.semiconductor_permittivity() * psi / (c.elementary_charge * sub.doping))
        .sqrt();
    Ok(w.min(max_depletion_width(stack)?))
}

/// Depletion-layer capacitance at a given surface potential [F]:
/// eps_s A / W with the clamped width.
pub fn depletion_capacitance(stack: &DeviceStack, surface_potential: f64) -> Result<f64> {
    let w = depletion_width(stack, surface_potential)?;
    if w <= 0.0 {
        return Err(Error::invalid(
            "depletion capacitance diverges at zero surface potential".to_string(),
        ));
    }
    Ok(stack.constants.semiconductor_permittivity() * stack.oxide.area / w)
}

/// Threshold voltage [V]: flat band plus twice the bulk potential plus
/// the body-factor term, signed by polarity.
pub fn threshold_voltage(stack: &DeviceStack) -> Result<f64> {
    let sub = stack.require_substrate("threshold voltage")?;
    let v_fb = flat_band_voltage(stack)?;
    let phi_f = bulk_potential(stack)?;
    let gamma = body_factor(stack)?;
    let onset = 2.0 * phi_f + gamma * (2.0 * phi_f).sqrt();
    Ok(v_fb + sub.polarity.sign() * onset)
}

/// Minimum high-frequency capacitance [F]: the oxide capacitance in
/// series with the depletion capacitance at maximum width.
pub fn c_min(stack: &DeviceStack) -> Result<f64> {
    stack.require_substrate("minimum capacitance")?;
    let c_ox = oxide_capacitance(stack);
    let w = max_depletion_width(stack)?;
    let c_d = stack.constants.semiconductor_permittivity() * stack.oxide.area / w;
    series_capacitance(c_ox, c_d)
}

/// Precomputed per-stack quantities shared by the solver and the curve
/// generator. All fields are in the reflected frame where depletion is
/// the positive direction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MosParams {
    /// Polarity sign: +1 for p, -1 for n.
    pub sign: f64,
    /// Elementary charge times net doping [C/cm^3].
    pub charge_density: f64,
    /// Bulk potential [V], positive.
    pub phi_f: f64,
    /// Body factor [V^1/2].
    pub gamma: f64,
    /// Extrinsic Debye length [cm].
    pub debye_length: f64,
    /// (n_i / N)^2, the minority-to-majority equilibrium ratio.
    pub minority_ratio_sq: f64,
    /// Oxide capacitance per area [F/cm^2].
    pub cox_per_area: f64,
    /// Semiconductor permittivity [F/cm].
    pub eps_semi: f64,
    /// Thermal voltage [V].
    pub phi_t: f64,
    /// Flat-band voltage [V], lab frame.
    pub v_fb: f64,
}

impl MosParams {
    pub(crate) fn from_stack(stack: &DeviceStack, operation: &'static str) -> Result<Self> {
        let sub = stack.require_substrate(operation)?;
        let c = &stack.constants;
        let eps_semi = c.semiconductor_permittivity();
        let ratio = c.intrinsic_concentration / sub.doping;
        Ok(Self {
            sign: sub.polarity.sign(),
            charge_density: c.elementary_charge * sub.doping,
            phi_f: bulk_potential(stack)?,
            gamma: body_factor(stack)?,
            debye_length: (eps_semi * c.thermal_voltage
                / (c.elementary_charge * sub.doping))
                .sqrt(),
            minority_ratio_sq: ratio * ratio,
            cox_per_area: oxide_capacitance_per_area(stack),
            eps_semi,
            phi_t: c.thermal_voltage,
            v_fb: flat_band_voltage(stack)?,
        })
    }

    /// Gate charge per area balancing the semiconductor at a reflected
    /// surface potential [C/cm^2]. Single-level Boltzmann statistics:
    /// the accumulation exponential, the depletion ramp, and the
    /// inversion exponential all live in one expression.
    fn gate_charge_equilibrium(&self, psi: f64) -> f64 {
        let u = psi / self.phi_t;
        // expm1 keeps the quadratic flat-band limit accurate where the
        // direct exponentials would cancel catastrophically.
        let majority = (-u).exp_m1() + u;
        let minority = self.minority_ratio_sq * (u.exp_m1() - u);
        let g = majority + minority;
        let magnitude = std::f64::consts::SQRT_2 * self.eps_semi * self.phi_t
            / self.debye_length
            * g.max(0.0).sqrt();
        magnitude.copysign(psi)
    }

    /// Semiconductor small-signal capacitance per area at a reflected
    /// surface potential [F/cm^2], from the same charge expression.
    fn semiconductor_capacitance(&self, psi: f64) -> f64 {
        let u = psi / self.phi_t;
        let g = ((-u).exp_m1() + u) + self.minority_ratio_sq * (u.exp_m1() - u);
        let g_slope = -(-u).exp_m1() + self.minority_ratio_sq * u.exp_m1();
        self.eps_semi / (std::f64::consts::SQRT_2 * self.debye_length)
            * g_slope.abs()
            / g.max(f64::MIN_POSITIVE).sqrt()
    }

    /// Residual of the equilibrium gate balance at a reflected surface
    /// potential, for a reflected overdrive `v = sign * (V_g - V_fb)`.
    fn equilibrium_residual(&self, psi: f64, v: f64) -> f64 {
        psi + self.gate_charge_equilibrium(psi) / self.cox_per_area - v
    }

    /// Residual of the depletion-approximation balance: v = psi + gamma sqrt(psi).
    fn depletion_residual(&self, psi: f64, v: f64) -> f64 {
        psi + self.gamma * psi.sqrt() - v
    }
}

/// Solves the implicit gate balance V_g = V_fb + psi_s + Q_gate/C_ox'
/// with full Boltzmann semiconductor charge [V].
///
/// Bisection over [-(2 phi_F + 1), +(2 phi_F + 1)] with a single bracket
/// expansion, residual tolerance 1e-9 V, at most 200 iterations.
pub fn surface_potential(stack: &DeviceStack, gate_voltage: f64) -> Result<f64> {
    let p = MosParams::from_stack(stack, "surface potential")?;
    if !gate_voltage.is_finite() {
        return Err(Error::invalid(format!(
            "gate voltage must be finite, got {gate_voltage} V"
        )));
    }
    let v = p.sign * (gate_voltage - p.v_fb);
    let psi = solve_equilibrium(&p, v, gate_voltage)?;
    Ok(p.sign * psi)
}

fn solve_equilibrium(p: &MosParams, v: f64, bias_for_context: f64) -> Result<f64> {
    let reach = 2.0 * p.phi_f + 1.0;
    let (mut lo, mut hi) = (-reach, reach);
    if p.equilibrium_residual(lo, v) > 0.0 || p.equilibrium_residual(hi, v) < 0.0 {
        // One-time expansion: |psi| can never exceed the overdrive, so
        // widening by it always restores the bracket for finite inputs.
        lo = -(reach + v.abs());
        hi = reach + v.abs();
        if p.equilibrium_residual(lo, v) > 0.0 || p.equilibrium_residual(hi, v) < 0.0 {
            return Err(Error::Convergence {
                context: format!("surface potential at {bias_for_context} V"),
                bracket_low: lo,
                bracket_high: hi,
            });
        }
    }
    bisect(
        |psi| p.equilibrium_residual(psi, v),
        lo,
        hi,
        SURFACE_POTENTIAL_TOLERANCE,
        SURFACE_POTENTIAL_MAX_ITERATIONS,
        || format!("surface potential at {bias_for_context} V"),
    )
}

/// Solves the depletion-approximation balance v = psi + gamma sqrt(psi)
/// for psi >= 0 in the reflected frame. `v` must be positive.
fn solve_depletion(p: &MosParams, v: f64, bias_for_context: f64) -> Result<f64> {
    debug_assert!(v > 0.0);
    // psi = v is already past the root since gamma sqrt(v) > 0.
    bisect(
        |psi| p.depletion_residual(psi, v),
        0.0,
        v,
        SURFACE_POTENTIAL_TOLERANCE,
        SURFACE_POTENTIAL_MAX_ITERATIONS,
        || format!("depletion balance at {bias_for_context} V"),
    )
}

/// Bisection on a monotone residual: converges on |f| < tol, errors with
/// the last bracket when the iteration budget or float resolution runs
/// out first.
fn bisect(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iterations: usize,
    context: impl Fn() -> String,
) -> Result<f64> {
    let f_lo = f(lo);
    if f_lo.abs() < tol {
        return Ok(lo);
    }
    if f(hi).abs() < tol {
        return Ok(hi);
    }
    let low_is_negative = f_lo < 0.0;
    for _ in 0..max_iterations {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            // Bracket collapsed to adjacent floats without meeting the
            // residual tolerance.
            break;
        }
        let f_mid = f(mid);
        if f_mid.abs() < tol {
            return Ok(mid);
        }
        if (f_mid < 0.0) == low_is_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Convergence {
        context: context(),
        bracket_low: lo,
        bracket_high: hi,
    })
}

/// Per-bias capacitance dispatch shared by the three model regimes.
fn capacitance_at(p: &MosParams, area: f64, bias: f64, regime: Regime) -> Result<f64> {
    let c_ox = p.cox_per_area * area;
    let v = p.sign * (bias - p.v_fb);
    if v <= 0.0 {
        // Accumulation: the majority-carrier sheet pins the surface and
        // only the oxide is visible.
        return Ok(c_ox);
    }
    let psi = solve_depletion(p, v, bias)?;
    let two_phi_f = 2.0 * p.phi_f;
    let depletion_c = |psi: f64| -> f64 {
        if psi <= 0.0 {
            return c_ox;
        }
        let w = (2.0 * p.eps_semi * psi / p.charge_density).sqrt();
        let c_d = p.eps_semi * area / w;
        c_ox * c_d / (c_ox + c_d)
    };
    if psi <= two_phi_f || regime == Regime::DeepDepletion {
        // The depletion expression owns the closed window up to 2 phi_F;
        // deep depletion keeps following it with no clamp.
        return Ok(depletion_c(psi));
    }
    match regime {
        Regime::HighFrequency => {
            // Inversion charge cannot follow the signal: the depletion
            // width stays clamped at its equilibrium maximum.
            Ok(depletion_c(two_phi_f))
        }
        Regime::LowFrequency => {
            let psi_eq = solve_equilibrium(p, v, bias)?;
            let c_sc = p.semiconductor_capacitance(psi_eq) * area;
            Ok(c_ox * c_sc / (c_ox + c_sc))
        }
        Regime::DeepDepletion | Regime::RawMeasurement => unreachable!(),
    }
}

/// Evaluates the model capacitance on a bias grid [F] and wraps it as a
/// curve tagged with the model regime.
///
/// The grid must be non-empty and strictly increasing. Raw-measurement
/// is a data tag, not a model, and is rejected here. For a
/// metal-insulator-metal stack every regime yields the flat oxide
/// capacitance.
pub fn cv_curve(stack: &DeviceStack, biases: &[f64], regime: Regime) -> Result<CVCurve> {
    if regime == Regime::RawMeasurement {
        return Err(Error::invalid(
            "raw-measurement tags captured data; pick a model regime".to_string(),
        ));
    }
    if biases.is_empty() {
        return Err(Error::invalid("bias grid is empty".to_string()));
    }
    if let Some(bad) = biases.iter().find(|b| !b.is_finite()) {
        return Err(Error::invalid(format!(
            "bias grid contains a non-finite value {bad}"
        )));
    }
    for pair in biases.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::invalid(format!(
                "bias grid must be strictly increasing, got {} V after {} V",
                pair[1], pair[0]
            )));
        }
    }
    let points = match stack.substrate {
        None => {
            let c_ox = oxide_capacitance(stack);
            biases
                .iter()
                .map(|&bias| CVPoint { bias, capacitance: c_ox })
                .collect()
        }
        Some(_) => {
            let p = MosParams::from_stack(stack, "cv curve")?;
            let mut pts = Vec::with_capacity(biases.len());
            for &bias in biases {
                let capacitance = capacitance_at(&p, stack.oxide.area, bias, regime)?;
                pts.push(CVPoint { bias, capacitance });
            }
            pts
        }
    };
    CVCurve::new(points, regime)
}

/// Convenience for tests and callers that need the model evaluated at a
/// single bias [F].
pub fn capacitance_at_bias(stack: &DeviceStack, bias: f64, regime: Regime) -> Result<f64> {
    match stack.substrate {
        None => Ok(oxide_capacitance(stack)),
        Some(_) => {
            let p = MosParams::from_stack(stack, "cv curve")?;
            capacitance_at(&p, stack.oxide.area, bias, regime)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::device::{OxideSpec, Polarity, SubstrateSpec};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    /// 1e16 cm^-3 p-substrate under 500 nm of oxide, zero gate terms.
    fn reference_mos(workfunction: f64, fixed_charge: f64) -> DeviceStack {
        let constants = PhysicalConstants::silicon_default();
        let oxide = OxideSpec::with_thickness_nm(500.0, 4.147e-3, 3.9).unwrap();
        let substrate = SubstrateSpec::new(Polarity::PType, 1e16, &constants).unwrap();
        DeviceStack::mos(oxide, substrate, workfunction, fixed_charge, constants).unwrap()
    }

    #[test]
    fn oxide_capacitance_of_calibrated_area() {
        let stack = reference_mos(0.0, 0.0);
        let c = oxide_capacitance(&stack);
        assert!(rel(c, 2.8626741e-11) < 1e-9);
        assert!(rel(c, 28.62e-12) < 1e-3);
    }

    #[test]
    fn oxide_capacitance_doubles_with_area() {
        let constants = PhysicalConstants::silicon_default();
        let a = OxideSpec::with_thickness_nm(500.0, 4.147e-3, 3.9).unwrap();
        let b = OxideSpec::with_thickness_nm(500.0, 2.0 * 4.147e-3, 3.9).unwrap();
        let sa = DeviceStack::metal_insulator_metal(a, constants);
        let sb = DeviceStack::metal_insulator_metal(b, constants);
        assert_eq!(2.0 * oxide_capacitance(&sa), oxide_capacitance(&sb));
    }

    #[test]
    fn series_of_reported_pair() {
        let c = series_capacitance(28.62e-12, 47e-12).unwrap();
        assert!(rel(c, 17.788151282729437e-12) < 1e-12);
        // 17.79 pF is the value rounded to four figures.
        assert!(rel(c, 17.79e-12) < 2e-4);
    }

    #[test]
    fn series_of_equal_capacitors_halves() {
        let c = series_capacitance(3e-12, 3e-12).unwrap();
        assert!(rel(c, 1.5e-12) < 1e-15);
    }

    #[test]
    fn series_rejects_nonpositive() {
        assert!(series_capacitance(0.0, 1e-12).is_err());
        assert!(series_capacitance(1e-12, -1.0).is_err());
    }

    #[test]
    fn bulk_potential_of_1e16() {
        let stack = reference_mos(0.0, 0.0);
        assert!(rel(bulk_potential(&stack).unwrap(), 0.35715857599399026) < 1e-12);
    }

    #[test]
    fn body_factor_of_1e16_under_500nm() {
        let stack = reference_mos(0.0, 0.0);
        assert!(rel(body_factor(&stack).unwrap(), 8.344434068393921) < 1e-12);
    }

    #[test]
    fn flat_band_with_fixed_charge() {
        let stack = reference_mos(-0.9, 6.903e-10);
        assert!((flat_band_voltage(&stack).unwrap() - (-1.0)).abs() < 1e-12);
    }

    #[test]
    fn flat_band_rejected_for_mim() {
        let oxide = OxideSpec::with_thickness_nm(500.0, 2.32e-3, 3.9).unwrap();
        let stack =
            DeviceStack::metal_insulator_metal(oxide, PhysicalConstants::silicon_default());
        assert!(matches!(
            flat_band_voltage(&stack),
            Err(Error::Unsupported { .. })
        ));
    }

    #[test]
    fn max_depletion_width_of_1e16() {
        let stack = reference_mos(0.0, 0.0);
        assert!(rel(max_depletion_width(&stack).unwrap(), 3.0385746225280978e-5) < 1e-12);
    }

    #[test]
    fn depletion_width_clamps_at_maximum() {
        let stack = reference_mos(0.0, 0.0);
        let w_max = max_depletion_width(&stack).unwrap();
        let w = depletion_width(&stack, 5.0).unwrap();
        assert_eq!(w, w_max);
        let w_half = depletion_width(&stack, bulk_potential(&stack).unwrap()).unwrap();
        assert!(rel(w_half, w_max / std::f64::consts::SQRT_2) < 1e-12);
    }

    #[test]
    fn depletion_width_rejects_accumulation_side() {
        let stack = reference_mos(0.0, 0.0);
        assert!(depletion_width(&stack, -0.1).is_err());
    }

    #[test]
    fn c_min_ratio_of_reference_stack() {
        let stack = reference_mos(0.0, 0.0);
        let ratio = c_min(&stack).unwrap() / oxide_capacitance(&stack);
        assert!(rel(ratio, 0.8315512901594083) < 1e-9);
    }

    #[test]
    fn threshold_voltage_of_reference_stack() {
        let stack = reference_mos(0.0, 0.0);
        assert!(rel(threshold_voltage(&stack).unwrap(), 7.766806302907708) < 1e-9);
    }

    #[test]
    fn threshold_voltage_mirrors_for_n_type() {
        let constants = PhysicalConstants::silicon_default();
        let oxide = OxideSpec::with_thickness_nm(500.0, 4.147e-3, 3.9).unwrap();
        let substrate = SubstrateSpec::new(Polarity::NType, 1e16, &constants).unwrap();
        let stack = DeviceStack::mos(oxide, substrate, 0.0, 0.0, constants).unwrap();
        assert!(rel(threshold_voltage(&stack).unwrap(), -7.766806302907708) < 1e-9);
    }

    #[test]
    fn higher_doping_raises_cmin_over_cox() {
        let constants = PhysicalConstants::silicon_default();
        let mut previous = 0.0;
        for doping in [1e14, 1e15, 1e16, 1e17, 1e18] {
            let oxide = OxideSpec::with_thickness_nm(500.0, 4.147e-3, 3.9).unwrap();
            let substrate = SubstrateSpec::new(Polarity::PType, doping, &constants).unwrap();
            let stack = DeviceStack::mos(oxide, substrate, 0.0, 0.0, constants).unwrap();
            let ratio = c_min(&stack).unwrap() / oxide_capacitance(&stack);
            assert!(ratio > previous);
            previous = ratio;
        }
    }

    #[test]
    fn surface_potential_is_zero_at_flat_band() {
        let stack = reference_mos(-0.9, 0.0);
        let psi = surface_potential(&stack, -0.9).unwrap();
        assert!(psi.abs() < 1e-9);
    }

    #[test]
    fn surface_potential_signs_follow_bias() {
        let stack = reference_mos(0.0, 0.0);
        assert!(surface_potential(&stack, -2.0).unwrap() < 0.0);
        assert!(surface_potential(&stack, 2.0).unwrap() > 0.0);
    }

    #[test]
    fn surface_potential_saturates_past_threshold() {
        let stack = reference_mos(0.0, 0.0);
        let two_phi_f = 2.0 * bulk_potential(&stack).unwrap();
        let psi = surface_potential(&stack, 12.0).unwrap();
        assert!(psi > two_phi_f);
        assert!(psi < two_phi_f + 0.5);
    }

    #[test]
    fn surface_potential_mirrors_for_n_type() {
        let constants = PhysicalConstants::silicon_default();
        let oxide = OxideSpec::with_thickness_nm(500.0, 4.147e-3, 3.9).unwrap();
        let p_sub = SubstrateSpec::new(Polarity::PType, 1e16, &constants).unwrap();
        let n_sub = SubstrateSpec::new(Polarity::NType, 1e16, &constants).unwrap();
        let p_stack = DeviceStack::mos(oxide, p_sub, 0.0, 0.0, constants).unwrap();
        let n_stack = DeviceStack::mos(oxide, n_sub, 0.0, 0.0, constants).unwrap();
        let psi_p = surface_potential(&p_stack, 3.0).unwrap();
        let psi_n = surface_potential(&n_stack, -3.0).unwrap();
        assert!((psi_p + psi_n).abs() < 1e-8);
    }

    #[test]
    fn mim_curve_is_flat() {
        let oxide = OxideSpec::with_thickness_nm(500.0, 2.32e-3, 3.9).unwrap();
        let stack =
            DeviceStack::metal_insulator_metal(oxide, PhysicalConstants::silicon_default());
        let biases: Vec<f64> = (0..101).map(|i| -5.0 + 0.1 * i as f64).collect();
        let curve = cv_curve(&stack, &biases, Regime::HighFrequency).unwrap();
        let c_ox = oxide_capacitance(&stack);
        assert!(curve.points().iter().all(|p| p.capacitance == c_ox));
    }

    #[test]
    fn hf_curve_hits_cmin_beyond_threshold() {
        let stack = reference_mos(0.0, 0.0);
        let v_t = threshold_voltage(&stack).unwrap();
        let biases = [v_t + 0.5, v_t + 1.0, v_t + 3.0];
        let curve = cv_curve(&stack, &biases, Regime::HighFrequency).unwrap();
        let floor = c_min(&stack).unwrap();
        for p in curve.points() {
            assert!(rel(p.capacitance, floor) < 1e-12);
        }
    }

    #[test]
    fn deep_depletion_sinks_below_cmin() {
        let stack = reference_mos(0.0, 0.0);
        let v_t = threshold_voltage(&stack).unwrap();
        let c_dd = capacitance_at_bias(&stack, v_t + 3.0, Regime::DeepDepletion).unwrap();
        assert!(c_dd < c_min(&stack).unwrap());
    }

    #[test]
    fn curve_is_continuous_at_threshold() {
        let stack = reference_mos(0.0, 0.0);
        let v_t = threshold_voltage(&stack).unwrap();
        let below = capacitance_at_bias(&stack, v_t - 1e-6, Regime::HighFrequency).unwrap();
        let above = capacitance_at_bias(&stack, v_t + 1e-6, Regime::HighFrequency).unwrap();
        assert!(rel(below, above) < 1e-5);
    }

    #[test]
    fn lf_returns_toward_cox_in_strong_inversion() {
        // Thin oxide and light doping keep the threshold near 1 V so a
        // modest sweep reaches strong inversion.
        let constants = PhysicalConstants::silicon_default();
        let oxide = OxideSpec::with_thickness_nm(100.0, 1e-3, 3.9).unwrap();
        let substrate = SubstrateSpec::new(Polarity::PType, 1e15, &constants).unwrap();
        let stack = DeviceStack::mos(oxide, substrate, 0.0, 0.0, constants).unwrap();
        let c_ox = oxide_capacitance(&stack);
        let c_lf = capacitance_at_bias(&stack, 4.0, Regime::LowFrequency).unwrap();
        // Frozen from the charge-sheet evaluation: C_lf/C_ox = 0.98387.
        assert!(rel(c_lf / c_ox, 0.9838713689871752) < 1e-6);
        let c_hf = capacitance_at_bias(&stack, 4.0, Regime::HighFrequency).unwrap();
        assert!(c_lf > c_hf);
        assert!(c_lf < c_ox);
    }

    #[test]
    fn rejects_unsorted_bias_grid() {
        let stack = reference_mos(0.0, 0.0);
        assert!(cv_curve(&stack, &[0.0, 0.0], Regime::HighFrequency).is_err());
        assert!(cv_curve(&stack, &[1.0, 0.0], Regime::HighFrequency).is_err());
        assert!(cv_curve(&stack, &[], Regime::HighFrequency).is_err());
    }

    #[test]
    fn rejects_raw_measurement_regime() {
        let stack = reference_mos(0.0, 0.0);
        assert!(cv_curve(&stack, &[0.0], Regime::RawMeasurement).is_err());
    }
}
