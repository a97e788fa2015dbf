//! Inverse problems: recovering stack parameters from measured curves.

use crate::constants::{CM_PER_UM, ELEMENTARY_CHARGE, VACUUM_PERMITTIVITY};
use crate::constants::PhysicalConstants;
use crate::curve::CVCurve;
use crate::device::Polarity;
use crate::error::{Error, Result};

/// Fraction of the samples, taken from the accumulation end of the
/// curve, that the plateau estimate is computed over.
const PLATEAU_WINDOW_FRACTION: f64 = 0.1;

/// Largest relative spread the plateau window may show before the curve
/// is rejected as having no accumulation plateau.
const PLATEAU_SPREAD_LIMIT: f64 = 0.05;

/// Oxide capacitance from the accumulation plateau of a measured
/// curve [F].
///
/// Takes the 10% of samples deepest into accumulation (the low-bias end
/// for a p-substrate, the high-bias end for an n-substrate) and returns
/// their median. A relative spread above 5% over that window means the
/// sweep never reached accumulation and is rejected.
pub fn extract_oxide_capacitance(curve: &CVCurve, polarity: Polarity) -> Result<f64> {
    let n = curve.len();
    if n < 5 {
        return Err(Error::InsufficientData { needed: 5, got: n });
    }
    let window = ((n as f64 * PLATEAU_WINDOW_FRACTION) as usize).max(1);
    let points = curve.points();
    let mut values: Vec<f64> = match polarity {
        Polarity::PType => points[..window].iter().map(|p| p.capacitance).collect(),
        Polarity::NType => points[n - window..].iter().map(|p| p.capacitance).collect(),
    };
    values.sort_by(|a, b| a.partial_cmp(b).expect("curve values are finite"));
    let median = if window % 2 == 1 {
        values[window / 2]
    } else {
        0.5 * (values[window / 2 - 1] + values[window / 2])
    };
    let spread = (values[window - 1] - values[0]) / median;
    if spread > PLATEAU_SPREAD_LIMIT {
        return Err(Error::NoPlateau {
            spread,
            samples: window,
            limit: PLATEAU_SPREAD_LIMIT,
        });
    }
    Ok(median)
}

/// Oxide thickness from a known oxide capacitance and area [cm]:
/// t_ox = eps0 eps_r A / C_ox.
pub fn extract_tox(c_ox: f64, area: f64, epsilon_r: f64) -> Result<f64> {
    check_positive("oxide capacitance", c_ox)?;
    check_positive("area", area)?;
    if epsilon_r < 1.0 || !epsilon_r.is_finite() {
        return Err(Error::invalid(format!(
            "relative permittivity must be >= 1, got {epsilon_r}"
        )));
    }
    Ok(VACUUM_PERMITTIVITY * epsilon_r * area / c_ox)
}

/// Gate area from a known oxide capacitance and thickness [cm^2]:
/// A = C_ox t_ox / (eps0 eps_r).
pub fn extract_area(c_ox: f64, t_ox: f64, epsilon_r: f64) -> Result<f64> {
    check_positive("oxide capacitance", c_ox)?;
    check_positive("oxide thickness", t_ox)?;
    if epsilon_r < 1.0 || !epsilon_r.is_finite() {
        return Err(Error::invalid(format!(
            "relative permittivity must be >= 1, got {epsilon_r}"
        )));
    }
    Ok(c_ox * t_ox / (VACUUM_PERMITTIVITY * epsilon_r))
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value <= 0.0 || !value.is_finite() {
        return Err(Error::invalid(format!(
            "{name} must be positive and finite, got {value}"
        )));
    }
    Ok(())
}

/// Substrate doping from the extreme capacitances of a high-frequency
/// curve [cm^-3].
///
/// Inverts the equilibrium relation between doping and the
/// maximum-depletion capacitance: the depletion part of `c_min` fixes
/// the maximum depletion width, and the doping that produces exactly
/// that width is found by bisection on log10 N over [1e13, 1e19],
/// converged to 0.1% relative.
pub fn extract_doping_maxmin(c_ox: f64, c_min: f64, area: f64) -> Result<f64> {
    check_positive("oxide capacitance", c_ox)?;
    check_positive("minimum capacitance", c_min)?;
    check_positive("area", area)?;
    if c_min >= c_ox {
        return Err(Error::InvalidRatio(format!(
            "c_min {c_min:.3e} F must lie strictly below c_ox {c_ox:.3e} F"
        )));
    }
    let constants = PhysicalConstants::silicon_default();
    let eps_semi = constants.semiconductor_permittivity();
    // Depletion part of c_min: 1/C_dmin = 1/C_min - 1/C_ox.
    let c_dmin_per_area = 1.0 / (area / c_min - area / c_ox);
    let w_target = eps_semi / c_dmin_per_area;

    let width_at = |log_n: f64| -> f64 {
        let n = 10f64.powf(log_n);
        let phi_f = constants.thermal_voltage * (n / constants.intrinsic_concentration).ln();
        (2.0 * eps_semi * (2.0 * phi_f) / (ELEMENTARY_CHARGE * n)).sqrt()
    };

    let (lo, hi) = (13.0, 19.0);
    // Width shrinks as doping grows, so the residual is decreasing.
    if width_at(lo) < w_target || width_at(hi) > w_target {
        return Err(Error::OutOfRange {
            quantity: "substrate doping",
            low: 1e13,
            high: 1e19,
        });
    }
    let mut lo = lo;
    let mut hi = hi;
    // Bracket below 1e-6 decades keeps the answer well inside the 0.1%
    // relative requirement.
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if width_at(mid) > w_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(10f64.powf(0.5 * (lo + hi)))
}

/// One depth sample of a doping profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    /// Depth below the surface [cm].
    pub depth: f64,
    /// Net dopant concentration [cm^-3].
    pub concentration: f64,
}

/// Depth-resolved dopant concentration, strictly increasing in depth.
#[derive(Debug, Clone, PartialEq)]
pub struct DopingProfile {
    points: Vec<ProfilePoint>,
}

impl DopingProfile {
    /// Validates ordering and positivity.
    pub fn new(points: Vec<ProfilePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("a doping profile needs at least one point"));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.depth.is_finite() || !p.concentration.is_finite() || p.concentration <= 0.0 {
                return Err(Error::invalid(format!(
                    "profile point {i}: need finite depth and positive concentration, \
                     got ({} cm, {} cm^-3)",
                    p.depth, p.concentration
                )));
            }
            if i > 0 && p.depth <= points[i - 1].depth {
                return Err(Error::invalid(format!(
                    "profile depths must be strictly increasing at point {i}"
                )));
            }
        }
        Ok(Self { points })
    }

    /// The samples in depth order.
    pub fn points(&self) -> &[ProfilePoint] {
        &self.points
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True when the profile holds no samples; unreachable after
    /// validation.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Depth profile of the net doping from the slope of 1/C^2.
///
/// For each interior point of the curve, N(W) = 2 / (q eps_s A^2 *
/// d(1/C^2)/dV) with the derivative taken by central differences, and
/// W = eps_s A / C. The curve must be strictly monotone in capacitance;
/// a flat or direction-reversing interval is reported with its bias
/// bounds. Endpoints have no centered derivative and are not emitted.
pub fn doping_profile_from_cv(curve: &CVCurve, area: f64) -> Result<DopingProfile> {
    check_positive("area", area)?;
    let n = curve.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    let points = curve.points();
    let eps_semi = PhysicalConstants::silicon_default().semiconductor_permittivity();
    let inv_c_sq: Vec<f64> = points
        .iter()
        .map(|p| 1.0 / (p.capacitance * p.capacitance))
        .collect();
    let mut profile = Vec::with_capacity(n - 2);
    let mut slope_sign = 0.0;
    for i in 1..n - 1 {
        let dv = points[i + 1].bias - points[i - 1].bias;
        let slope = (inv_c_sq[i + 1] - inv_c_sq[i - 1]) / dv;
        if slope == 0.0 || (slope_sign != 0.0 && slope.signum() != slope_sign) {
            return Err(Error::ProfileUndefined {
                bias_low: points[i - 1].bias,
                bias_high: points[i + 1].bias,
            });
        }
        slope_sign = slope.signum();
        let concentration =
            2.0 / (ELEMENTARY_CHARGE * eps_semi * area * area * slope.abs());
        let depth = eps_semi * area / points[i].capacitance;
        profile.push(ProfilePoint { depth, concentration });
    }
    // An n-substrate sweep deepens toward negative bias, which leaves
    // the depths in descending order; flip so depth always increases.
    if profile.len() >= 2 && profile[0].depth > profile[1].depth {
        profile.reverse();
    }
    DopingProfile::new(profile)
}

/// The three depth markers of a junction staircase plot [um].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreePointMarkers {
    /// Onset of the transition [um].
    pub x1_onset: f64,
    /// Minimum of the measured trace [um].
    pub x2_minimum: f64,
    /// Return to the saturated level [um].
    pub x3_saturation: f64,
}

impl ThreePointMarkers {
    /// Validates x1 <= x2 <= x3.
    pub fn new(x1_onset: f64, x2_minimum: f64, x3_saturation: f64) -> Result<Self> {
        if !x1_onset.is_finite() || !x2_minimum.is_finite() || !x3_saturation.is_finite() {
            return Err(Error::invalid("markers must be finite".to_string()));
        }
        if !(x1_onset <= x2_minimum && x2_minimum <= x3_saturation) {
            return Err(Error::invalid(format!(
                "markers must satisfy x1 <= x2 <= x3, got \
                 ({x1_onset}, {x2_minimum}, {x3_saturation}) um"
            )));
        }
        Ok(Self { x1_onset, x2_minimum, x3_saturation })
    }
}

/// Junction depth from the three-point construction [um]: the distance
/// from transition onset to saturation, x3 - x1.
pub fn junction_depth(markers: &ThreePointMarkers) -> f64 {
    markers.x3_saturation - markers.x1_onset
}

/// Locates the three markers on a doping profile.
///
/// The transition region is where |d log10 N / dx| exceeds 10% of its
/// peak: x1 is the first such depth, x3 the last, and x2 the depth of
/// the concentration minimum between them.
pub fn detect_markers(profile: &DopingProfile) -> Result<ThreePointMarkers> {
    let n = profile.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    let pts = profile.points();
    let mut slopes = Vec::with_capacity(n - 2);
    for i in 1..n - 1 {
        let dx = pts[i + 1].depth - pts[i - 1].depth;
        let dlog = pts[i + 1].concentration.log10() - pts[i - 1].concentration.log10();
        slopes.push((pts[i].depth, (dlog / dx).abs()));
    }
    let peak = slopes.iter().map(|&(_, s)| s).fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::invalid(
            "profile is flat: no transition region to mark".to_string(),
        ));
    }
    let threshold = 0.1 * peak;
    let x1 = slopes.iter().find(|&&(_, s)| s >= threshold).expect("peak exists").0;
    let x3 = slopes.iter().rev().find(|&&(_, s)| s >= threshold).expect("peak exists").0;
    let x2 = pts
        .iter()
        .filter(|p| p.depth >= x1 && p.depth <= x3)
        .min_by(|a, b| {
            a.concentration
                .partial_cmp(&b.concentration)
                .expect("concentrations are finite")
        })
        .expect("window contains points")
        .depth;
    ThreePointMarkers::new(x1 / CM_PER_UM, x2 / CM_PER_UM, x3 / CM_PER_UM)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::curve::{CVPoint, Regime};
    use crate::device::{DeviceStack, OxideSpec, SubstrateSpec};
    use crate::model;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    fn curve_from(biases_and_caps: &[(f64, f64)]) -> CVCurve {
        CVCurve::new(
            biases_and_caps
                .iter()
                .map(|&(bias, capacitance)| CVPoint { bias, capacitance })
                .collect(),
            Regime::RawMeasurement,
        )
        .unwrap()
    }

    fn p_stack(tox_nm: f64, doping: f64) -> DeviceStack {
        let constants = PhysicalConstants::silicon_default();
        let oxide = OxideSpec::with_thickness_nm(tox_nm, 4.147e-3, 3.9).unwrap();
        let substrate = SubstrateSpec::new(Polarity::PType, doping, &constants).unwrap();
        DeviceStack::mos(oxide, substrate, 0.0, 0.0, constants).unwrap()
    }

    #[test]
    fn plateau_from_simulated_accumulation() {
        let stack = p_stack(500.0, 1e16);
        let biases: Vec<f64> = (0..101).map(|i| -5.0 + 0.1 * i as f64).collect();
        let curve = model::cv_curve(&stack, &biases, Regime::HighFrequency).unwrap();
        let plateau = extract_oxide_capacitance(&curve, Polarity::PType).unwrap();
        assert!(rel(plateau, model::oxide_capacitance(&stack)) < 1e-12);
    }

    #[test]
    fn plateau_reads_high_bias_end_for_n_type() {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for i in 0..50 {
            // Rising toward a 2e-11 plateau at positive bias.
            let bias = -2.0 + 0.1 * i as f64;
            let c = if i < 40 { 1e-11 + 2e-13 * i as f64 } else { 2e-11 };
            pts.push((bias, c));
        }
        let plateau = extract_oxide_capacitance(&curve_from(&pts), Polarity::NType).unwrap();
        assert!(rel(plateau, 2e-11) < 1e-12);
    }

    #[test]
    fn sloped_curve_has_no_plateau() {
        let pts: Vec<(f64, f64)> =
            (0..100).map(|i| (i as f64 * 0.1, 1e-11 + 2e-13 * i as f64)).collect();
        match extract_oxide_capacitance(&curve_from(&pts), Polarity::NType) {
            Err(Error::NoPlateau { spread, .. }) => assert!(spread > 0.05),
            other => panic!("expected NoPlateau, got {other:?}"),
        }
    }

    #[test]
    fn plateau_needs_five_points() {
        let pts = [(0.0, 1e-11), (1.0, 1e-11), (2.0, 1e-11), (3.0, 1e-11)];
        assert!(matches!(
            extract_oxide_capacitance(&curve_from(&pts), Polarity::PType),
            Err(Error::InsufficientData { needed: 5, got: 4 })
        ));
    }

    #[test]
    fn tox_from_headline_capacitance() {
        let t = extract_tox(28.62e-12, 4.146023468057367e-3, 3.9).unwrap();
        assert!(rel(t, 5e-5) < 1e-9);
    }

    #[test]
    fn area_from_headline_capacitance() {
        let a = extract_area(28.62e-12, 5e-5, 3.9).unwrap();
        assert!(rel(a, 4.146023468057367e-3) < 1e-12);
        assert!(rel(a, 4.147e-3) < 1e-3);
    }

    #[test]
    fn area_from_metal_pair() {
        let a = extract_area(16e-12, 5e-5, 3.9).unwrap();
        assert!(rel(a, 2.3178328263074024e-3) < 1e-12);
        assert!(rel(a, 2.32e-3) < 1e-2);
    }

    #[test]
    fn doping_roundtrip_through_cmin() {
        for doping in [1e14, 1e15, 1e16, 1e17] {
            let stack = p_stack(500.0, doping);
            let c_ox = model::oxide_capacitance(&stack);
            let c_min = model::c_min(&stack).unwrap();
            let recovered = extract_doping_maxmin(c_ox, c_min, stack.oxide.area).unwrap();
            assert!(rel(recovered, doping) < 5e-3, "doping {doping}: got {recovered}");
        }
    }

    #[test]
    fn doping_rejects_inverted_ratio() {
        assert!(matches!(
            extract_doping_maxmin(1e-11, 2e-11, 4e-3),
            Err(Error::InvalidRatio(_))
        ));
    }

    #[test]
    fn doping_out_of_bracket_is_reported() {
        // c_min nearly equal to c_ox needs doping far above 1e19.
        assert!(matches!(
            extract_doping_maxmin(1e-11, 0.999999e-11, 4e-3),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn profile_of_uniform_substrate_is_flat() {
        let stack = p_stack(500.0, 1e16);
        let biases: Vec<f64> = (0..76).map(|i| 0.5 + 0.1 * i as f64).collect();
        let curve = model::cv_curve(&stack, &biases, Regime::DeepDepletion).unwrap();
        let profile = doping_profile_from_cv(&curve, stack.oxide.area).unwrap();
        assert_eq!(profile.len(), curve.len() - 2);
        for p in profile.points() {
            assert!(rel(p.concentration, 1e16) < 0.02, "N {}", p.concentration);
        }
        // Depths span the depletion widths of the sweep, increasing.
        assert!(profile.points()[0].depth > 0.0);
    }

    #[test]
    fn profile_rejects_accumulation_plateau() {
        let stack = p_stack(500.0, 1e16);
        let biases: Vec<f64> = (0..41).map(|i| -2.0 + 0.1 * i as f64).collect();
        let curve = model::cv_curve(&stack, &biases, Regime::DeepDepletion).unwrap();
        assert!(matches!(
            doping_profile_from_cv(&curve, stack.oxide.area),
            Err(Error::ProfileUndefined { .. })
        ));
    }

    #[test]
    fn junction_depth_of_reported_markers() {
        let markers = ThreePointMarkers::new(0.65, 1.25, 1.45).unwrap();
        let depth = junction_depth(&markers);
        // The decimal literals are one float ulp away from an exact 0.8.
        assert!((depth - 0.8).abs() < 1e-15);
    }

    #[test]
    fn junction_depth_ignores_the_minimum_marker() {
        let a = ThreePointMarkers::new(0.65, 0.9, 1.45).unwrap();
        let b = ThreePointMarkers::new(0.65, 1.4, 1.45).unwrap();
        assert_eq!(junction_depth(&a), junction_depth(&b));
    }

    #[test]
    fn markers_must_be_ordered() {
        assert!(ThreePointMarkers::new(1.45, 1.25, 0.65).is_err());
        assert!(ThreePointMarkers::new(0.65, 0.5, 1.45).is_err());
    }

    #[test]
    fn detect_markers_on_synthetic_junction() {
        // Heavily doped surface falling to a dip, then recovering to the
        // substrate level: a classic staircase with its minimum inside
        // the transition.
        let mut pts = Vec::new();
        for i in 0..200 {
            let x_um = i as f64 * 0.01;
            let surface = 1e19 * (-((x_um / 0.5).powi(2))).exp();
            let substrate = 1e16;
            let n = (surface - substrate).abs().max(1e13);
            pts.push(ProfilePoint { depth: x_um * CM_PER_UM, concentration: n });
        }
        let profile = DopingProfile::new(pts).unwrap();
        let markers = detect_markers(&profile).unwrap();
        assert!(markers.x1_onset < markers.x2_minimum);
        assert!(markers.x2_minimum < markers.x3_saturation);
        // The dip sits where surface and substrate doping cancel.
        let crossing = 0.5 * (1e19f64 / 1e16).ln().sqrt();
        assert!((markers.x2_minimum - crossing).abs() < 0.05);
    }
}
