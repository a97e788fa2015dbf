//! Capacitance-voltage curve container.

use crate::error::{Error, Result};

/// Measurement or model regime a curve belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Quasi-static: inversion charge follows both bias and signal.
    LowFrequency,
    /// Inversion charge follows the bias but not the signal; the curve
    /// bottoms out at the minimum capacitance.
    HighFrequency,
    /// Swept too fast for inversion to form; depletion keeps widening
    /// past its equilibrium maximum.
    DeepDepletion,
    /// Data taken from an instrument rather than a model.
    RawMeasurement,
}

impl Regime {
    /// Lowercase name used in CLI flags and messages.
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::LowFrequency => "low-frequency",
            Regime::HighFrequency => "high-frequency",
            Regime::DeepDepletion => "deep-depletion",
            Regime::RawMeasurement => "raw-measurement",
        }
    }
}

/// One bias point of a C-V sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CVPoint {
    /// Gate bias [V].
    pub bias: f64,
    /// Measured or modeled capacitance [F].
    pub capacitance: f64,
}

/// A validated C-V sweep: strictly increasing bias, strictly positive
/// capacitance at every point.
#[derive(Debug, Clone, PartialEq)]
pub struct CVCurve {
    points: Vec<CVPoint>,
    regime: Regime,
}

impl CVCurve {
    /// Validates and wraps a point list.
    ///
    /// Rejects empty input, non-finite values, non-positive capacitances,
    /// and bias grids that are not strictly increasing.
    pub fn new(points: Vec<CVPoint>, regime: Regime) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("a C-V curve needs at least one point"));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.bias.is_finite() || !p.capacitance.is_finite() {
                return Err(Error::invalid(format!(
                    "point {i}: non-finite value ({} V, {} F)",
                    p.bias, p.capacitance
                )));
            }
            if p.capacitance <= 0.0 {
                return Err(Error::invalid(format!(
                    "point {i}: capacitance must be positive, got {} F",
                    p.capacitance
                )));
            }
            if i > 0 && p.bias <= points[i - 1].bias {
                return Err(Error::invalid(format!(
                    "bias must be strictly increasing: point {i} at {} V \
                     does not exceed point {} at {} V",
                    p.bias,
                    i - 1,
                    points[i - 1].bias
                )));
            }
        }
        Ok(Self { points, regime })
    }

    /// The validated points in bias order.
    pub fn points(&self) -> &[CVPoint] {
        &self.points
    }

    /// Regime tag carried by the curve.
    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True when the curve holds no points. Unreachable for validated
    /// curves but kept for API completeness.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest capacitance on the curve [F].
    pub fn min_capacitance(&self) -> f64 {
        self.points.iter().map(|p| p.capacitance).fold(f64::INFINITY, f64::min)
    }

    /// Largest capacitance on the curve [F].
    pub fn max_capacitance(&self) -> f64 {
        self.points.iter().map(|p| p.capacitance).fold(f64::NEG_INFINITY, f64::max)
    }
}
