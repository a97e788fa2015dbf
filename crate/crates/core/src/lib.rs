//! Capacitance-voltage analysis of MOS and metal-insulator-metal
//! capacitors.
//!
//! The crate covers the full loop of a C-V workbench:
//!
//! * [`model`]: forward electrostatics from a [`DeviceStack`] to a
//!   capacitance curve in the low-frequency, high-frequency, or
//!   deep-depletion regime.
//! * [`sweep`]: virtual measurements, i.e. model curves with a
//!   reproducible, seeded instrument-noise stream on top.
//! * [`extract`]: closed-form inversions that read oxide capacitance,
//!   thickness, area, doping, depth profiles, and junction depth back
//!   out of measured curves.
//! * [`fit`]: damped Gauss-Newton refinement of stack parameters
//!   against a whole measured curve.
//! * [`reference`]: built-in measured series of three reference
//!   structures from a 5 um CMOS process, for calibration checks.
//!
//! Internal unit system: centimeters, square centimeters, farads,
//! volts, and cm^-3. Conversion helpers for nanometers, micrometers,
//! and picofarads live in [`constants`].

pub mod constants;
pub mod curve;
pub mod device;
pub mod error;
pub mod extract;
pub mod fit;
pub mod model;
pub mod reference;
pub mod sweep;

pub use constants::PhysicalConstants;
pub use curve::{CVCurve, CVPoint, Regime};
pub use device::{DeviceStack, OxideSpec, Polarity, StackKind, SubstrateSpec};
pub use error::{Error, Result};
pub use extract::{DopingProfile, ProfilePoint, ThreePointMarkers};
pub use fit::{ExtractionResult, FreeParameter};
pub use reference::{ComparisonRow, ReferenceSeries, ReferenceStructure, ThicknessEntry};
pub use sweep::{GaussianNoise, SweepPlan};
