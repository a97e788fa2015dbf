//! Device stack description: oxide, substrate, and gate parameters.

use crate::constants::{PhysicalConstants, CM_PER_NM};
use crate::error::{Error, Result};

/// Default gate/semiconductor work-function difference for an aluminum
/// gate over a p-substrate near 1e16 cm^-3 [V]. Override per stack when
/// the gate metallurgy differs.
pub const DEFAULT_WORKFUNCTION_DIFFERENCE: f64 = -0.9;

/// Insulator layer of the capacitor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OxideSpec {
    /// Oxide thickness [cm].
    pub thickness: f64,
    /// Gate area [cm^2].
    pub area: f64,
    /// Relative permittivity of the insulator.
    pub relative_permittivity: f64,
}

impl OxideSpec {
    /// Builds an oxide layer, validating positivity of every field.
    ///
    /// `thickness` is in centimeters; see [`OxideSpec::with_thickness_nm`]
    /// for the more common nanometer entry point.
    pub fn new(thickness: f64, area: f64, relative_permittivity: f64) -> Result<Self> {
        if thickness <= 0.0 || !thickness.is_finite() {
            return Err(Error::invalid(format!(
                "oxide thickness must be positive and finite, got {thickness} cm"
            )));
        }
        if area <= 0.0 || !area.is_finite() {
            return Err(Error::invalid(format!(
                "gate area must be positive and finite, got {area} cm^2"
            )));
        }
        if relative_permittivity < 1.0 || !relative_permittivity.is_finite() {
            return Err(Error::invalid(format!(
                "relative permittivity must be >= 1, got {relative_permittivity}"
            )));
        }
        Ok(Self { thickness, area, relative_permittivity })
    }

    /// Builds an oxide layer from a thickness in nanometers.
    pub fn with_thickness_nm(thickness_nm: f64, area: f64, relative_permittivity: f64) -> Result<Self> {
        Self::new(thickness_nm * CM_PER_NM, area, relative_permittivity)
    }
}

/// Substrate conduction type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// Acceptor-doped substrate; accumulates below flat band.
    PType,
    /// Donor-doped substrate; accumulates above flat band.
    NType,
}

impl Polarity {
    /// Sign convention for the surface potential: +1 drives the p-type
    /// surface into depletion for biases above flat band, -1 mirrors
    /// the n-type case.
    #[inline]
    pub(crate) fn sign(self) -> f64 {
        match self {
            Polarity::PType => 1.0,
            Polarity::NType => -1.0,
        }
    }

    /// Lowercase name used in config files and messages.
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::PType => "p",
            Polarity::NType => "n",
        }
    }
}

/// Semiconductor side of a MOS stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubstrateSpec {
    /// Conduction type.
    pub polarity: Polarity,
    /// Net dopant concentration [cm^-3]. Acceptors for p-type,
    /// donors for n-type.
    pub doping: f64,
}

impl SubstrateSpec {
    /// Builds a substrate, rejecting dopings at or below the intrinsic
    /// concentration where the nondegenerate bulk-potential expression
    /// loses meaning.
    pub fn new(polarity: Polarity, doping: f64, constants: &PhysicalConstants) -> Result<Self> {
        if !doping.is_finite() || doping <= constants.intrinsic_concentration {
            return Err(Error::invalid(format!(
                "substrate doping must exceed the intrinsic concentration \
                 {:.1e} cm^-3, got {doping:.3e} cm^-3",
                constants.intrinsic_concentration
            )));
        }
        Ok(Self { polarity, doping })
    }
}

/// Which two electrodes sandwich the insulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StackKind {
    /// Metal gate over a semiconductor substrate.
    Mos,
    /// Metal over metal; the capacitance is bias-independent.
    MetalInsulatorMetal,
}

impl StackKind {
    /// Lowercase name used in config files and messages.
    pub fn as_str(self) -> &'static str {
        match self {
            StackKind::Mos => "mos",
            StackKind::MetalInsulatorMetal => "metal-insulator-metal",
        }
    }
}

/// Complete description of one capacitor under test.
///
/// A metal-insulator-metal stack carries no substrate and no gate charge
/// terms; every bias-dependent operation rejects it and the C-V curve it
/// produces is flat at the oxide capacitance.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceStack {
    /// What kind of capacitor this is.
    pub kind: StackKind,
    /// Insulator layer.
    pub oxide: OxideSpec,
    /// Substrate; present exactly when `kind` is [`StackKind::Mos`].
    pub substrate: Option<SubstrateSpec>,
    /// Gate/semiconductor work-function difference [V]. Unused for
    /// metal-insulator-metal stacks.
    pub workfunction_difference: f64,
    /// Fixed oxide charge per area [C/cm^2], positive toward the gate.
    pub fixed_oxide_charge: f64,
    /// Constants the electrostatics evaluate against.
    pub constants: PhysicalConstants,
}

impl DeviceStack {
    /// Builds a MOS stack with explicit gate terms.
    pub fn mos(
        oxide: OxideSpec,
        substrate: SubstrateSpec,
        workfunction_difference: f64,
        fixed_oxide_charge: f64,
        constants: PhysicalConstants,
    ) -> Result<Self> {
        if !workfunction_difference.is_finite() || !fixed_oxide_charge.is_finite() {
            return Err(Error::invalid(
                "work-function difference and fixed charge must be finite".to_string(),
            ));
        }
        Ok(Self {
            kind: StackKind::Mos,
            oxide,
            substrate: Some(substrate),
            workfunction_difference,
            fixed_oxide_charge,
            constants,
        })
    }

    /// Builds a MOS stack with the default aluminum-gate work function
    /// and zero fixed charge.
    pub fn mos_default_gate(oxide: OxideSpec, substrate: SubstrateSpec) -> Result<Self> {
        Self::mos(
            oxide,
            substrate,
            DEFAULT_WORKFUNCTION_DIFFERENCE,
            0.0,
            PhysicalConstants::silicon_default(),
        )
    }

    /// Builds a metal-insulator-metal stack.
    pub fn metal_insulator_metal(oxide: OxideSpec, constants: PhysicalConstants) -> Self {
        Self {
            kind: StackKind::MetalInsulatorMetal,
            oxide,
            substrate: None,
            workfunction_difference: 0.0,
            fixed_oxide_charge: 0.0,
            constants,
        }
    }

    /// Substrate of a MOS stack, or the unsupported-operation error that
    /// every substrate-dependent routine reports for other kinds.
    pub(crate) fn require_substrate(&self, operation: &'static str) -> Result<&SubstrateSpec> {
        self.substrate.as_ref().ok_or(Error::Unsupported {
            operation,
            kind: self.kind.as_str(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_thickness() {
        assert!(OxideSpec::with_thickness_nm(-5.0, 1e-3, 3.9).is_err());
        assert!(OxideSpec::with_thickness_nm(0.0, 1e-3, 3.9).is_err());
    }

    #[test]
    fn rejects_intrinsic_doping() {
        let c = PhysicalConstants::silicon_default();
        assert!(SubstrateSpec::new(Polarity::PType, 1e10, &c).is_err());
        assert!(SubstrateSpec::new(Polarity::PType, 1e9, &c).is_err());
        assert!(SubstrateSpec::new(Polarity::PType, 1e16, &c).is_ok());
    }

    #[test]
    fn nanometer_entry_converts_to_cm() {
        let ox = OxideSpec::with_thickness_nm(500.0, 1e-3, 3.9).unwrap();
        assert!((ox.thickness - 5e-5).abs() < 1e-20);
    }

    #[test]
    fn mim_stack_has_no_substrate() {
        let ox = OxideSpec::with_thickness_nm(500.0, 2.32e-3, 3.9).unwrap();
        let stack = DeviceStack::metal_insulator_metal(ox, PhysicalConstants::silicon_default());
        assert!(stack.substrate.is_none());
        assert!(stack.require_substrate("surface potential").is_err());
    }
}
