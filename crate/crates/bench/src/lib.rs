//! Shared fixtures for the benchmark targets.

use moscap_core::constants::PhysicalConstants;
use moscap_core::device::{DeviceStack, OxideSpec, Polarity, SubstrateSpec};

/// The default benchmarking device: a 500 nm oxide over a uniform
/// 1e16 cm^-3 p-substrate with an aluminum gate.
pub fn reference_stack() -> DeviceStack {
    stack_with(500.0, 1e16)
}

/// A p-substrate stack with the given oxide thickness and doping.
pub fn stack_with(t_ox_nm: f64, doping: f64) -> DeviceStack {
    let constants = PhysicalConstants::silicon_default();
    let oxide = OxideSpec::with_thickness_nm(
        t_ox_nm,
        4.146023468057367e-3,
        constants.oxide_relative_permittivity,
    )
    .expect("benchmark geometry is valid");
    let substrate = SubstrateSpec::new(Polarity::PType, doping, &constants)
        .expect("benchmark doping is valid");
    DeviceStack::mos_default_gate(oxide, substrate).expect("benchmark stack is valid")
}
