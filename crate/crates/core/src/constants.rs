//! Physical constants and unit conversions.
//!
//! All internal quantities use centimeters, farads, volts, and cm^-3.
//! Input layers accept nanometers, micrometers, and picofarads and convert
//! on the way in; these helpers keep the conversion factors in one place.

/// Elementary charge [C].
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Boltzmann constant [J/K].
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Vacuum permittivity [F/cm].
pub const VACUUM_PERMITTIVITY: f64 = 8.85e-14;

/// Relative permittivity of thermally grown SiO2.
pub const SIO2_RELATIVE_PERMITTIVITY: f64 = 3.9;

/// Relative permittivity of bulk silicon.
pub const SILICON_RELATIVE_PERMITTIVITY: f64 = 11.7;

/// Intrinsic carrier concentration of silicon at 300 K [cm^-3].
pub const SILICON_INTRINSIC_CONCENTRATION: f64 = 1.0e10;

/// Default device temperature [K].
pub const DEFAULT_TEMPERATURE: f64 = 300.0;

/// Centimeters per nanometer.
pub const CM_PER_NM: f64 = 1.0e-7;

/// Centimeters per micrometer.
pub const CM_PER_UM: f64 = 1.0e-4;

/// Farads per picofarad.
pub const F_PER_PF: f64 = 1.0e-12;

/// Bundle of the constants every electrostatic computation draws on.
///
/// A `DeviceStack` carries one of these so that temperature-dependent
/// quantities stay consistent across an entire analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Elementary charge [C].
    pub elementary_charge: f64,
    /// Vacuum permittivity [F/cm].
    pub vacuum_permittivity: f64,
    /// Thermal voltage kT/q at `temperature` [V].
    pub thermal_voltage: f64,
    /// Device temperature [K].
    pub temperature: f64,
    /// Intrinsic carrier concentration [cm^-3].
    pub intrinsic_concentration: f64,
    /// Relative permittivity of the semiconductor bulk.
    pub semiconductor_relative_permittivity: f64,
    /// Default relative permittivity applied to oxides that do not
    /// specify their own.
    pub oxide_relative_permittivity: f64,
}

impl PhysicalConstants {
    /// Silicon/SiO2 constants at 300 K.
    pub fn silicon_default() -> Self {
        Self::at_temperature(DEFAULT_TEMPERATURE)
    }

    /// Silicon/SiO2 constants at an arbitrary temperature [K].
    ///
    /// Recomputes the thermal voltage so kT/q never drifts out of sync
    /// with the stored temperature.
    pub fn at_temperature(temperature: f64) -> Self {
        Self {
            elementary_charge: ELEMENTARY_CHARGE,
            vacuum_permittivity: VACUUM_PERMITTIVITY,
            thermal_voltage: BOLTZMANN * temperature / ELEMENTARY_CHARGE,
            temperature,
            intrinsic_concentration: SILICON_INTRINSIC_CONCENTRATION,
            semiconductor_relative_permittivity: SILICON_RELATIVE_PERMITTIVITY,
            oxide_relative_permittivity: SIO2_RELATIVE_PERMITTIVITY,
        }
    }

    /// Absolute permittivity of the semiconductor bulk [F/cm].
    #[inline]
    pub fn semiconductor_permittivity(&self) -> f64 {
        self.vacuum_permittivity * self.semiconductor_relative_permittivity
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::silicon_default()
    }
}
