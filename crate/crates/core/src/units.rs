//! Physical constants and the handful of unit conversions the model needs.
//!
//! Energies are in eV, lengths in Å, masses in amu, temperatures in K and
//! inverse temperatures in 1/eV throughout the crate.

use crate::error::{Error, Result};

/// Constants that fix the unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant times the speed of light, eV·Å.
    pub hbar_c: f64,
    /// Atomic mass unit times c², eV.
    pub amu_energy: f64,
    /// Boltzmann constant, eV/K.
    pub boltzmann: f64,
}

/// CODATA 2018 values.
pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar_c: 1973.269804,
    amu_energy: 931.494102e6,
    boltzmann: 8.617333262e-5,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CODATA_2018
    }
}

impl PhysicalConstants {
    /// ħ²/(2m) in eV·Å² for a mass given in amu.
    pub fn hbar2_over_2m(&self, mass: f64) -> Result<f64> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Domain(format!("mass must be positive, got {mass}")));
        }
        Ok(self.hbar_c * self.hbar_c / (2.0 * mass * self.amu_energy))
    }

    /// Inverse temperature β = 1/(k_B T) in 1/eV.
    pub fn beta_from_temperature(&self, temperature: f64) -> Result<f64> {
        if !(temperature > 0.0) {
            return Err(Error::Domain(format!(
                "temperature must be positive, got {temperature}"
            )));
        }
        Ok(1.0 / (self.boltzmann * temperature))
    }

    /// Temperature in K corresponding to β in 1/eV.
    pub fn temperature_from_beta(&self, beta: f64) -> Result<f64> {
        if !(beta > 0.0) {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        Ok(1.0 / (self.boltzmann * beta))
    }
}

/// ħ²/(2m) with [`CODATA_2018`].
pub fn hbar2_over_2m(mass: f64) -> Result<f64> {
    CODATA_2018.hbar2_over_2m(mass)
}

/// β = 1/(k_B T) with [`CODATA_2018`].
pub fn beta_from_temperature(temperature: f64) -> Result<f64> {
    CODATA_2018.beta_from_temperature(temperature)
}
