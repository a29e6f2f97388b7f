//! Physical constants (2019 SI exact values) and boundary conversions.
//!
//! Everything inside the crate is SI. Conversions from the units quoted for
//! trapped-ion experiments (GHz, µK, µm, amu) happen at input boundaries only.

use std::f64::consts::PI;

use crate::error::{positive, Error, Result};

/// Planck constant, J·s.
pub const H: f64 = 6.626_070_15e-34;
/// Reduced Planck constant h/2π, J·s (1.054571817e-34 to ten digits).
pub const HBAR: f64 = H / (2.0 * PI);
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Atomic mass unit, kg.
pub const AMU: f64 = 1.660_539_07e-27;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub h: f64,
    pub k_b: f64,
    pub amu: f64,
}

impl PhysicalConstants {
    pub const SI: PhysicalConstants = PhysicalConstants {
        hbar: HBAR,
        h: H,
        k_b: K_B,
        amu: AMU,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Energy,
    Temperature,
    Length,
    Mass,
    Frequency,
    Time,
    Rate,
}

impl Dimension {
    pub fn si_unit(self) -> &'static str {
        match self {
            Dimension::Energy => "J",
            Dimension::Temperature => "K",
            Dimension::Length => "m",
            Dimension::Mass => "kg",
            Dimension::Frequency => "Hz",
            Dimension::Time => "s",
            Dimension::Rate => "1/s",
        }
    }

    fn requires_positive(self) -> bool {
        matches!(
            self,
            Dimension::Temperature | Dimension::Length | Dimension::Mass | Dimension::Frequency
        )
    }
}

/// A validated SI value tagged with its dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    value: f64,
    dimension: Dimension,
}

impl Quantity {
    pub fn new(value: f64, dimension: Dimension) -> Result<Self> {
        let name = format!("{dimension:?}").to_lowercase();
        if !value.is_finite() {
            return Err(Error::validation(name, value, "must be finite"));
        }
        if dimension.requires_positive() && value <= 0.0 {
            return Err(Error::validation(name, value, "must be positive"));
        }
        Ok(Self { value, dimension })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}", self.value, self.dimension.si_unit())
    }
}

/// E = h·ν.
pub fn frequency_to_energy(nu_hz: f64) -> Result<f64> {
    Ok(H * positive("frequency", nu_hz)?)
}

pub fn energy_to_frequency(energy_j: f64) -> Result<f64> {
    Ok(positive("energy", energy_j)? / H)
}

pub fn amu_to_kg(m_amu: f64) -> Result<f64> {
    Ok(positive("mass", m_amu)? * AMU)
}

pub fn kg_to_amu(m_kg: f64) -> Result<f64> {
    Ok(positive("mass", m_kg)? / AMU)
}

pub fn ghz_to_hz(v: f64) -> f64 {
    v * 1e9
}

pub fn mhz_to_hz(v: f64) -> f64 {
    v * 1e6
}

pub fn microkelvin_to_kelvin(v: f64) -> f64 {
    v * 1e-6
}

pub fn micrometer_to_meter(v: f64) -> f64 {
    v * 1e-6
}

pub fn nanometer_to_meter(v: f64) -> f64 {
    v * 1e-9
}
