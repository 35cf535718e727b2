//! Small domain newtypes shared across modules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Temperature in units of the reference coupling (`k_B = 1`).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Temperature(f64);

impl Temperature {
    pub const ZERO: Temperature = Temperature(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "temperature must be non-negative, got {value}"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    /// Fermi–Dirac occupation at zero chemical potential; at `T = 0` an
    /// exact zero mode is half filled (the `T → 0⁺` limit).
    pub fn fermi(self, energy: f64) -> f64 {
        if self.0 == 0.0 || (self.0.is_infinite() && energy.is_infinite()) {
            return if energy < 0.0 {
                1.0
            } else if energy > 0.0 {
                0.0
            } else {
                0.5
            };
        }
        let z = energy / self.0;
        if z > 0.0 {
            let w = (-z).exp();
            w / (1.0 + w)
        } else {
            1.0 / (1.0 + z.exp())
        }
    }
}

impl std::fmt::Display for Temperature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}
