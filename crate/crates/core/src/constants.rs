//! Physical constants, explicit at every API boundary.
//!
//! All public interfaces are SI. Constants are passed as a value rather than
//! baked in so the same code runs in natural units (c = ħ = k_B = 1) for
//! dimensionless studies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s (exact SI value).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Reduced Planck constant, J s (from the exact h = 6.62607015e-34 J s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// The constant set threaded through every computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Speed of light, m/s.
    pub c: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
}

impl PhysicalConstants {
    /// SI values (CODATA).
    pub fn si() -> Self {
        PhysicalConstants {
            c: SPEED_OF_LIGHT,
            hbar: HBAR,
            k_b: BOLTZMANN,
        }
    }

    /// Natural units, c = ħ = k_B = 1.
    pub fn natural() -> Self {
        PhysicalConstants {
            c: 1.0,
            hbar: 1.0,
            k_b: 1.0,
        }
    }

    /// Custom constant set. Every entry must be finite and strictly positive.
    pub fn new(c: f64, hbar: f64, k_b: f64) -> Result<Self> {
        for (name, v) in [("c", c), ("hbar", hbar), ("k_b", k_b)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "constant {name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(PhysicalConstants { c, hbar, k_b })
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::si()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn si_values_are_codata() {
        let k = PhysicalConstants::si();
        assert_eq!(k.c, 299_792_458.0);
        assert_eq!(k.hbar, 1.054_571_817e-34);
        assert_eq!(k.k_b, 1.380_649e-23);
        assert_eq!(PhysicalConstants::default(), k);
    }

    #[test]
    fn rejects_nonpositive_entries() {
        assert!(PhysicalConstants::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, -2.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, 1.0, f64::NAN).is_err());
        assert!(PhysicalConstants::new(3e8, 1e-34, 1.4e-23).is_ok());
    }
}
