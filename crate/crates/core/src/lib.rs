//! Numerical laboratory for the ground-state energy density of dilute Bose
//! gases.
//!
//! Units: ħ = 1 and particle mass ½, so the one-body kinetic energy is p²
//! and the zero-energy two-body equation reads −Δu + ½vu = 0. Lengths are
//! multiples of a user-chosen base length.
//!
//! * [`potentials`]: admissible radial two-body potentials.
//! * [`scattering`]: zero-energy scattering solutions and scattering lengths.
//! * [`bogoliubov`]: the quasi-free (Bogoliubov) variational functional.
//! * [`asymptotics`]: closed-form dilute expansions in d = 1, 2, 3.
//! * [`liebliniger`]: the Lieb–Liniger integral equation.
//! * [`reproduce`]: the check suite behind the `reproduce` report.

pub mod asymptotics;
pub mod bogoliubov;
mod error;
pub mod fit;
pub mod liebliniger;
pub mod potentials;
pub mod quadrature;
pub mod reproduce;
pub mod scattering;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use error::{Error, Result};
pub use potentials::{PotentialValue, RadialPotential};
pub use scattering::ScatteringSolution;

/// Version of this crate, recorded in output provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Spatial dimension of the gas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Dim {
    One,
    Two,
    Three,
}

impl Dim {
    pub fn as_u8(self) -> u8 {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub fn as_i32(self) -> i32 {
        self.as_u8() as i32
    }
}

impl TryFrom<u8> for Dim {
    type Error = Error;

    fn try_from(d: u8) -> Result<Self> {
        match d {
            1 => Ok(Dim::One),
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            other => Err(Error::InvalidInput(format!("dimension must be 1, 2 or 3, got {other}"))),
        }
    }
}

impl From<Dim> for u8 {
    fn from(d: Dim) -> u8 {
        d.as_u8()
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

pub(crate) fn require_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive and finite, got {x}")))
    }
}
