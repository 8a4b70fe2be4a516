//! Binary control phases and canonical phase ranges.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

/// A routing phase restricted to `{0, π}`.
///
/// Stored as a symbol so switch behaviour stays exact; it only becomes a
/// floating-point angle when a scattering matrix is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ControlPhase {
    #[default]
    Zero,
    Pi,
}

impl ControlPhase {
    /// Accepts exactly `0.0` or `std::f64::consts::PI` (and `-0.0`).
    pub fn from_radians(phi: f64) -> Result<Self> {
        if phi == 0.0 {
            Ok(Self::Zero)
        } else if phi == PI {
            Ok(Self::Pi)
        } else {
            Err(Error::ControlPhaseDomain(phi))
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Self::Pi
        } else {
            Self::Zero
        }
    }

    /// Residue class of `units · π` modulo 2π.
    pub fn from_pi_units(units: i64) -> Self {
        Self::from_bit(units.rem_euclid(2) == 1)
    }

    pub fn radians(self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Pi => PI,
        }
    }

    pub fn is_pi(self) -> bool {
        self == Self::Pi
    }

    /// Multiple of π as an integer, 0 or 1.
    pub fn units(self) -> i64 {
        self.is_pi() as i64
    }

    /// Sum of control phases reduced modulo 2π.
    pub fn sum<I: IntoIterator<Item = ControlPhase>>(phases: I) -> Self {
        phases.into_iter().fold(Self::Zero, |acc, p| acc + p)
    }
}

impl Add for ControlPhase {
    type Output = ControlPhase;

    fn add(self, rhs: Self) -> Self {
        Self::from_bit(self.is_pi() != rhs.is_pi())
    }
}

impl fmt::Display for ControlPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Zero => "0",
            Self::Pi => "pi",
        })
    }
}

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_two_pi(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduces an angle into `(-π, π]`.
pub fn wrap_symmetric(x: f64) -> f64 {
    let r = wrap_two_pi(x);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Smallest distance between two angles on the circle.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap_symmetric(a - b).abs()
}
