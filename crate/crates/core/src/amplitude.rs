//! Scalar parameter types: complex amplitudes and squeeze parameters.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dimensionless complex amplitude.
///
/// Used for the displacement α, the propagated mean field A(τ), the flow
/// shift α(τ) and the Hamiltonian couplings b and c.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexAmplitude {
    pub re: f64,
    pub im: f64,
}

impl ComplexAmplitude {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// Builds `magnitude · exp(i·phase)`.
    pub fn from_polar(magnitude: f64, phase: f64) -> Self {
        Complex64::from_polar(magnitude, phase).into()
    }

    pub fn value(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn magnitude(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Phase in (−π, π]; zero for the zero amplitude.
    pub fn phase(self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl From<Complex64> for ComplexAmplitude {
    fn from(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

impl From<ComplexAmplitude> for Complex64 {
    fn from(z: ComplexAmplitude) -> Self {
        z.value()
    }
}

impl fmt::Display for ComplexAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Squeeze parameter ξ = r·exp(iθ) with r ≥ 0 and θ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SqueezeParam {
    r: f64,
    theta: f64,
}

impl SqueezeParam {
    pub const ZERO: Self = Self { r: 0.0, theta: 0.0 };

    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::domain(format!(
                "squeeze magnitude r must be finite and >= 0, got {r}"
            )));
        }
        if !theta.is_finite() {
            return Err(Error::domain(format!(
                "squeeze phase must be finite, got {theta}"
            )));
        }
        Ok(Self {
            r,
            theta: normalize_angle(theta),
        })
    }

    /// Decomposes a complex ξ. A zero ξ gets the canonical phase θ = 0.
    pub fn from_complex(xi: Complex64) -> Result<Self> {
        let r = xi.norm();
        let theta = if r == 0.0 { 0.0 } else { xi.arg() };
        Self::new(r, theta)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }

    /// e^{iθ}.
    pub fn phase_factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }
}

/// Maps an angle into [0, 2π).
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Distance between two angles on the circle, in [0, π].
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}
