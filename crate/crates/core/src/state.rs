//! Detector state, scaled time and the conversion from physical units.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::Serialize;

use crate::environments::{EnvironmentKind, EnvironmentModel};
use crate::{Error, Result};

/// Bloch vector `ω` of a qubit, `ρ = (I + ω·σ)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct BlochVector {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
}

impl BlochVector {
    pub const ZERO: BlochVector = BlochVector {
        w1: 0.0,
        w2: 0.0,
        w3: 0.0,
    };

    pub const fn new(w1: f64, w2: f64, w3: f64) -> Self {
        Self { w1, w2, w3 }
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.w1 * other.w1 + self.w2 * other.w2 + self.w3 * other.w3
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &BlochVector) -> f64 {
        (self.w1 - other.w1)
            .abs()
            .max((self.w2 - other.w2).abs())
            .max((self.w3 - other.w3).abs())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.w1, self.w2, self.w3]
    }

    pub fn is_finite(&self) -> bool {
        self.w1.is_finite() && self.w2.is_finite() && self.w3.is_finite()
    }
}

impl From<[f64; 3]> for BlochVector {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

impl Add for BlochVector {
    type Output = BlochVector;
    fn add(self, rhs: BlochVector) -> BlochVector {
        BlochVector::new(self.w1 + rhs.w1, self.w2 + rhs.w2, self.w3 + rhs.w3)
    }
}

impl Sub for BlochVector {
    type Output = BlochVector;
    fn sub(self, rhs: BlochVector) -> BlochVector {
        BlochVector::new(self.w1 - rhs.w1, self.w2 - rhs.w2, self.w3 - rhs.w3)
    }
}

impl Mul<BlochVector> for f64 {
    type Output = BlochVector;
    fn mul(self, rhs: BlochVector) -> BlochVector {
        BlochVector::new(self * rhs.w1, self * rhs.w2, self * rhs.w3)
    }
}

impl fmt::Display for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.w1, self.w2, self.w3)
    }
}

/// Pure initial state `cos(θ/2)|+⟩ + e^{iφ} sin(θ/2)|−⟩`.
///
/// Both angles are reduced into `[0, 2π)` on construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialState {
    theta: f64,
    phi: f64,
}

impl InitialState {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::invalid(format!(
                "initial state angles must be finite (theta={theta}, phi={phi})"
            )));
        }
        Ok(Self {
            theta: wrap_angle(theta),
            phi: wrap_angle(phi),
        })
    }

    /// Excited state, `θ = 0`.
    pub fn excited() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    /// Ground state, `θ = π`.
    pub fn ground() -> Self {
        Self {
            theta: PI,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

fn wrap_angle(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Bloch vector of the initial state, `(sinθ cosφ, sinθ sinφ, cosθ)`.
pub fn initial_bloch(state: &InitialState) -> BlochVector {
    let (st, ct) = state.theta.sin_cos();
    let (sp, cp) = state.phi.sin_cos();
    BlochVector::new(st * cp, st * sp, ct)
}

/// Proper time in units of the spontaneous emission rate, `τ̃ = Γ₀τ`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ScaledTime(f64);

impl ScaledTime {
    pub const ZERO: ScaledTime = ScaledTime(0.0);

    pub fn new(tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::invalid(format!(
                "scaled time must be finite and >= 0, got {tau}"
            )));
        }
        Ok(Self(tau))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Inputs in a consistent physical unit system (`ħ = c = k_B = 1`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParameters {
    /// Proper time.
    pub tau: f64,
    /// Acceleration `a` or temperature `T`, depending on the environment.
    pub x: f64,
    /// Distance to the boundary, required for boundary environments.
    pub z: Option<f64>,
    /// Detector–field coupling.
    pub mu: f64,
    /// Level spacing.
    pub omega0: f64,
}

/// Spontaneous emission rate `Γ₀ = μ²ω₀/2π`.
pub fn emission_rate(mu: f64, omega0: f64) -> f64 {
    mu * mu * omega0 / (2.0 * PI)
}

/// Maps physical inputs onto `τ̃ = μ²ω₀τ/2π`, `X̃ = X/ω₀` and `z̃ = zω₀`.
pub fn to_dimensionless(
    kind: EnvironmentKind,
    p: &PhysicalParameters,
) -> Result<(ScaledTime, EnvironmentModel)> {
    if !(p.omega0.is_finite() && p.omega0 > 0.0) {
        return Err(Error::invalid(format!(
            "omega0 must be positive, got {}",
            p.omega0
        )));
    }
    if !p.mu.is_finite() || p.mu == 0.0 {
        return Err(Error::invalid(format!(
            "coupling mu must be finite and non-zero, got {}",
            p.mu
        )));
    }
    if !(p.tau.is_finite() && p.tau >= 0.0) {
        return Err(Error::invalid(format!(
            "proper time must be >= 0, got {}",
            p.tau
        )));
    }
    let tau = ScaledTime::new(emission_rate(p.mu, p.omega0) * p.tau)?;
    let x = p.x / p.omega0;
    let model = if kind.has_boundary() {
        let z =
            p.z.ok_or_else(|| Error::invalid(format!("{kind} requires a boundary distance z")))?;
        EnvironmentModel::new(kind, x, Some(z * p.omega0))?
    } else {
        EnvironmentModel::new(kind, x, None)?
    };
    Ok((tau, model))
}

/// Inverse of [`to_dimensionless`] for a given coupling and level spacing.
pub fn to_physical(
    tau: ScaledTime,
    model: &EnvironmentModel,
    mu: f64,
    omega0: f64,
) -> Result<PhysicalParameters> {
    if !(omega0.is_finite() && omega0 > 0.0) || !mu.is_finite() || mu == 0.0 {
        return Err(Error::invalid("to_physical needs omega0 > 0 and mu != 0"));
    }
    Ok(PhysicalParameters {
        tau: tau.value() / emission_rate(mu, omega0),
        x: model.parameter() * omega0,
        z: model.z().map(|z| z / omega0),
        mu,
        omega0,
    })
}
