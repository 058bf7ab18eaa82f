//! Dissipator rates `(A, B)` for the four environments, in units of `Γ₀`.
//!
//! Every environment has the form `A = ½·coth(κ)·(1 − f)`, `B = ½·(1 − f)`:
//! `κ = π/ã` for the accelerated detector (Unruh temperature `ã/2π`) and
//! `κ = 1/(2T̃)` for the thermal bath, while `f` is the reflecting-boundary
//! correction (zero for the unbounded kinds).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::special::{coth, coth_minus_one, csch_sq, one_minus_sinc};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvironmentKind {
    /// Uniformly accelerated detector, Minkowski vacuum.
    UnruhUnbounded,
    /// Uniformly accelerated detector at distance `z` from a reflecting plane.
    UnruhBoundary,
    /// Static detector in a thermal bath.
    ThermalUnbounded,
    /// Static detector in a thermal bath at distance `z` from a reflecting plane.
    ThermalBoundary,
}

impl EnvironmentKind {
    pub const ALL: [EnvironmentKind; 4] = [
        EnvironmentKind::UnruhUnbounded,
        EnvironmentKind::UnruhBoundary,
        EnvironmentKind::ThermalUnbounded,
        EnvironmentKind::ThermalBoundary,
    ];

    pub fn has_boundary(self) -> bool {
        matches!(
            self,
            EnvironmentKind::UnruhBoundary | EnvironmentKind::ThermalBoundary
        )
    }

    pub fn is_thermal(self) -> bool {
        matches!(
            self,
            EnvironmentKind::ThermalUnbounded | EnvironmentKind::ThermalBoundary
        )
    }

    /// Name of the estimated parameter: `a` (acceleration) or `T` (temperature).
    pub fn parameter_name(self) -> &'static str {
        if self.is_thermal() {
            "T"
        } else {
            "a"
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EnvironmentKind::UnruhUnbounded => "unruh-unbounded",
            EnvironmentKind::UnruhBoundary => "unruh-boundary",
            EnvironmentKind::ThermalUnbounded => "thermal-unbounded",
            EnvironmentKind::ThermalBoundary => "thermal-boundary",
        }
    }
}

impl fmt::Display for EnvironmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnvironmentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnvironmentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown environment kind '{s}'; expected one of unruh-unbounded, \
                     unruh-boundary, thermal-unbounded, thermal-boundary"
                ))
            })
    }
}

/// An environment together with its parameter values (all dimensionless).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvironmentModel {
    kind: EnvironmentKind,
    x: f64,
    z: Option<f64>,
}

impl EnvironmentModel {
    /// `x` is `ã` or `T̃`; `z` must be given exactly for the boundary kinds.
    pub fn new(kind: EnvironmentKind, x: f64, z: Option<f64>) -> Result<Self> {
        check_positive(kind.parameter_name(), x)?;
        match (kind.has_boundary(), z) {
            (true, Some(z)) => check_positive("z", z)?,
            (true, None) => return Err(Error::invalid(format!("{kind} requires z"))),
            (false, Some(_)) => {
                return Err(Error::invalid(format!(
                    "{kind} takes no boundary distance z"
                )))
            }
            (false, None) => {}
        }
        Ok(Self { kind, x, z })
    }

    pub fn unruh_unbounded(a: f64) -> Result<Self> {
        Self::new(EnvironmentKind::UnruhUnbounded, a, None)
    }

    pub fn unruh_boundary(a: f64, z: f64) -> Result<Self> {
        Self::new(EnvironmentKind::UnruhBoundary, a, Some(z))
    }

    pub fn thermal_unbounded(t: f64) -> Result<Self> {
        Self::new(EnvironmentKind::ThermalUnbounded, t, None)
    }

    pub fn thermal_boundary(t: f64, z: f64) -> Result<Self> {
        Self::new(EnvironmentKind::ThermalBoundary, t, Some(z))
    }

    pub fn kind(&self) -> EnvironmentKind {
        self.kind
    }

    /// The estimated parameter, `ã` or `T̃`.
    pub fn parameter(&self) -> f64 {
        self.x
    }

    pub fn z(&self) -> Option<f64> {
        self.z
    }

    /// Same environment with the estimated parameter replaced.
    pub fn with_parameter(&self, x: f64) -> Result<Self> {
        Self::new(self.kind, x, self.z)
    }

    /// Dissipator rates and their derivatives with respect to the parameter.
    pub fn coefficients(&self) -> Result<DissipatorCoefficients> {
        match (self.kind, self.z) {
            (EnvironmentKind::UnruhUnbounded, _) => unruh_unbounded(self.x),
            (EnvironmentKind::UnruhBoundary, Some(z)) => unruh_boundary(self.x, z),
            (EnvironmentKind::ThermalUnbounded, _) => thermal_unbounded(self.x),
            (EnvironmentKind::ThermalBoundary, Some(z)) => thermal_boundary(self.x, z),
            (kind, None) => Err(Error::invalid(format!("{kind} requires z"))),
        }
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must be finite and > 0, got {v}"
        )))
    }
}

/// Kossakowski rates in units of `Γ₀` and their derivatives with respect to
/// the estimated parameter `X`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DissipatorCoefficients {
    pub a: f64,
    pub b: f64,
    pub da_dx: f64,
    pub db_dx: f64,
    /// `A − B`, evaluated without cancellation. Governs how far the steady
    /// state sits below the surface of the Bloch sphere.
    pub gap: f64,
}

impl DissipatorCoefficients {
    /// Coefficients with `gap` taken as the plain difference `a − b`.
    pub fn new(a: f64, b: f64, da_dx: f64, db_dx: f64) -> Self {
        Self {
            a,
            b,
            da_dx,
            db_dx,
            gap: a - b,
        }
    }

    /// Checks `A ≥ B ≥ 0` and finiteness.
    pub fn validate(&self) -> Result<()> {
        let finite = [self.a, self.b, self.da_dx, self.db_dx, self.gap]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFinite(format!(
                "dissipator coefficients A = {}, B = {}, dA = {}, dB = {}",
                self.a, self.b, self.da_dx, self.db_dx
            )));
        }
        if self.b < 0.0 || self.a < self.b {
            return Err(Error::InvalidCoefficients {
                a: self.a,
                b: self.b,
            });
        }
        Ok(())
    }
}

/// Boundary correction `f` entering the rates as `(1 − f)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryFactor {
    pub f: f64,
    /// `1 − f` without cancellation near the wall.
    pub one_minus_f: f64,
    /// `∂f/∂X` for the estimated parameter.
    pub df_dx: f64,
    /// `∂f/∂z̃`.
    pub df_dz: f64,
}

/// Below this value of `max(z̃, ãz̃)` the Unruh factor switches to its series.
const UNRUH_SERIES_CUTOFF: f64 = 1e-3;

/// `f(ã, z̃) = sin[(2/ã)·asinh(ãz̃)] / (2z̃·√(1 + ã²z̃²))`.
pub fn unruh_boundary_factor(a: f64, z: f64) -> Result<BoundaryFactor> {
    check_positive("a", a)?;
    check_positive("z", z)?;
    let w = a * z;
    if z.max(w) < UNRUH_SERIES_CUTOFF {
        // 1 − f = c2 z² + c4 z⁴ + c6 z⁶ with polynomial coefficients in ã
        let s = a * a;
        let p1 = 1.0 + s;
        let p2 = p1 * (1.0 + 4.0 * s);
        let p3 = p2 * (1.0 + 9.0 * s);
        let (c2, c4, c6) = (2.0 * p1 / 3.0, -2.0 * p2 / 15.0, 4.0 * p3 / 315.0);
        let dp1 = 2.0 * a;
        let dp2 = 10.0 * a + 16.0 * a * s;
        let dp3 = 28.0 * a + 196.0 * a * s + 216.0 * a * s * s;
        let (dc2, dc4, dc6) = (2.0 * dp1 / 3.0, -2.0 * dp2 / 15.0, 4.0 * dp3 / 315.0);
        let z2 = z * z;
        let one_minus_f = z2 * (c2 + z2 * (c4 + z2 * c6));
        let d_dx = z2 * (dc2 + z2 * (dc4 + z2 * dc6));
        let d_dz = z * (2.0 * c2 + z2 * (4.0 * c4 + z2 * 6.0 * c6));
        return Ok(BoundaryFactor {
            f: 1.0 - one_minus_f,
            one_minus_f,
            df_dx: -d_dx,
            df_dz: -d_dz,
        });
    }

    let root = w.hypot(1.0);
    let ash = w.asinh();
    let u = 2.0 * ash / a;
    let (su, cu) = u.sin_cos();
    let denom = 2.0 * z * root;
    let f = su / denom;

    // ∂u/∂ã = (2/ã²)·(w/√(1+w²) − asinh w); the bracket cancels for small w
    let bracket = if w < 1e-3 {
        let w2 = w * w;
        w * w2 * (-1.0 / 3.0 + w2 * (3.0 / 10.0 - w2 * 15.0 / 56.0))
    } else {
        w / root - ash
    };
    let du_da = 2.0 * bracket / (a * a);
    // (∂√(1+w²)/∂ã)/√(1+w²), grouped so that huge w cannot overflow
    let s = w / root;
    let df_dx = cu * du_da / denom - f * s * (z / root);

    let du_dz = 2.0 / root;
    let df_dz = cu * du_dz / denom - f * (1.0 / z + s * (a / root));

    Ok(BoundaryFactor {
        f,
        one_minus_f: 1.0 - f,
        df_dx,
        df_dz,
    })
}

/// `f(z̃) = sin(2z̃)/(2z̃)`; independent of the temperature.
pub fn thermal_boundary_factor(z: f64) -> Result<BoundaryFactor> {
    check_positive("z", z)?;
    let x = 2.0 * z;
    let one_minus_f = one_minus_sinc(x);
    // f = sin(x)/x with x = 2z̃, so ∂f/∂z̃ = 2·(x cos x − sin x)/x²
    let df_dz = if x < 1e-3 {
        -2.0 * (x / 3.0 - x * x * x / 30.0 + x.powi(5) / 840.0)
    } else {
        2.0 * (x * x.cos() - x.sin()) / (x * x)
    };
    Ok(BoundaryFactor {
        f: 1.0 - one_minus_f,
        one_minus_f,
        df_dx: 0.0,
        df_dz,
    })
}

/// `A = ½·coth(π/ã)`, `B = ½`.
pub fn unruh_unbounded(a: f64) -> Result<DissipatorCoefficients> {
    check_positive("a", a)?;
    let k = PI / a;
    Ok(DissipatorCoefficients {
        a: 0.5 * coth(k),
        b: 0.5,
        da_dx: PI / (2.0 * a * a) * csch_sq(k),
        db_dx: 0.0,
        gap: 0.5 * coth_minus_one(k),
    })
}

/// Unbounded Unruh rates scaled by `(1 − f(ã, z̃))`.
pub fn unruh_boundary(a: f64, z: f64) -> Result<DissipatorCoefficients> {
    let base = unruh_unbounded(a)?;
    let bf = unruh_boundary_factor(a, z)?;
    Ok(apply_boundary(base, bf))
}

/// `A = ½·coth(1/(2T̃))`, `B = ½`.
pub fn thermal_unbounded(t: f64) -> Result<DissipatorCoefficients> {
    check_positive("T", t)?;
    let k = 0.5 / t;
    Ok(DissipatorCoefficients {
        a: 0.5 * coth(k),
        b: 0.5,
        da_dx: 0.25 / (t * t) * csch_sq(k),
        db_dx: 0.0,
        gap: 0.5 * coth_minus_one(k),
    })
}

/// Unbounded thermal rates scaled by `(1 − sin(2z̃)/(2z̃))`.
pub fn thermal_boundary(t: f64, z: f64) -> Result<DissipatorCoefficients> {
    let base = thermal_unbounded(t)?;
    let bf = thermal_boundary_factor(z)?;
    Ok(apply_boundary(base, bf))
}

fn apply_boundary(base: DissipatorCoefficients, bf: BoundaryFactor) -> DissipatorCoefficients {
    let g = bf.one_minus_f;
    DissipatorCoefficients {
        a: base.a * g,
        b: base.b * g,
        da_dx: base.da_dx * g - base.a * bf.df_dx,
        db_dx: base.db_dx * g - base.b * bf.df_dx,
        gap: base.gap * g,
    }
}
