//! Bloch-vector evolution under the two-rate Kossakowski–Lindblad generator.
//!
//! With `A`, `B` in units of `Γ₀` and `τ` the scaled time,
//!
//! ```text
//! ω₁(τ) = sinθ cos(Ωτ + φ) e^{−2Aτ}
//! ω₂(τ) = sinθ sin(Ωτ + φ) e^{−2Aτ}
//! ω₃(τ) = cosθ e^{−4Aτ} − (B/A)(1 − e^{−4Aτ})
//! ```
//!
//! [`integrate_lindblad`] integrates the generating ODE directly and is kept
//! as a cross-check of the closed form.

use crate::environments::DissipatorCoefficients;
use crate::special::{exp_neg, one_minus_exp_neg};
use crate::state::{initial_bloch, BlochVector, InitialState, ScaledTime};
use crate::{Error, Result};

/// Default fixed step of the RK4 integrator, in scaled-time units.
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionSpec {
    pub initial: InitialState,
    pub coeffs: DissipatorCoefficients,
    /// Effective level spacing `Ω` in units of `Γ₀`.
    pub omega: f64,
    pub tau: ScaledTime,
}

impl EvolutionSpec {
    pub fn new(
        initial: InitialState,
        coeffs: DissipatorCoefficients,
        omega: f64,
        tau: ScaledTime,
    ) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::invalid(format!("Omega must be finite, got {omega}")));
        }
        Ok(Self {
            initial,
            coeffs,
            omega,
            tau,
        })
    }

    fn check(&self) -> Result<()> {
        self.coeffs.validate()?;
        if !self.omega.is_finite() {
            return Err(Error::invalid(format!(
                "Omega must be finite, got {}",
                self.omega
            )));
        }
        Ok(())
    }
}

/// Closed-form Bloch vector at time `spec.tau`.
pub fn evolve_bloch(spec: &EvolutionSpec) -> Result<BlochVector> {
    spec.check()?;
    let tau = spec.tau.value();
    let theta = spec.initial.theta();
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = (spec.omega * tau + spec.initial.phi()).sin_cos();
    let DissipatorCoefficients { a, b, .. } = spec.coeffs;

    if a == 0.0 {
        // validate() guarantees b == 0 here: pure precession
        return Ok(BlochVector::new(st * cp, st * sp, ct));
    }

    let e2 = exp_neg(2.0 * a * tau);
    let e4 = exp_neg(4.0 * a * tau);
    let m = one_minus_exp_neg(4.0 * a * tau);
    let r = b / a;
    Ok(BlochVector::new(
        st * cp * e2,
        st * sp * e2,
        ct * e4 - r * m,
    ))
}

/// Long-time limit `(0, 0, −B/A)`.
pub fn steady_state(coeffs: &DissipatorCoefficients) -> Result<BlochVector> {
    if !(coeffs.a > 0.0) {
        return Err(Error::invalid(format!(
            "steady state needs A > 0, got {}",
            coeffs.a
        )));
    }
    Ok(BlochVector::new(0.0, 0.0, -coeffs.b / coeffs.a))
}

/// `1 − |ω(τ)|²` evaluated from the closed form without cancellation.
///
/// With `m = 1 − e^{−4Aτ}` and `r = B/A`,
/// `1 − |ω|² = m·[(1 − r)(1 + r) + (cosθ + r)² e^{−4Aτ}]`, where `1 − r` comes
/// from the accurate gap `A − B` and `cosθ + r = 2cos²(θ/2) − (1 − r)`.
pub fn purity_defect(spec: &EvolutionSpec) -> Result<f64> {
    spec.check()?;
    let DissipatorCoefficients { a, b, gap, .. } = spec.coeffs;
    if a == 0.0 {
        return Ok(0.0);
    }
    let tau = spec.tau.value();
    let m = one_minus_exp_neg(4.0 * a * tau);
    let e4 = exp_neg(4.0 * a * tau);
    let r = b / a;
    let q = gap / a;
    let c_plus_r = cos_plus_ratio(spec.initial.theta(), q);
    Ok(m * (q * (1.0 + r) + c_plus_r * c_plus_r * e4))
}

/// `cosθ + r` written as `(1 + cosθ) − (1 − r)` for accuracy near `θ = π`.
pub(crate) fn cos_plus_ratio(theta: f64, one_minus_r: f64) -> f64 {
    let c = (0.5 * theta).cos();
    2.0 * c * c - one_minus_r
}

fn lindblad_rhs(w: [f64; 3], a: f64, b: f64, omega: f64) -> [f64; 3] {
    [
        -2.0 * a * w[0] - omega * w[1],
        omega * w[0] - 2.0 * a * w[1],
        -4.0 * a * w[2] - 4.0 * b,
    ]
}

fn axpy(w: [f64; 3], h: f64, k: [f64; 3]) -> [f64; 3] {
    [w[0] + h * k[0], w[1] + h * k[1], w[2] + h * k[2]]
}

/// Largest step count [`integrate_lindblad`] will take.
pub const MAX_STEPS: f64 = 1e8;

/// Fixed-step classical RK4 integration of the Bloch equations.
///
/// The number of steps is `ceil(τ/step)`, with the step shrunk to land exactly
/// on `τ`.
pub fn integrate_lindblad(spec: &EvolutionSpec, step: f64) -> Result<BlochVector> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::invalid(format!(
            "integrator step must be > 0, got {step}"
        )));
    }
    spec.check()?;
    let tau = spec.tau.value();
    let mut w = initial_bloch(&spec.initial).to_array();
    if tau == 0.0 {
        return Ok(w.into());
    }
    let n = (tau / step).ceil().max(1.0);
    if n > MAX_STEPS {
        return Err(Error::invalid(format!(
            "tau/step = {n:e} exceeds the {MAX_STEPS:e} step limit"
        )));
    }
    let n = n as u64;
    let h = tau / n as f64;
    let DissipatorCoefficients { a, b, .. } = spec.coeffs;
    let f = |w| lindblad_rhs(w, a, b, spec.omega);
    for _ in 0..n {
        let k1 = f(w);
        let k2 = f(axpy(w, 0.5 * h, k1));
        let k3 = f(axpy(w, 0.5 * h, k2));
        let k4 = f(axpy(w, h, k3));
        for i in 0..3 {
            w[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    Ok(w.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::{
        thermal_boundary, thermal_unbounded, unruh_boundary, unruh_unbounded,
    };
    use std::f64::consts::PI;

    fn spec(
        theta: f64,
        phi: f64,
        coeffs: DissipatorCoefficients,
        omega: f64,
        tau: f64,
    ) -> EvolutionSpec {
        EvolutionSpec::new(
            InitialState::new(theta, phi).unwrap(),
            coeffs,
            omega,
            ScaledTime::new(tau).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_time_is_initial_state() {
        let c = unruh_unbounded(1.3).unwrap();
        let s = spec(0.7, 0.4, c, 1.0, 0.0);
        assert_eq!(evolve_bloch(&s).unwrap(), initial_bloch(&s.initial));
    }

    #[test]
    fn relaxes_to_steady_state() {
        let c = unruh_unbounded(2.0).unwrap();
        let s = spec(1.1, 0.0, c, 1.0, 700.0 / (4.0 * c.a) + 1.0);
        let w = evolve_bloch(&s).unwrap();
        let ss = steady_state(&c).unwrap();
        assert!(w.w1.abs() < 1e-150 && w.w2.abs() < 1e-150);
        assert!((w.w3 - ss.w3).abs() < 1e-15);
        assert!((ss.w3 + (PI / 2.0).tanh()).abs() < 1e-15);
    }

    #[test]
    fn excited_state_arithmetic() {
        // ω₃ = e^{−2} − (1 − e^{−2}) = 2e^{−2} − 1
        let c = DissipatorCoefficients::new(0.5, 0.5, 0.0, 0.0);
        let w = evolve_bloch(&spec(0.0, 0.0, c, 1.0, 1.0)).unwrap();
        assert!((w.w3 - (2.0 * (-2.0f64).exp() - 1.0)).abs() < 1e-15);
        assert!((w.w3 + 0.729_329).abs() < 1e-6);
    }

    #[test]
    fn rejects_rate_without_decay() {
        let c = DissipatorCoefficients::new(0.0, 0.1, 0.0, 0.0);
        assert!(matches!(
            evolve_bloch(&spec(0.3, 0.0, c, 1.0, 1.0)),
            Err(Error::InvalidCoefficients { .. })
        ));
        let still = DissipatorCoefficients::new(0.0, 0.0, 0.0, 0.0);
        let w = evolve_bloch(&spec(0.3, 0.0, still, 2.0, 1.5)).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-15);
        assert!(steady_state(&still).is_err());
    }

    #[test]
    fn steady_states_match_thermal_polarization() {
        let w = steady_state(&thermal_unbounded(0.5).unwrap()).unwrap();
        assert!((w.w3 + 1f64.tanh()).abs() < 1e-15);
        assert!((w.w3 + 0.761_594).abs() < 1e-6);
        for &a in &[0.3, 1.0, 4.0] {
            let free = steady_state(&unruh_unbounded(a).unwrap()).unwrap();
            let wall = steady_state(&unruh_boundary(a, 0.37).unwrap()).unwrap();
            assert!((free.w3 + (PI / a).tanh()).abs() < 1e-15);
            assert!((free.w3 - wall.w3).abs() < 1e-15);
        }
        let free = steady_state(&thermal_unbounded(0.8).unwrap()).unwrap();
        let wall = steady_state(&thermal_boundary(0.8, 2.0).unwrap()).unwrap();
        assert!((free.w3 - wall.w3).abs() < 1e-15);
    }

    #[test]
    fn purity_defect_matches_direct_evaluation() {
        for &(theta, a, tau) in &[
            (0.3, 1.0, 0.5),
            (2.0, 3.0, 2.0),
            (PI, 0.7, 1.0),
            (0.0, 5.0, 0.1),
        ] {
            let s = spec(theta, 0.2, unruh_unbounded(a).unwrap(), 1.0, tau);
            let w = evolve_bloch(&s).unwrap();
            let d = purity_defect(&s).unwrap();
            assert!(
                (d - (1.0 - w.norm_sq())).abs() < 1e-14,
                "theta={theta} a={a}"
            );
        }
    }

    #[test]
    fn purity_defect_resolves_nearly_pure_ground_state() {
        // r = tanh(π/ã) rounds to 1, yet the defect stays positive
        let s = spec(PI, 0.0, unruh_unbounded(0.1).unwrap(), 1.0, 3.0);
        let d = purity_defect(&s).unwrap();
        let w = evolve_bloch(&s).unwrap();
        assert!(d > 0.0 && d < 1e-25);
        assert!((1.0 - w.norm_sq()).abs() < 1e-15);
    }

    #[test]
    fn integrator_tracks_closed_form() {
        let c = thermal_boundary(0.9, 0.6).unwrap();
        let s = spec(1.2, 0.5, c, 2.0, 7.3);
        let exact = evolve_bloch(&s).unwrap();
        let rk = integrate_lindblad(&s, DEFAULT_STEP).unwrap();
        assert!(exact.max_abs_diff(&rk) < 1e-10);
    }

    #[test]
    fn integrator_edge_cases() {
        let rot = DissipatorCoefficients::new(0.0, 0.0, 0.0, 0.0);
        let s = spec(1.0, 0.3, rot, 3.0, 10.0);
        let w = integrate_lindblad(&s, 1e-3).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-9);

        let s = spec(0.0, 0.0, unruh_unbounded(1.0).unwrap(), 5.0, 4.0);
        let w = integrate_lindblad(&s, 1e-3).unwrap();
        assert_eq!((w.w1, w.w2), (0.0, 0.0));

        assert!(integrate_lindblad(&s, 0.0).is_err());
        assert!(integrate_lindblad(&s, -1e-3).is_err());
        let zero = spec(0.4, 0.0, unruh_unbounded(1.0).unwrap(), 1.0, 0.0);
        assert_eq!(
            integrate_lindblad(&zero, 1e-3).unwrap(),
            initial_bloch(&zero.initial)
        );
    }
}
