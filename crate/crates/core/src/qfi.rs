//! Quantum Fisher information of the estimated parameter.
//!
//! The production path differentiates the closed-form Bloch vector
//! analytically and evaluates the Bloch-sphere formula. Two independent
//! checks exist alongside it: central finite differences for `∂ω`, and a
//! symmetric-logarithmic-derivative evaluation that works on the 2×2 density
//! matrix instead of the Bloch vector.

use num_complex::Complex64;

use crate::dynamics::{
    cos_plus_ratio, evolve_bloch, integrate_lindblad, purity_defect, EvolutionSpec,
};
use crate::environments::{DissipatorCoefficients, EnvironmentModel};
use crate::special::{exp_neg, one_minus_exp_neg};
use crate::state::{BlochVector, InitialState, ScaledTime};
use crate::{Error, Result};

/// Threshold on `1 − |ω|²` below which a state counts as pure.
pub const PURE_EPS: f64 = 1e-9;

/// Eigenvalue-sum cutoff excluding the null subspace in the SLD sum.
const SLD_NULL_CUTOFF: f64 = 1e-12;

/// Tolerance on `|ω|` exceeding one.
const NORM_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QfiInput {
    pub omega: BlochVector,
    /// `∂ω/∂X`.
    pub d_omega: BlochVector,
    /// `1 − |ω|²` when known more accurately than the vector itself gives it.
    pub purity_defect: Option<f64>,
}

impl QfiInput {
    pub fn new(omega: BlochVector, d_omega: BlochVector) -> Self {
        Self {
            omega,
            d_omega,
            purity_defect: None,
        }
    }

    pub fn with_purity_defect(mut self, defect: f64) -> Self {
        self.purity_defect = Some(defect);
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DerivativeMode {
    #[default]
    Analytic,
    FiniteDifference,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Evolution {
    #[default]
    ClosedForm,
    /// RK4 integration of the Bloch equations with the given step.
    Integrator { step: f64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QfiOptions {
    pub derivative: DerivativeMode,
    pub evolution: Evolution,
}

/// Central-difference step for parameter value `x`.
pub fn fd_step(x: f64) -> f64 {
    1e-5 * x.abs().max(1.0)
}

/// `F = |∂ω|² + (ω·∂ω)²/(1 − |ω|²)`, with the pure-state branch `F = |∂ω|²`.
///
/// Without a supplied purity defect, states with `1 − |ω|² ≤ 1e-9` use the
/// pure branch, which is only consistent when `∂ω` is tangent to the sphere;
/// a radial derivative there is a [`Error::DegenerateBoundary`]. A supplied
/// positive defect always selects the mixed-state formula.
pub fn qfi_from_bloch(input: &QfiInput) -> Result<f64> {
    let w = input.omega;
    let d = input.d_omega;
    if !w.is_finite() || !d.is_finite() {
        return Err(Error::NonFinite(format!("QFI input w={w}, dw={d}")));
    }
    let n2 = w.norm_sq();
    if n2.sqrt() > 1.0 + NORM_SLACK {
        return Err(Error::invalid(format!(
            "Bloch vector outside the unit ball: |w| = {}",
            n2.sqrt()
        )));
    }
    let dd = d.norm_sq();
    let wd = w.dot(&d);

    let defect = match input.purity_defect {
        Some(def) if def > 0.0 => return Ok(dd + wd * wd / def),
        Some(_) => 0.0,
        None => 1.0 - n2,
    };
    if defect > PURE_EPS {
        return Ok(dd + wd * wd / defect);
    }
    if wd.abs() <= PURE_EPS.sqrt() * dd.sqrt() {
        Ok(dd)
    } else {
        Err(Error::DegenerateBoundary { defect, radial: wd })
    }
}

/// QFI from the spectral decomposition of `ρ = (I + ω·σ)/2`:
/// `F = Σ_{p_i + p_j > δ} 2|⟨i|∂ρ|j⟩|² / (p_i + p_j)`.
pub fn qfi_sld_oracle(input: &QfiInput) -> f64 {
    let rho = density_matrix(&input.omega, 1.0);
    let drho = density_matrix(&input.d_omega, 0.0);
    let (p, v) = hermitian_eigen_2x2(&rho);

    let mut f = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let s = p[i] + p[j];
            if s <= SLD_NULL_CUTOFF {
                continue;
            }
            let m = braket(&v[i], &drho, &v[j]);
            f += 2.0 * m.norm_sqr() / s;
        }
    }
    f
}

type Mat2 = [[Complex64; 2]; 2];

/// `(trace·I + ω·σ)/2`.
fn density_matrix(w: &BlochVector, trace: f64) -> Mat2 {
    let h = 0.5;
    [
        [
            Complex64::new(h * (trace + w.w3), 0.0),
            Complex64::new(h * w.w1, -h * w.w2),
        ],
        [
            Complex64::new(h * w.w1, h * w.w2),
            Complex64::new(h * (trace - w.w3), 0.0),
        ],
    ]
}

fn braket(u: &[Complex64; 2], m: &Mat2, v: &[Complex64; 2]) -> Complex64 {
    let mv = [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ];
    u[0].conj() * mv[0] + u[1].conj() * mv[1]
}

/// Eigenpairs of a 2×2 Hermitian matrix by one Jacobi rotation.
fn hermitian_eigen_2x2(m: &Mat2) -> ([f64; 2], [[Complex64; 2]; 2]) {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = m[0][1];
    let babs = b.norm();
    // H = P S Pᴴ with P = diag(1, e^{−iφ}) and S real symmetric
    let phase = if babs > 0.0 {
        (b / babs).conj()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let t = 0.5 * (2.0 * babs).atan2(a - d);
    let (s, c) = t.sin_cos();
    let l1 = a * c * c + 2.0 * babs * s * c + d * s * s;
    let l2 = a * s * s - 2.0 * babs * s * c + d * c * c;
    let v1 = [Complex64::new(c, 0.0), phase * s];
    let v2 = [Complex64::new(-s, 0.0), phase * c];
    ([l1, l2], [v1, v2])
}

fn evolution_spec(
    model: &EnvironmentModel,
    state: &InitialState,
    omega: f64,
    tau: ScaledTime,
) -> Result<EvolutionSpec> {
    EvolutionSpec::new(*state, model.coefficients()?, omega, tau)
}

fn evolve(spec: &EvolutionSpec, evolution: Evolution) -> Result<BlochVector> {
    match evolution {
        Evolution::ClosedForm => evolve_bloch(spec),
        Evolution::Integrator { step } => integrate_lindblad(spec, step),
    }
}

/// `∂ω/∂X` of the closed-form trajectory. `Ω` is treated as independent of `X`.
pub fn bloch_derivative(
    model: &EnvironmentModel,
    state: &InitialState,
    omega: f64,
    tau: ScaledTime,
    mode: DerivativeMode,
) -> Result<BlochVector> {
    bloch_derivative_with(model, state, omega, tau, mode, Evolution::ClosedForm)
}

/// As [`bloch_derivative`], with finite differences taken on the chosen
/// evolution. The analytic mode always differentiates the closed form.
pub fn bloch_derivative_with(
    model: &EnvironmentModel,
    state: &InitialState,
    omega: f64,
    tau: ScaledTime,
    mode: DerivativeMode,
    evolution: Evolution,
) -> Result<BlochVector> {
    match mode {
        DerivativeMode::Analytic => analytic_derivative(&evolution_spec(model, state, omega, tau)?),
        DerivativeMode::FiniteDifference => {
            let x = model.parameter();
            let h = fd_step(x);
            let plus = evolve(
                &evolution_spec(&model.with_parameter(x + h)?, state, omega, tau)?,
                evolution,
            )?;
            let minus = evolve(
                &evolution_spec(&model.with_parameter(x - h)?, state, omega, tau)?,
                evolution,
            )?;
            Ok((0.5 / h) * (plus - minus))
        }
    }
}

fn analytic_derivative(spec: &EvolutionSpec) -> Result<BlochVector> {
    let w = evolve_bloch(spec)?;
    let tau = spec.tau.value();
    let theta = spec.initial.theta();
    let DissipatorCoefficients {
        a,
        b,
        da_dx,
        db_dx,
        gap,
    } = spec.coeffs;

    let d1 = -2.0 * tau * da_dx * w.w1;
    let d2 = -2.0 * tau * da_dx * w.w2;
    if a == 0.0 {
        // A, B → 0 limit of the z-component: ω₃ ≈ cosθ(1 − 4Aτ) − 4Bτ
        let d3 = -4.0 * tau * (theta.cos() * da_dx + db_dx);
        return Ok(BlochVector::new(d1, d2, d3));
    }
    let e4 = exp_neg(4.0 * a * tau);
    let m = one_minus_exp_neg(4.0 * a * tau);
    let dr = (a * db_dx - b * da_dx) / (a * a);
    let c_plus_r = cos_plus_ratio(theta, gap / a);
    let d3 = -4.0 * tau * da_dx * e4 * c_plus_r - dr * m;
    Ok(BlochVector::new(d1, d2, d3))
}

/// QFI of the model's parameter (`ã` or `T̃`) at time `tau`.
pub fn qfi_parameter(
    model: &EnvironmentModel,
    state: &InitialState,
    omega: f64,
    tau: ScaledTime,
) -> Result<f64> {
    let spec = evolution_spec(model, state, omega, tau)?;
    let w = evolve_bloch(&spec)?;
    let dw = analytic_derivative(&spec)?;
    let defect = purity_defect(&spec)?;
    qfi_from_bloch(&QfiInput::new(w, dw).with_purity_defect(defect))
}

/// QFI with a non-default derivative or evolution path.
///
/// Anything other than the analytic closed form goes through the plain
/// Bloch-vector formula, without the accurate purity defect.
pub fn qfi_parameter_with(
    model: &EnvironmentModel,
    state: &InitialState,
    omega: f64,
    tau: ScaledTime,
    options: &QfiOptions,
) -> Result<f64> {
    if options.derivative == DerivativeMode::Analytic && options.evolution == Evolution::ClosedForm
    {
        return qfi_parameter(model, state, omega, tau);
    }
    let spec = evolution_spec(model, state, omega, tau)?;
    let w = evolve(&spec, options.evolution)?;
    let dw = bloch_derivative_with(
        model,
        state,
        omega,
        tau,
        options.derivative,
        options.evolution,
    )?;
    qfi_from_bloch(&QfiInput::new(w, dw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::EnvironmentKind;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn v(a: f64, b: f64, c: f64) -> BlochVector {
        BlochVector::new(a, b, c)
    }

    #[test]
    fn bloch_formula_examples() {
        let zero = QfiInput::new(v(0.1, 0.2, 0.3), BlochVector::ZERO);
        assert_eq!(qfi_from_bloch(&zero).unwrap(), 0.0);

        let mixed = QfiInput::new(v(0.0, 0.0, 0.5), v(0.0, 0.0, 0.1));
        let f = qfi_from_bloch(&mixed).unwrap();
        assert!((f - (0.01 + 0.0025 / 0.75)).abs() < 1e-16);

        let pure = QfiInput::new(v(0.0, 0.0, 1.0), v(0.2, 0.0, 0.0));
        assert!((qfi_from_bloch(&pure).unwrap() - 0.04).abs() < 1e-16);
    }

    #[test]
    fn radial_derivative_on_the_sphere_is_degenerate() {
        let bad = QfiInput::new(v(0.0, 0.0, 1.0), v(0.0, 0.0, 0.1));
        assert!(matches!(
            qfi_from_bloch(&bad),
            Err(Error::DegenerateBoundary { .. })
        ));
        let outside = QfiInput::new(v(0.0, 0.0, 1.001), v(0.0, 0.0, 0.1));
        assert!(qfi_from_bloch(&outside).is_err());
        // an accurate positive defect resolves the same geometry
        let resolved = bad.with_purity_defect(1e-12);
        let f = qfi_from_bloch(&resolved).unwrap();
        assert!((f - (0.01 + 0.01 / 1e-12)).abs() / f < 1e-15);
    }

    #[test]
    fn sld_oracle_examples() {
        let cases = [
            (v(0.0, 0.0, 0.5), v(0.0, 0.0, 0.1), 0.01 + 0.0025 / 0.75),
            (v(0.0, 0.0, 1.0), v(0.2, 0.0, 0.0), 0.04),
            (BlochVector::ZERO, v(0.1, 0.0, 0.0), 0.01),
            (v(0.3, -0.2, 0.1), BlochVector::ZERO, 0.0),
        ];
        for (w, d, expected) in cases {
            let f = qfi_sld_oracle(&QfiInput::new(w, d));
            assert!(
                (f - expected).abs() < 1e-15,
                "w={w} d={d}: {f} vs {expected}"
            );
        }
    }

    #[test]
    fn sld_oracle_agrees_off_axis() {
        let w = v(0.3, -0.4, 0.5);
        let d = v(-0.2, 0.7, 0.05);
        let a = qfi_from_bloch(&QfiInput::new(w, d)).unwrap();
        let b = qfi_sld_oracle(&QfiInput::new(w, d));
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn zero_time_carries_no_information() {
        let state = InitialState::new(0.9, 0.1).unwrap();
        for kind in EnvironmentKind::ALL {
            let z = kind.has_boundary().then_some(0.5);
            let m = EnvironmentModel::new(kind, 1.0, z).unwrap();
            let d = bloch_derivative(&m, &state, 1.0, ScaledTime::ZERO, DerivativeMode::Analytic)
                .unwrap();
            assert_eq!(d, BlochVector::ZERO);
            assert_eq!(
                qfi_parameter(&m, &state, 1.0, ScaledTime::ZERO).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn excited_state_has_no_transverse_derivative() {
        let m = EnvironmentModel::unruh_boundary(1.5, 0.7).unwrap();
        let d = bloch_derivative(
            &m,
            &InitialState::excited(),
            1.0,
            ScaledTime::new(3.0).unwrap(),
            DerivativeMode::Analytic,
        )
        .unwrap();
        assert_eq!((d.w1, d.w2), (0.0, 0.0));
    }

    #[test]
    fn steady_state_derivative_and_qfi() {
        // a~ = 2, θ = 0, 4Aτ well past the underflow guard
        let m = EnvironmentModel::unruh_unbounded(2.0).unwrap();
        let tau = ScaledTime::new(400.0).unwrap();
        let d = bloch_derivative(
            &m,
            &InitialState::excited(),
            1.0,
            tau,
            DerivativeMode::Analytic,
        )
        .unwrap();
        assert!((d.w3 - 0.124_746_041_573_112_4).abs() < 1e-14);
        let f = qfi_parameter(&m, &InitialState::excited(), 1.0, tau).unwrap();
        assert!((f - 0.097_975_311_942_624_22).abs() < 1e-14);
    }

    #[test]
    fn finite_differences_match_analytic() {
        let state = InitialState::new(1.0, 0.3).unwrap();
        let tau = ScaledTime::new(2.5).unwrap();
        for m in [
            EnvironmentModel::unruh_unbounded(1.2).unwrap(),
            EnvironmentModel::unruh_boundary(1.2, 0.8).unwrap(),
            EnvironmentModel::thermal_unbounded(0.6).unwrap(),
            EnvironmentModel::thermal_boundary(0.6, 0.8).unwrap(),
        ] {
            let an = bloch_derivative(&m, &state, 1.0, tau, DerivativeMode::Analytic).unwrap();
            let fd =
                bloch_derivative(&m, &state, 1.0, tau, DerivativeMode::FiniteDifference).unwrap();
            assert!(
                an.max_abs_diff(&fd) <= 1e-7 * an.norm(),
                "{:?}: {an} vs {fd}",
                m.kind()
            );
        }
    }

    #[test]
    fn reparameterization_between_acceleration_and_temperature() {
        let state = InitialState::new(FRAC_PI_2, 0.0).unwrap();
        let tau = ScaledTime::new(2.0).unwrap();
        let a = 1.7;
        let fa = qfi_parameter(
            &EnvironmentModel::unruh_unbounded(a).unwrap(),
            &state,
            1.0,
            tau,
        )
        .unwrap();
        let ft = qfi_parameter(
            &EnvironmentModel::thermal_unbounded(a / (2.0 * PI)).unwrap(),
            &state,
            1.0,
            tau,
        )
        .unwrap();
        let expected = ft / (4.0 * PI * PI);
        assert!((fa - expected).abs() <= 1e-12 * fa);
    }

    #[test]
    fn alternative_paths_agree() {
        let m = EnvironmentModel::thermal_boundary(0.8, 1.3).unwrap();
        let state = InitialState::new(0.4, 0.0).unwrap();
        let tau = ScaledTime::new(1.5).unwrap();
        let base = qfi_parameter(&m, &state, 1.0, tau).unwrap();
        let opts = QfiOptions {
            derivative: DerivativeMode::FiniteDifference,
            evolution: Evolution::Integrator { step: 1e-3 },
        };
        let alt = qfi_parameter_with(&m, &state, 1.0, tau, &opts).unwrap();
        assert!((alt - base).abs() < 1e-7 * base);
    }
}
