//! Quantum Fisher information (QFI) of acceleration and temperature for a
//! two-level detector evolving under Kossakowski–Lindblad dynamics.
//!
//! Three environments are modelled: a uniformly accelerated detector in the
//! Minkowski vacuum (with and without a reflecting boundary) and a static
//! detector in a thermal bath (with and without a boundary). Each environment
//! reduces to a pair of dissipator rates `(A, B)`; the Bloch vector then
//! relaxes in closed form and the QFI follows from the Bloch-sphere formula
//!
//! ```text
//! F_X = |∂ω|² + (ω·∂ω)² / (1 − |ω|²)      (|ω| < 1)
//! F_X = |∂ω|²                               (|ω| = 1)
//! ```
//!
//! which bounds any unbiased estimator through `Var(X) ≥ 1 / (N F_X)` for `N`
//! repeated measurements.
//!
//! All quantities are dimensionless: time in units of the spontaneous
//! emission rate `Γ₀ = μ²ω₀/2π`, acceleration and temperature in units of
//! `ω₀`, and distance to the boundary in units of `1/ω₀`. [`state::to_dimensionless`]
//! converts from physical inputs. The QFI is reported per unit of the scaled
//! parameter; the physical value is `F_a = F_ã / ω₀²` (likewise for `T`).

// `!(x > 0.0)` is used on purpose to reject NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod environments;
mod error;
pub mod figures;
pub mod output;
pub mod qfi;
pub mod special;
pub mod state;
pub mod validate;

pub use error::{Error, Result};

pub use analysis::{
    find_peaks, optimal_parameter, sweep, theta_amplitude, AxisName, Optimum, Peak, PeakReport,
    QfiSurface, SweepAxis, SweepTemplate,
};
pub use dynamics::{evolve_bloch, integrate_lindblad, purity_defect, steady_state, EvolutionSpec};
pub use environments::{
    thermal_boundary, thermal_unbounded, unruh_boundary, unruh_unbounded, BoundaryFactor,
    DissipatorCoefficients, EnvironmentKind, EnvironmentModel,
};
pub use qfi::{
    bloch_derivative, qfi_from_bloch, qfi_parameter, qfi_parameter_with, qfi_sld_oracle,
    DerivativeMode, Evolution, QfiInput, QfiOptions,
};
pub use state::{initial_bloch, to_dimensionless, BlochVector, InitialState, ScaledTime};
