//! Python bindings. Parameters are the dimensionless `ã`/`T̃`, `z̃` and `τ̃`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use unruh_qfi as q;
use unruh_qfi::figures::{FigureId, Panel};
use unruh_qfi::{AxisName, QfiSurface, SweepAxis, SweepTemplate};

fn err(e: q::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = q::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

#[pyclass(name = "DissipatorCoefficients", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyCoefficients {
    #[pyo3(get)]
    a: f64,
    #[pyo3(get)]
    b: f64,
    #[pyo3(get)]
    da_dx: f64,
    #[pyo3(get)]
    db_dx: f64,
    #[pyo3(get)]
    gap: f64,
}

impl From<q::DissipatorCoefficients> for PyCoefficients {
    fn from(c: q::DissipatorCoefficients) -> Self {
        Self {
            a: c.a,
            b: c.b,
            da_dx: c.da_dx,
            db_dx: c.db_dx,
            gap: c.gap,
        }
    }
}

#[pymethods]
impl PyCoefficients {
    fn __repr__(&self) -> String {
        format!(
            "DissipatorCoefficients(a={}, b={}, da_dx={}, db_dx={})",
            self.a, self.b, self.da_dx, self.db_dx
        )
    }
}

/// One of the four environments with its parameter and, for boundary kinds,
/// the distance to the mirror.
#[pyclass(name = "EnvironmentModel", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyModel {
    inner: q::EnvironmentModel,
}

#[pymethods]
impl PyModel {
    #[new]
    #[pyo3(signature = (kind, x, z=None))]
    fn new(kind: &str, x: f64, z: Option<f64>) -> PyResult<Self> {
        let inner = q::EnvironmentModel::new(parse(kind)?, x, z).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().as_str()
    }

    #[getter]
    fn x(&self) -> f64 {
        self.inner.parameter()
    }

    #[getter]
    fn z(&self) -> Option<f64> {
        self.inner.z()
    }

    fn coefficients(&self) -> PyResult<PyCoefficients> {
        self.inner.coefficients().map(Into::into).map_err(err)
    }

    /// Bloch vector at time `tau`.
    #[pyo3(signature = (theta, tau, phi=0.0, omega=1.0))]
    fn evolve(&self, theta: f64, tau: f64, phi: f64, omega: f64) -> PyResult<(f64, f64, f64)> {
        let spec = self.spec(theta, phi, omega, tau)?;
        let w = q::evolve_bloch(&spec).map_err(err)?;
        Ok((w.w1, w.w2, w.w3))
    }

    /// Bloch vector from RK4 integration with the given step.
    #[pyo3(signature = (theta, tau, phi=0.0, omega=1.0, step=1e-3))]
    fn integrate(
        &self,
        theta: f64,
        tau: f64,
        phi: f64,
        omega: f64,
        step: f64,
    ) -> PyResult<(f64, f64, f64)> {
        let spec = self.spec(theta, phi, omega, tau)?;
        let w = q::integrate_lindblad(&spec, step).map_err(err)?;
        Ok((w.w1, w.w2, w.w3))
    }

    /// `∂ω/∂X`, analytic or by central differences.
    #[pyo3(signature = (theta, tau, phi=0.0, omega=1.0, derivative="analytic"))]
    fn derivative(
        &self,
        theta: f64,
        tau: f64,
        phi: f64,
        omega: f64,
        derivative: &str,
    ) -> PyResult<(f64, f64, f64)> {
        let state = q::InitialState::new(theta, phi).map_err(err)?;
        let t = q::ScaledTime::new(tau).map_err(err)?;
        let d = q::bloch_derivative(&self.inner, &state, omega, t, derivative_mode(derivative)?)
            .map_err(err)?;
        Ok((d.w1, d.w2, d.w3))
    }

    /// QFI of the model parameter at time `tau`.
    #[pyo3(signature = (theta, tau, phi=0.0, omega=1.0, derivative="analytic"))]
    fn qfi(&self, theta: f64, tau: f64, phi: f64, omega: f64, derivative: &str) -> PyResult<f64> {
        let state = q::InitialState::new(theta, phi).map_err(err)?;
        let t = q::ScaledTime::new(tau).map_err(err)?;
        let options = q::QfiOptions {
            derivative: derivative_mode(derivative)?,
            ..Default::default()
        };
        q::qfi_parameter_with(&self.inner, &state, omega, t, &options).map_err(err)
    }

    fn __repr__(&self) -> String {
        match self.inner.z() {
            Some(z) => format!("EnvironmentModel('{}', {}, z={z})", self.kind(), self.x()),
            None => format!("EnvironmentModel('{}', {})", self.kind(), self.x()),
        }
    }
}

impl PyModel {
    fn spec(&self, theta: f64, phi: f64, omega: f64, tau: f64) -> PyResult<q::EvolutionSpec> {
        let state = q::InitialState::new(theta, phi).map_err(err)?;
        let coeffs = self.inner.coefficients().map_err(err)?;
        q::EvolutionSpec::new(state, coeffs, omega, q::ScaledTime::new(tau).map_err(err)?)
            .map_err(err)
    }
}

fn derivative_mode(s: &str) -> PyResult<q::DerivativeMode> {
    match s {
        "analytic" => Ok(q::DerivativeMode::Analytic),
        "finite-difference" => Ok(q::DerivativeMode::FiniteDifference),
        _ => Err(PyValueError::new_err(format!(
            "derivative must be 'analytic' or 'finite-difference', got '{s}'"
        ))),
    }
}

#[pyfunction]
fn unruh_unbounded(a: f64) -> PyResult<PyCoefficients> {
    q::unruh_unbounded(a).map(Into::into).map_err(err)
}

#[pyfunction]
fn unruh_boundary(a: f64, z: f64) -> PyResult<PyCoefficients> {
    q::unruh_boundary(a, z).map(Into::into).map_err(err)
}

#[pyfunction]
fn thermal_unbounded(t: f64) -> PyResult<PyCoefficients> {
    q::thermal_unbounded(t).map(Into::into).map_err(err)
}

#[pyfunction]
fn thermal_boundary(t: f64, z: f64) -> PyResult<PyCoefficients> {
    q::thermal_boundary(t, z).map(Into::into).map_err(err)
}

fn bloch(v: (f64, f64, f64)) -> q::BlochVector {
    q::BlochVector::new(v.0, v.1, v.2)
}

/// QFI from a Bloch vector and its parameter derivative.
#[pyfunction]
fn qfi_from_bloch(omega: (f64, f64, f64), d_omega: (f64, f64, f64)) -> PyResult<f64> {
    q::qfi_from_bloch(&q::QfiInput::new(bloch(omega), bloch(d_omega))).map_err(err)
}

/// Same quantity via the symmetric logarithmic derivative.
#[pyfunction]
fn qfi_sld(omega: (f64, f64, f64), d_omega: (f64, f64, f64)) -> f64 {
    q::qfi_sld_oracle(&q::QfiInput::new(bloch(omega), bloch(d_omega)))
}

fn template(
    kind: &str,
    theta: f64,
    phi: f64,
    omega: f64,
    x: Option<f64>,
    tau: Option<f64>,
    z: Option<f64>,
) -> PyResult<SweepTemplate> {
    let mut t = SweepTemplate::new(parse(kind)?)
        .theta(theta)
        .phi(phi)
        .omega(omega);
    t.x = x;
    t.tau = tau;
    t.z = z;
    Ok(t)
}

fn axis(spec: (String, f64, f64, usize)) -> PyResult<SweepAxis> {
    SweepAxis::new(parse::<AxisName>(&spec.0)?, spec.1, spec.2, spec.3).map_err(err)
}

fn surface_dict<'py>(py: Python<'py>, s: &QfiSurface) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kind", s.kind.as_str())?;
    d.set_item("fixed", s.fixed.clone())?;
    let axes: Vec<(&str, Vec<f64>)> = [&s.axis1, &s.axis2]
        .into_iter()
        .map(|a| (a.name.as_str(), a.values()))
        .collect();
    d.set_item("axes", axes)?;
    d.set_item("values", s.values.clone())?;
    Ok(d)
}

/// QFI on a grid. Axes are `(name, min, max, count)` with name one of
/// `a`, `T`, `tau`, `theta`, `z`; every other parameter must be fixed.
#[pyfunction]
#[pyo3(signature = (kind, axis1, axis2, theta=0.0, phi=0.0, omega=1.0, x=None, tau=None, z=None))]
#[allow(clippy::too_many_arguments)]
fn sweep<'py>(
    py: Python<'py>,
    kind: &str,
    axis1: (String, f64, f64, usize),
    axis2: (String, f64, f64, usize),
    theta: f64,
    phi: f64,
    omega: f64,
    x: Option<f64>,
    tau: Option<f64>,
    z: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let t = template(kind, theta, phi, omega, x, tau, z)?;
    let (a1, a2) = (axis(axis1)?, axis(axis2)?);
    let s = py.detach(|| q::sweep(&t, a1, a2)).map_err(err)?;
    surface_dict(py, &s)
}

/// Data grid of a preset figure panel, e.g. `figure("fig3", "right")`.
#[pyfunction]
fn figure<'py>(py: Python<'py>, id: &str, panel: &str) -> PyResult<Bound<'py, PyDict>> {
    let (id, panel) = (figure_id(id)?, panel_of(panel)?);
    let s = py
        .detach(|| q::figures::figure_surface(id, panel))
        .map_err(err)?;
    surface_dict(py, &s)
}

fn figure_id(s: &str) -> PyResult<FigureId> {
    let all = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
    ];
    all.into_iter()
        .find(|f| f.to_string() == s)
        .ok_or_else(|| PyValueError::new_err(format!("unknown figure '{s}' (fig1 .. fig6)")))
}

fn panel_of(s: &str) -> PyResult<Panel> {
    [Panel::Left, Panel::Middle, Panel::Right]
        .into_iter()
        .find(|p| p.to_string() == s)
        .ok_or_else(|| PyValueError::new_err(format!("unknown panel '{s}' (left, middle, right)")))
}

/// Interior peaks as `(location, value, prominence)` tuples.
#[pyfunction]
#[pyo3(signature = (xs, ys, min_prominence=q::analysis::DEFAULT_MIN_PROMINENCE))]
fn find_peaks(xs: Vec<f64>, ys: Vec<f64>, min_prominence: f64) -> PyResult<Vec<(f64, f64, f64)>> {
    let report = q::find_peaks(&xs, &ys, min_prominence).map_err(err)?;
    Ok(report
        .peaks
        .iter()
        .map(|p| (p.location, p.value, p.prominence))
        .collect())
}

/// Maximizer of the QFI over the model parameter on `[lo, hi]`.
#[pyfunction]
#[pyo3(signature = (kind, lo, hi, theta, tau, z=None))]
fn optimal_parameter<'py>(
    py: Python<'py>,
    kind: &str,
    lo: f64,
    hi: f64,
    theta: f64,
    tau: f64,
    z: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let t = template(kind, theta, 0.0, 1.0, None, Some(tau), z)?;
    let o = py
        .detach(|| q::optimal_parameter(&t, lo, hi))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("x", o.x)?;
    d.set_item("value", o.value)?;
    d.set_item("boundary_maximum", o.boundary_maximum)?;
    d.set_item("grid_max", o.grid_max)?;
    Ok(d)
}

/// Largest spread of the QFI over initial angles θ, across `x_grid`.
#[pyfunction]
#[pyo3(signature = (kind, tau, x_grid, z=None))]
fn theta_amplitude(
    py: Python<'_>,
    kind: &str,
    tau: f64,
    x_grid: Vec<f64>,
    z: Option<f64>,
) -> PyResult<f64> {
    let t = template(kind, 0.0, 0.0, 1.0, None, None, z)?;
    py.detach(|| q::theta_amplitude(&t, tau, &x_grid))
        .map_err(err)
}

/// Runs the built-in cross-checks; returns `(name, passed, observed, bound)`.
#[pyfunction]
#[pyo3(signature = (only=None))]
fn validate(py: Python<'_>, only: Option<Vec<String>>) -> PyResult<Vec<(String, bool, f64, f64)>> {
    let only = only.unwrap_or_default();
    let results = py
        .detach(|| q::validate::run_checks(&only, &q::validate::Tolerances::default()))
        .map_err(err)?;
    Ok(results
        .into_iter()
        .map(|r| (r.name.to_string(), r.passed, r.observed, r.bound))
        .collect())
}

#[pymodule(name = "unruh_qfi")]
fn python_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PyCoefficients>()?;
    m.add_function(wrap_pyfunction!(unruh_unbounded, m)?)?;
    m.add_function(wrap_pyfunction!(unruh_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_unbounded, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(qfi_from_bloch, m)?)?;
    m.add_function(wrap_pyfunction!(qfi_sld, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(figure, m)?)?;
    m.add_function(wrap_pyfunction!(find_peaks, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_parameter, m)?)?;
    m.add_function(wrap_pyfunction!(theta_amplitude, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    Ok(())
}
