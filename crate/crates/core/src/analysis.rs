//! Parameter sweeps, peak detection and optimum search over QFI curves.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::environments::{EnvironmentKind, EnvironmentModel};
use crate::qfi::{qfi_parameter_with, QfiOptions};
use crate::state::{InitialState, ScaledTime};
use crate::{Error, Result};

/// Default relative prominence below which maxima are ignored.
pub const DEFAULT_MIN_PROMINENCE: f64 = 1e-6;

/// Grid points scanned by [`optimal_parameter`] before refinement.
pub const DEFAULT_SCAN_POINTS: usize = 400;

/// Number of initial-state angles sampled by [`theta_amplitude`].
pub const THETA_SAMPLES: usize = 64;

const GOLDEN_XTOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxisName {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "T")]
    T,
    #[serde(rename = "tau")]
    Tau,
    #[serde(rename = "theta")]
    Theta,
    #[serde(rename = "z")]
    Z,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::A => "a",
            AxisName::T => "T",
            AxisName::Tau => "tau",
            AxisName::Theta => "theta",
            AxisName::Z => "z",
        }
    }

    /// The estimated-parameter axis for an environment.
    pub fn parameter_of(kind: EnvironmentKind) -> AxisName {
        if kind.is_thermal() {
            AxisName::T
        } else {
            AxisName::A
        }
    }

    fn applies_to(self, kind: EnvironmentKind) -> bool {
        match self {
            AxisName::A => !kind.is_thermal(),
            AxisName::T => kind.is_thermal(),
            AxisName::Z => kind.has_boundary(),
            AxisName::Tau | AxisName::Theta => true,
        }
    }

    fn must_be_positive(self) -> bool {
        matches!(self, AxisName::A | AxisName::T | AxisName::Z)
    }
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AxisName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(AxisName::A),
            "T" => Ok(AxisName::T),
            "tau" => Ok(AxisName::Tau),
            "theta" => Ok(AxisName::Theta),
            "z" => Ok(AxisName::Z),
            _ => Err(Error::invalid(format!(
                "unknown axis '{s}'; expected a, T, tau, theta or z"
            ))),
        }
    }
}

/// Linearly spaced axis including both endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepAxis {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl SweepAxis {
    pub fn new(name: AxisName, min: f64, max: f64, count: usize) -> Result<Self> {
        let axis = Self {
            name,
            min,
            max,
            count,
        };
        axis.validate()?;
        Ok(axis)
    }

    /// `count` angles `2πk/count`, i.e. `[0, 2π)` without the endpoint.
    pub fn theta_periodic(count: usize) -> Result<Self> {
        let max = TAU * (count.saturating_sub(1)) as f64 / count.max(1) as f64;
        Self::new(AxisName::Theta, 0.0, max, count)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.min >= self.max {
            return Err(Error::invalid(format!(
                "axis {}: need finite min < max, got [{}, {}]",
                self.name, self.min, self.max
            )));
        }
        if self.count < 2 {
            return Err(Error::invalid(format!(
                "axis {}: count must be >= 2",
                self.name
            )));
        }
        if self.name.must_be_positive() && self.min <= 0.0 {
            return Err(Error::invalid(format!(
                "axis {}: min must be > 0, got {}",
                self.name, self.min
            )));
        }
        if self.name == AxisName::Tau && self.min < 0.0 {
            return Err(Error::invalid(format!(
                "axis tau: min must be >= 0, got {}",
                self.min
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

/// Everything needed to evaluate the QFI except the swept coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepTemplate {
    pub kind: EnvironmentKind,
    pub theta: f64,
    pub phi: f64,
    /// Effective level spacing `Ω`.
    pub omega: f64,
    /// Fixed `ã` or `T̃`.
    pub x: Option<f64>,
    pub tau: Option<f64>,
    pub z: Option<f64>,
    pub options: QfiOptions,
}

impl SweepTemplate {
    pub fn new(kind: EnvironmentKind) -> Self {
        Self {
            kind,
            theta: 0.0,
            phi: 0.0,
            omega: 1.0,
            x: None,
            tau: None,
            z: None,
            options: QfiOptions::default(),
        }
    }

    pub fn theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn x(mut self, x: f64) -> Self {
        self.x = Some(x);
        self
    }

    pub fn tau(mut self, tau: f64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn z(mut self, z: f64) -> Self {
        self.z = Some(z);
        self
    }

    pub fn options(mut self, options: QfiOptions) -> Self {
        self.options = options;
        self
    }

    fn fixed_value(&self, name: AxisName) -> Option<f64> {
        match name {
            AxisName::A | AxisName::T => self.x,
            AxisName::Tau => self.tau,
            AxisName::Z => self.z,
            AxisName::Theta => Some(self.theta),
        }
    }

    /// Checks that `free` axes plus the fixed values cover every parameter
    /// exactly once.
    pub fn check_axes(&self, free: &[AxisName]) -> Result<()> {
        for (i, n) in free.iter().enumerate() {
            if free[..i].contains(n) {
                return Err(Error::invalid(format!("axis {n} appears twice")));
            }
            if !n.applies_to(self.kind) {
                return Err(Error::invalid(format!(
                    "axis {n} does not apply to {}",
                    self.kind
                )));
            }
        }
        let x_name = AxisName::parameter_of(self.kind);
        let mut required = vec![x_name, AxisName::Tau];
        if self.kind.has_boundary() {
            required.push(AxisName::Z);
        } else if self.z.is_some() {
            return Err(Error::invalid(format!("{} takes no z", self.kind)));
        }
        for name in required {
            let fixed = self.fixed_value(name).is_some();
            let swept = free.contains(&name);
            if fixed && swept {
                return Err(Error::invalid(format!("{name} is both fixed and swept")));
            }
            if !fixed && !swept {
                return Err(Error::invalid(format!("{name} is neither fixed nor swept")));
            }
        }
        Ok(())
    }

    /// Evaluates the QFI with the given coordinates overriding the template.
    pub fn evaluate(&self, coords: &[(AxisName, f64)]) -> Result<f64> {
        let mut x = self.x;
        let mut tau = self.tau;
        let mut z = self.z;
        let mut theta = self.theta;
        for &(name, v) in coords {
            match name {
                AxisName::A | AxisName::T => x = Some(v),
                AxisName::Tau => tau = Some(v),
                AxisName::Z => z = Some(v),
                AxisName::Theta => theta = v,
            }
        }
        let x =
            x.ok_or_else(|| Error::invalid(format!("missing {}", self.kind.parameter_name())))?;
        let tau = ScaledTime::new(tau.ok_or_else(|| Error::invalid("missing tau"))?)?;
        let z = if self.kind.has_boundary() { z } else { None };
        let model = EnvironmentModel::new(self.kind, x, z)?;
        let state = InitialState::new(theta, self.phi)?;
        qfi_parameter_with(&model, &state, self.omega, tau, &self.options)
    }

    /// Fixed parameters as name/value pairs, for output metadata.
    pub fn fixed_map(&self, swept: &[AxisName]) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        m.insert("omega".to_string(), self.omega);
        m.insert("phi".to_string(), self.phi);
        let names = [
            AxisName::parameter_of(self.kind),
            AxisName::Tau,
            AxisName::Z,
            AxisName::Theta,
        ];
        for name in names {
            if swept.contains(&name) {
                continue;
            }
            if let Some(v) = self.fixed_value(name) {
                if name != AxisName::Z || self.kind.has_boundary() {
                    m.insert(name.as_str().to_string(), v);
                }
            }
        }
        m
    }
}

/// QFI values on a rectangular grid, `values[i][j]` at `(axis1[i], axis2[j])`.
#[derive(Clone, Debug, PartialEq)]
pub struct QfiSurface {
    pub kind: EnvironmentKind,
    pub fixed: BTreeMap<String, f64>,
    pub axis1: SweepAxis,
    pub axis2: SweepAxis,
    pub values: Vec<Vec<f64>>,
}

impl QfiSurface {
    /// Values along axis 1 with axis 2 held at index `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[j]).collect()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().flatten().copied().fold(0.0, f64::max)
    }
}

/// Evaluates the QFI on `axis1 × axis2`. Grid points may be computed in
/// parallel; the result does not depend on the schedule.
pub fn sweep(template: &SweepTemplate, axis1: SweepAxis, axis2: SweepAxis) -> Result<QfiSurface> {
    axis1.validate()?;
    axis2.validate()?;
    template.check_axes(&[axis1.name, axis2.name])?;
    let xs = axis1.values();
    let ys = axis2.values();
    let n2 = ys.len();
    let flat: Vec<f64> = (0..xs.len() * n2)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n2, k % n2);
            let f = template.evaluate(&[(axis1.name, xs[i]), (axis2.name, ys[j])])?;
            if !f.is_finite() || f < 0.0 {
                return Err(Error::NonFinite(format!(
                    "F = {f} at {}={}, {}={}",
                    axis1.name, xs[i], axis2.name, ys[j]
                )));
            }
            Ok(f)
        })
        .collect::<Result<_>>()?;
    let values = flat.chunks(n2).map(<[f64]>::to_vec).collect();
    Ok(QfiSurface {
        kind: template.kind,
        fixed: template.fixed_map(&[axis1.name, axis2.name]),
        axis1,
        axis2,
        values,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Peak {
    pub location: f64,
    pub value: f64,
    pub prominence: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PeakReport {
    /// Sorted by location.
    pub peaks: Vec<Peak>,
}

impl PeakReport {
    pub fn count(&self) -> usize {
        self.peaks.len()
    }
}

/// Interior local maxima of sampled data.
///
/// A sample (or the leftmost sample of a flat run) is a candidate when it
/// rises above its left neighbour and the run then falls. Isolated maxima are
/// refined by a parabola through the three bracketing samples. Candidates
/// whose prominence is at most `min_prominence · max(ys)` are dropped.
pub fn find_peaks(xs: &[f64], ys: &[f64], min_prominence: f64) -> Result<PeakReport> {
    if xs.len() != ys.len() {
        return Err(Error::invalid(format!(
            "xs and ys differ in length ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::invalid(format!(
            "find_peaks needs at least 3 points, got {n}"
        )));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("xs must be strictly increasing"));
    }
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(Error::NonFinite("find_peaks input".into()));
    }

    let threshold = min_prominence * ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut peaks = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        if ys[i] > ys[i - 1] {
            let mut j = i;
            while j + 1 < n && ys[j + 1] == ys[i] {
                j += 1;
            }
            if j + 1 < n && ys[j + 1] < ys[i] {
                let prominence = prominence(ys, i, j);
                if prominence > threshold {
                    let (location, value) = if i == j {
                        parabolic_vertex(&xs[i - 1..=i + 1], &ys[i - 1..=i + 1])
                    } else {
                        (xs[i], ys[i])
                    };
                    peaks.push(Peak {
                        location,
                        value,
                        prominence,
                    });
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    Ok(PeakReport { peaks })
}

/// Height of the run `ys[lo..=hi]` above the higher of its two bases.
fn prominence(ys: &[f64], lo: usize, hi: usize) -> f64 {
    let v = ys[lo];
    let mut left_min = v;
    for &y in ys[..lo].iter().rev() {
        if y > v {
            break;
        }
        left_min = left_min.min(y);
    }
    let mut right_min = v;
    for &y in &ys[hi + 1..] {
        if y > v {
            break;
        }
        right_min = right_min.min(y);
    }
    v - left_min.max(right_min)
}

fn parabolic_vertex(x: &[f64], y: &[f64]) -> (f64, f64) {
    let (h0, h2) = (x[0] - x[1], x[2] - x[1]);
    let (d0, d2) = (y[0] - y[1], y[2] - y[1]);
    let curv = (d0 / h0 - d2 / h2) / (h0 - h2);
    if !(curv < 0.0) {
        return (x[1], y[1]);
    }
    let slope = d0 / h0 - curv * h0;
    let t = (-slope / (2.0 * curv)).clamp(h0, h2);
    (x[1] + t, y[1] + slope * t + curv * t * t)
}

/// Result of a 1-D maximization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Optimum {
    pub x: f64,
    pub value: f64,
    /// The best grid sample sits on an interval endpoint: no interior peak.
    pub boundary_maximum: bool,
    /// Largest value seen on the coarse scan.
    pub grid_max: f64,
}

/// Maximizes `f` on `[lo, hi]`: a uniform scan of `points` samples, then
/// golden-section refinement inside the cell around the best sample.
pub fn maximize_scalar<F>(f: F, lo: f64, hi: f64, points: usize) -> Result<Optimum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let axis = SweepAxis {
        name: AxisName::A,
        min: lo,
        max: hi,
        count: points,
    };
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || points < 3 {
        return Err(Error::invalid(format!(
            "bad search interval [{lo}, {hi}] with {points} points"
        )));
    }
    let xs = axis.values();
    let fs: Vec<f64> = xs.par_iter().map(|&x| f(x)).collect::<Result<_>>()?;
    let mut best = 0;
    for (k, &v) in fs.iter().enumerate() {
        if v > fs[best] {
            best = k;
        }
    }
    let grid_max = fs[best];
    if best == 0 || best == points - 1 {
        return Ok(Optimum {
            x: xs[best],
            value: grid_max,
            boundary_maximum: true,
            grid_max,
        });
    }
    let (x, value) = golden_section_max(&f, xs[best - 1], xs[best + 1], GOLDEN_XTOL)?;
    let (x, value) = if value >= grid_max {
        (x, value)
    } else {
        (xs[best], grid_max)
    };
    Ok(Optimum {
        x,
        value,
        boundary_maximum: false,
        grid_max,
    })
}

/// Golden-section search for a maximum of a unimodal function on `[lo, hi]`.
pub fn golden_section_max<F>(f: &F, mut lo: f64, mut hi: f64, xtol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    // 1/φ
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while hi - lo > xtol {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Maximizer of the QFI over the template's estimated parameter on
/// `[lo, hi]`, with `template.x` ignored.
pub fn optimal_parameter(template: &SweepTemplate, lo: f64, hi: f64) -> Result<Optimum> {
    let x_axis = AxisName::parameter_of(template.kind);
    let free = SweepTemplate {
        x: None,
        ..*template
    };
    free.check_axes(&[x_axis])?;
    if lo <= 0.0 {
        return Err(Error::invalid(format!(
            "search interval must lie in {x_axis} > 0"
        )));
    }
    maximize_scalar(
        |x| free.evaluate(&[(x_axis, x)]),
        lo,
        hi,
        DEFAULT_SCAN_POINTS,
    )
}

/// Spread of the QFI across initial-state angles at time `tau`:
/// `max_X [max_θ F(X, θ) − min_θ F(X, θ)]` with θ on 64 points of `[0, 2π)`.
pub fn theta_amplitude(template: &SweepTemplate, tau: f64, x_grid: &[f64]) -> Result<f64> {
    let x_axis = AxisName::parameter_of(template.kind);
    let t = SweepTemplate {
        x: None,
        tau: Some(tau),
        ..*template
    };
    t.check_axes(&[x_axis])?;
    if x_grid.is_empty() {
        return Err(Error::invalid(
            "theta_amplitude needs a non-empty parameter grid",
        ));
    }
    let spreads: Vec<f64> = x_grid
        .par_iter()
        .map(|&x| {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for k in 0..THETA_SAMPLES {
                let theta = TAU * k as f64 / THETA_SAMPLES as f64;
                let f = t.evaluate(&[(x_axis, x), (AxisName::Theta, theta)])?;
                lo = lo.min(f);
                hi = hi.max(f);
            }
            Ok(hi - lo)
        })
        .collect::<Result<_>>()?;
    Ok(spreads.into_iter().fold(0.0, f64::max))
}
