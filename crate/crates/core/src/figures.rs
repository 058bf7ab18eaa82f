//! Preset grids for the six standard QFI surfaces.
//!
//! | id   | environment      | axes       | panels (left, middle, right) |
//! |------|------------------|------------|------------------------------|
//! | fig1 | Unruh, unbounded | a × tau    | θ = 0, π/2, π                |
//! | fig2 | Unruh, unbounded | a × theta  | τ = 0.1, 5, 9                |
//! | fig3 | Unruh, boundary  | a × tau    | z = 0.01, 0.5, 1 (θ = 0)     |
//! | fig4 | Unruh, boundary  | a × theta  | τ = 5, 20, 40 (z = 0.5)      |
//! | fig5 | thermal, boundary| T × tau    | z = 0.01, 0.5, 1 (θ = 0)     |
//! | fig6 | thermal, boundary| T × theta  | τ = 5, 20, 40 (z = 0.5)      |

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use clap::ValueEnum;

use crate::analysis::{sweep, AxisName, QfiSurface, SweepAxis, SweepTemplate};
use crate::environments::EnvironmentKind;
use crate::Result;

pub const GRID_POINTS: usize = 100;
pub const A_RANGE: (f64, f64) = (0.05, 10.0);
pub const T_RANGE: (f64, f64) = (0.05, 5.0);
pub const TAU_RANGE_UNBOUNDED: (f64, f64) = (0.05, 10.0);
pub const TAU_RANGE_BOUNDARY: (f64, f64) = (0.1, 40.0);
pub const THETA_POINTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Panel {
    Left,
    Middle,
    Right,
}

impl Panel {
    fn pick(self, values: [f64; 3]) -> f64 {
        match self {
            Panel::Left => values[0],
            Panel::Middle => values[1],
            Panel::Right => values[2],
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fig{}", *self as u8 + 1)
    }
}

impl fmt::Display for Panel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Panel::Left => "left",
            Panel::Middle => "middle",
            Panel::Right => "right",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FigureSpec {
    pub template: SweepTemplate,
    pub axis1: SweepAxis,
    pub axis2: SweepAxis,
}

pub fn a_axis() -> SweepAxis {
    SweepAxis {
        name: AxisName::A,
        min: A_RANGE.0,
        max: A_RANGE.1,
        count: GRID_POINTS,
    }
}

pub fn t_axis() -> SweepAxis {
    SweepAxis {
        name: AxisName::T,
        min: T_RANGE.0,
        max: T_RANGE.1,
        count: GRID_POINTS,
    }
}

pub fn tau_axis(boundary: bool) -> SweepAxis {
    let (min, max) = if boundary {
        TAU_RANGE_BOUNDARY
    } else {
        TAU_RANGE_UNBOUNDED
    };
    SweepAxis {
        name: AxisName::Tau,
        min,
        max,
        count: GRID_POINTS,
    }
}

pub fn theta_axis() -> SweepAxis {
    SweepAxis::theta_periodic(THETA_POINTS).expect("64-point theta axis is valid")
}

pub fn figure_spec(id: FigureId, panel: Panel) -> FigureSpec {
    use EnvironmentKind::*;
    let (template, axis1, axis2) = match id {
        FigureId::Fig1 => (
            SweepTemplate::new(UnruhUnbounded).theta(panel.pick([0.0, FRAC_PI_2, PI])),
            a_axis(),
            tau_axis(false),
        ),
        FigureId::Fig2 => (
            SweepTemplate::new(UnruhUnbounded).tau(panel.pick([0.1, 5.0, 9.0])),
            a_axis(),
            theta_axis(),
        ),
        FigureId::Fig3 => (
            SweepTemplate::new(UnruhBoundary).z(panel.pick([0.01, 0.5, 1.0])),
            a_axis(),
            tau_axis(true),
        ),
        FigureId::Fig4 => (
            SweepTemplate::new(UnruhBoundary)
                .z(0.5)
                .tau(panel.pick([5.0, 20.0, 40.0])),
            a_axis(),
            theta_axis(),
        ),
        FigureId::Fig5 => (
            SweepTemplate::new(ThermalBoundary).z(panel.pick([0.01, 0.5, 1.0])),
            t_axis(),
            tau_axis(true),
        ),
        FigureId::Fig6 => (
            SweepTemplate::new(ThermalBoundary)
                .z(0.5)
                .tau(panel.pick([5.0, 20.0, 40.0])),
            t_axis(),
            theta_axis(),
        ),
    };
    FigureSpec {
        template,
        axis1,
        axis2,
    }
}

pub fn figure_surface(id: FigureId, panel: Panel) -> Result<QfiSurface> {
    let spec = figure_spec(id, panel);
    sweep(&spec.template, spec.axis1, spec.axis2)
}
