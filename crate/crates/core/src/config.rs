//! Run configuration for the `sweep` and `peaks` commands.
//!
//! The file is flat TOML with a `kind` discriminator:
//!
//! ```toml
//! kind = "unruh-boundary"
//! theta = 0.0
//! z = 0.5
//! axis1 = "a"
//! axis1_min = 0.05
//! axis1_max = 10.0
//! axis1_count = 100
//! axis2 = "tau"
//! axis2_min = 0.1
//! axis2_max = 40.0
//! axis2_count = 100
//! format = "csv"
//! ```
//!
//! Unknown keys are errors. All problems found are reported together.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::analysis::{AxisName, SweepAxis, SweepTemplate, DEFAULT_MIN_PROMINENCE};
use crate::dynamics::DEFAULT_STEP;
use crate::environments::EnvironmentKind;
use crate::output::Format;
use crate::qfi::{DerivativeMode, Evolution, QfiOptions};

const KNOWN_KEYS: &[&str] = &[
    "kind",
    "theta",
    "phi",
    "omega",
    "a",
    "T",
    "tau",
    "z",
    "axis1",
    "axis1_min",
    "axis1_max",
    "axis1_count",
    "axis2",
    "axis2_min",
    "axis2_max",
    "axis2_count",
    "out",
    "format",
    "derivative",
    "evolution",
    "step",
    "min_prominence",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub template: SweepTemplate,
    pub axis1: SweepAxis,
    pub axis2: SweepAxis,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub min_prominence: f64,
}

/// Every offending field, one message each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub problems: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid config:")?;
        for p in &self.problems {
            writeln!(f, "  {p}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

struct Reader<'a> {
    table: &'a toml::Table,
    problems: Vec<String>,
}

impl<'a> Reader<'a> {
    fn float(&mut self, key: &str) -> Option<f64> {
        let v = self.table.get(key)?;
        let x = match v {
            toml::Value::Float(x) => *x,
            toml::Value::Integer(i) => *i as f64,
            _ => {
                self.problems
                    .push(format!("{key}: expected a number, got {}", v.type_str()));
                return None;
            }
        };
        if !x.is_finite() {
            self.problems.push(format!("{key}: must be finite"));
            return None;
        }
        Some(x)
    }

    fn string(&mut self, key: &str) -> Option<&'a str> {
        let v = self.table.get(key)?;
        match v.as_str() {
            Some(s) => Some(s),
            None => {
                self.problems
                    .push(format!("{key}: expected a string, got {}", v.type_str()));
                None
            }
        }
    }

    fn count(&mut self, key: &str) -> Option<usize> {
        let v = self.table.get(key)?;
        match v.as_integer() {
            Some(i) if i >= 1 => Some(i as usize),
            _ => {
                self.problems
                    .push(format!("{key}: expected a positive integer"));
                None
            }
        }
    }

    fn parsed<T: FromStr>(&mut self, key: &str, allowed: &str) -> Option<T> {
        let s = self.string(key)?;
        match s.parse() {
            Ok(t) => Some(t),
            Err(_) => {
                let msg = format!("{key}: unknown value {s:?} (expected {allowed})");
                self.problems.push(msg);
                None
            }
        }
    }

    fn require<T>(&mut self, key: &str, v: Option<T>) -> Option<T> {
        if v.is_none() && !self.table.contains_key(key) {
            self.problems.push(format!("{key}: missing"));
        }
        v
    }

    fn axis(&mut self, prefix: &str) -> Option<SweepAxis> {
        let name = self.parsed::<AxisName>(prefix, "a, T, tau, theta or z");
        let name = self.require(prefix, name);
        let min_key = format!("{prefix}_min");
        let max_key = format!("{prefix}_max");
        let count_key = format!("{prefix}_count");
        let min = self.float(&min_key);
        let min = self.require(&min_key, min);
        let max = self.float(&max_key);
        let max = self.require(&max_key, max);
        let count = self.count(&count_key);
        let count = self.require(&count_key, count);
        let axis = SweepAxis {
            name: name?,
            min: min?,
            max: max?,
            count: count?,
        };
        if let Err(e) = axis.validate() {
            self.problems.push(format!("{prefix}: {e}"));
            return None;
        }
        Some(axis)
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(s.to_string()),
        }
    }
}

fn parse_derivative(s: &str) -> Option<DerivativeMode> {
    match s {
        "analytic" => Some(DerivativeMode::Analytic),
        "finite-difference" => Some(DerivativeMode::FiniteDifference),
        _ => None,
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError {
            problems: vec![format!("syntax: {}", e.message())],
        })?;
        let mut r = Reader {
            table: &table,
            problems: Vec::new(),
        };
        for key in table.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                r.problems.push(format!("{key}: unknown key"));
            }
        }

        let kind = r.parsed::<EnvironmentKind>(
            "kind",
            "unruh-unbounded, unruh-boundary, thermal-unbounded or thermal-boundary",
        );
        let kind = r.require("kind", kind);
        let theta = r.float("theta");
        let phi = r.float("phi").unwrap_or(0.0);
        let omega = r.float("omega").unwrap_or(1.0);
        let a = r.float("a");
        let t = r.float("T");
        let tau = r.float("tau");
        let z = r.float("z");
        let axis1 = r.axis("axis1");
        let axis2 = r.axis("axis2");
        let out = r.string("out").map(PathBuf::from);
        let format = r
            .parsed::<Format>("format", "csv or json")
            .unwrap_or_default();
        let derivative = match r.string("derivative") {
            None => DerivativeMode::Analytic,
            Some(s) => parse_derivative(s).unwrap_or_else(|| {
                let msg = format!(
                    "derivative: unknown value {s:?} (expected analytic or finite-difference)"
                );
                r.problems.push(msg);
                DerivativeMode::Analytic
            }),
        };
        let integrate = match r.string("evolution") {
            None | Some("closed-form") => false,
            Some("integrator") => true,
            Some(s) => {
                let msg =
                    format!("evolution: unknown value {s:?} (expected closed-form or integrator)");
                r.problems.push(msg);
                false
            }
        };
        let step = r.float("step").unwrap_or(DEFAULT_STEP);
        let min_prominence = r.float("min_prominence").unwrap_or(DEFAULT_MIN_PROMINENCE);

        if !(step > 0.0) {
            r.problems.push("step: must be positive".into());
        }
        if min_prominence < 0.0 {
            r.problems
                .push("min_prominence: must be non-negative".into());
        }
        if !(omega > 0.0) && table.contains_key("omega") {
            r.problems.push("omega: must be positive".into());
        }

        let mut template = None;
        if let Some(kind) = kind {
            let (own, other) = if kind.is_thermal() {
                (t, "a")
            } else {
                (a, "T")
            };
            if table.contains_key(other) {
                r.problems
                    .push(format!("{other}: not a parameter of {kind}"));
            }
            if !kind.has_boundary() && table.contains_key("z") {
                r.problems.push(format!("z: not a parameter of {kind}"));
            }
            let swept: Vec<AxisName> = axis1.iter().chain(axis2.iter()).map(|ax| ax.name).collect();
            if theta.is_none() && !swept.contains(&AxisName::Theta) && !table.contains_key("theta")
            {
                r.problems
                    .push("theta: missing (fix it or sweep it)".into());
            }
            let mut tpl = SweepTemplate::new(kind)
                .phi(phi)
                .omega(omega)
                .theta(theta.unwrap_or(0.0));
            tpl.x = own;
            tpl.tau = tau;
            tpl.z = if kind.has_boundary() { z } else { None };
            tpl.options = QfiOptions {
                derivative,
                evolution: if integrate {
                    Evolution::Integrator { step }
                } else {
                    Evolution::ClosedForm
                },
            };
            if let (Some(a1), Some(a2)) = (axis1, axis2) {
                if theta.is_some() && swept.contains(&AxisName::Theta) {
                    r.problems.push("theta: both fixed and swept".into());
                }
                if let Err(e) = tpl.check_axes(&[a1.name, a2.name]) {
                    r.problems.push(format!("axes: {e}"));
                }
                let fixed = [
                    (kind.parameter_name(), tpl.x),
                    ("tau", tpl.tau),
                    ("z", tpl.z),
                ];
                for (name, v) in fixed {
                    if let Some(v) = v {
                        if v < 0.0 || (name != "tau" && v == 0.0) {
                            r.problems.push(format!("{name}: out of domain ({v})"));
                        }
                    }
                }
            }
            template = Some(tpl);
        }

        if !r.problems.is_empty() {
            return Err(ConfigError {
                problems: r.problems,
            });
        }
        Ok(RunConfig {
            template: template.expect("kind present when no problems"),
            axis1: axis1.expect("axis1 present"),
            axis2: axis2.expect("axis2 present"),
            out,
            format,
            min_prominence,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
kind = "unruh-boundary"
theta = 0.0
z = 0.5
axis1 = "a"
axis1_min = 0.05
axis1_max = 10.0
axis1_count = 20
axis2 = "tau"
axis2_min = 0.1
axis2_max = 40
axis2_count = 10
"#;

    #[test]
    fn parses_minimal_config() {
        let c = RunConfig::from_toml_str(BASE).unwrap();
        assert_eq!(c.template.kind, EnvironmentKind::UnruhBoundary);
        assert_eq!(c.template.z, Some(0.5));
        assert_eq!(c.axis2.max, 40.0);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.template.omega, 1.0);
    }

    #[test]
    fn reports_every_problem() {
        let text = format!("{BASE}\ntypo_key = 1\nformat = \"xml\"\nT = 0.3\n");
        let e = RunConfig::from_toml_str(&text).unwrap_err();
        let all = e.problems.join("\n");
        assert!(all.contains("typo_key"), "{all}");
        assert!(all.contains("format"), "{all}");
        assert!(all.contains("T: not a parameter"), "{all}");
    }

    #[test]
    fn missing_boundary_distance_is_an_error() {
        let text = BASE.replace("z = 0.5\n", "");
        let e = RunConfig::from_toml_str(&text).unwrap_err();
        assert!(e.problems.iter().any(|p| p.contains("z is neither")), "{e}");
    }

    #[test]
    fn theta_can_be_swept() {
        let text = BASE
            .replace("theta = 0.0\n", "tau = 5.0\n")
            .replace("axis2 = \"tau\"", "axis2 = \"theta\"")
            .replace("axis2_min = 0.1", "axis2_min = 0.0");
        let c = RunConfig::from_toml_str(&text).unwrap();
        assert_eq!(c.axis2.name, AxisName::Theta);
    }

    #[test]
    fn integrator_mode_uses_step() {
        let text = format!("{BASE}\nevolution = \"integrator\"\nstep = 0.01\n");
        let c = RunConfig::from_toml_str(&text).unwrap();
        assert_eq!(
            c.template.options.evolution,
            Evolution::Integrator { step: 0.01 }
        );
    }

    #[test]
    fn non_positive_parameter_is_rejected() {
        let text = BASE.replace("axis1_min = 0.05", "axis1_min = 0.0");
        assert!(RunConfig::from_toml_str(&text).is_err());
    }
}
