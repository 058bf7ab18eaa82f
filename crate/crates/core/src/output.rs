//! CSV and JSON serialization of QFI surfaces.
//!
//! Floats are written as the shortest decimal that round-trips, so identical
//! inputs produce byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

use crate::analysis::QfiSurface;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Shortest round-trip decimal, with exponent notation for very large or
/// small magnitudes.
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}

fn check_finite(surface: &QfiSurface) -> Result<()> {
    match surface.values.iter().flatten().find(|v| !v.is_finite()) {
        Some(v) => Err(Error::NonFinite(format!("surface value {v}"))),
        None => Ok(()),
    }
}

/// `#`-prefixed metadata, a header `axis1,axis2,F`, then one row per point.
pub fn to_csv(surface: &QfiSurface) -> Result<String> {
    check_finite(surface)?;
    let mut s = String::new();
    let _ = writeln!(s, "# meta");
    let _ = writeln!(s, "# kind={}", surface.kind);
    for (k, v) in &surface.fixed {
        let _ = writeln!(s, "# {k}={}", format_float(*v));
    }
    for (label, axis) in [("axis1", &surface.axis1), ("axis2", &surface.axis2)] {
        let _ = writeln!(
            s,
            "# {label}={} min={} max={} count={}",
            axis.name,
            format_float(axis.min),
            format_float(axis.max),
            axis.count
        );
    }
    let _ = writeln!(s, "{},{},F", surface.axis1.name, surface.axis2.name);
    let xs = surface.axis1.values();
    let ys = surface.axis2.values();
    for (x, row) in xs.iter().zip(&surface.values) {
        for (y, f) in ys.iter().zip(row) {
            let _ = writeln!(
                s,
                "{},{},{}",
                format_float(*x),
                format_float(*y),
                format_float(*f)
            );
        }
    }
    Ok(s)
}

#[derive(Serialize)]
struct JsonAxis<'a> {
    name: &'a str,
    min: f64,
    max: f64,
    count: usize,
}

#[derive(Serialize)]
struct JsonMeta<'a> {
    kind: &'a str,
    fixed: &'a BTreeMap<String, f64>,
    axes: [JsonAxis<'a>; 2],
}

#[derive(Serialize)]
struct JsonSurface<'a> {
    meta: JsonMeta<'a>,
    values: &'a [Vec<f64>],
}

/// `{meta:{kind, fixed, axes:[{name,min,max,count}]}, values:[[...]]}`.
pub fn to_json(surface: &QfiSurface) -> Result<String> {
    check_finite(surface)?;
    let axis = |a: &crate::analysis::SweepAxis| JsonAxis {
        name: a.name.as_str(),
        min: a.min,
        max: a.max,
        count: a.count,
    };
    let doc = JsonSurface {
        meta: JsonMeta {
            kind: surface.kind.as_str(),
            fixed: &surface.fixed,
            axes: [axis(&surface.axis1), axis(&surface.axis2)],
        },
        values: &surface.values,
    };
    let mut s = serde_json::to_string(&doc).map_err(|e| Error::NonFinite(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn render(surface: &QfiSurface, format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(surface),
        Format::Json => to_json(surface),
    }
}
