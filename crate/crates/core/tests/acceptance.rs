//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::process::{Command, ExitCode};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unruh_qfi::figures::{a_axis, figure_spec, t_axis, tau_axis, FigureId, Panel};
use unruh_qfi::{
    bloch_derivative, evolve_bloch, find_peaks, integrate_lindblad, purity_defect, qfi_from_bloch,
    qfi_parameter, qfi_sld_oracle, sweep, thermal_boundary, thermal_unbounded, theta_amplitude,
    unruh_boundary, unruh_unbounded, AxisName, BlochVector, DerivativeMode, EnvironmentKind,
    EnvironmentModel, EvolutionSpec, InitialState, QfiInput, QfiSurface, ScaledTime, SweepTemplate,
};

type Outcome = Result<(bool, String), unruh_qfi::Error>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 7_2024;

fn kinds() -> [EnvironmentKind; 4] {
    EnvironmentKind::ALL
}

fn model(kind: EnvironmentKind, x: f64, z: f64) -> EnvironmentModel {
    EnvironmentModel::new(kind, x, kind.has_boundary().then_some(z)).unwrap()
}

fn state(theta: f64) -> InitialState {
    InitialState::new(theta, 0.0).unwrap()
}

fn t(tau: f64) -> ScaledTime {
    ScaledTime::new(tau).unwrap()
}

fn c1_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let kind = kinds()[i % 4];
        let x = if kind.is_thermal() {
            rng.random_range(0.05..5.0)
        } else {
            rng.random_range(0.05..10.0)
        };
        let m = model(kind, x, rng.random_range(0.01..2.0));
        let s = InitialState::new(rng.random_range(0.0..PI), rng.random_range(0.0..TAU))?;
        let spec = EvolutionSpec::new(
            s,
            m.coefficients()?,
            rng.random_range(0.1..5.0),
            t(rng.random_range(0.0..20.0)),
        )?;
        worst = worst.max(evolve_bloch(&spec)?.max_abs_diff(&integrate_lindblad(&spec, 1e-3)?));
    }
    Ok((
        worst <= 1e-8,
        format!("max |Δω| = {worst:e} (bound 1e-8, 100 specs)"),
    ))
}

fn c2_derivative() -> Outcome {
    let mut worst_rel = 0.0f64;
    let mut worst_abs = 0.0f64;
    for kind in kinds() {
        for z in [0.5, 1.0] {
            for x in [0.5, 1.0, 2.0, 5.0, 10.0] {
                for tau in [0.5, 2.0, 5.0, 10.0] {
                    for theta in [0.0, FRAC_PI_2, PI] {
                        let m = model(kind, x, z);
                        let an = bloch_derivative(
                            &m,
                            &state(theta),
                            1.0,
                            t(tau),
                            DerivativeMode::Analytic,
                        )?;
                        let fd = bloch_derivative(
                            &m,
                            &state(theta),
                            1.0,
                            t(tau),
                            DerivativeMode::FiniteDifference,
                        )?;
                        let err = (an - fd).norm();
                        if an.norm() >= 1e-10 {
                            worst_rel = worst_rel.max(err / an.norm());
                        } else {
                            worst_abs = worst_abs.max(err);
                        }
                    }
                }
            }
        }
    }
    Ok((
        worst_rel <= 1e-6 && worst_abs <= 1e-10,
        format!("max relative error = {worst_rel:e} (bound 1e-6), max absolute on tiny ∂ω = {worst_abs:e} (bound 1e-10)"),
    ))
}

fn c3_qfi_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut worst = 0.0f64;
    let mut check = |input: &QfiInput| -> Result<(), unruh_qfi::Error> {
        let f = qfi_from_bloch(input)?;
        let g = qfi_sld_oracle(input);
        worst = worst.max((f - g).abs() / f.max(1.0));
        Ok(())
    };
    let mut n = 0;
    while n < 1000 {
        let w = BlochVector::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if w.norm() >= 0.999 {
            continue;
        }
        let d = BlochVector::new(
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
        );
        check(&QfiInput::new(w, d))?;
        n += 1;
    }
    let spec = figure_spec(FigureId::Fig1, Panel::Left);
    for a in spec.axis1.values() {
        for tau in spec.axis2.values() {
            let m = EnvironmentModel::unruh_unbounded(a)?;
            let s = state(spec.template.theta);
            let ev = EvolutionSpec::new(s, m.coefficients()?, 1.0, t(tau))?;
            let w = evolve_bloch(&ev)?;
            let d = bloch_derivative(&m, &s, 1.0, t(tau), DerivativeMode::Analytic)?;
            check(&QfiInput::new(w, d).with_purity_defect(purity_defect(&ev)?))?;
        }
    }
    Ok((
        worst <= 1e-9,
        format!("max |ΔF|/max(1,F) = {worst:e} (bound 1e-9, 1000 random + 10000 grid)"),
    ))
}

fn c4_zero_start() -> Outcome {
    let mut worst = 0.0f64;
    for kind in kinds() {
        for x in [0.5, 1.0, 2.0] {
            for theta in [0.0, FRAC_PI_4, FRAC_PI_2, PI] {
                worst = worst.max(qfi_parameter(
                    &model(kind, x, 0.5),
                    &state(theta),
                    1.0,
                    ScaledTime::ZERO,
                )?);
            }
        }
    }
    Ok((
        worst <= 1e-12,
        format!("max F(τ=0) = {worst:e} (bound 1e-12)"),
    ))
}

fn c5_reparameterization() -> Outcome {
    let mut worst = 0.0f64;
    for a in [0.5, 1.0, 2.0, 5.0, 10.0] {
        for tau in [0.5, 2.0, 5.0, 10.0] {
            for theta in [0.0, FRAC_PI_2, PI] {
                let fa = qfi_parameter(
                    &EnvironmentModel::unruh_unbounded(a)?,
                    &state(theta),
                    1.0,
                    t(tau),
                )?;
                let ft = qfi_parameter(
                    &EnvironmentModel::thermal_unbounded(a / TAU)?,
                    &state(theta),
                    1.0,
                    t(tau),
                )?;
                worst = worst.max((fa - ft / (TAU * TAU)).abs() / fa);
            }
        }
    }
    Ok((
        worst <= 1e-9,
        format!("max |F_a − F_T/(2π)²|/F_a = {worst:e} (bound 1e-9)"),
    ))
}

fn c6_gibbs() -> Outcome {
    let mut worst = 0.0f64;
    for x in [0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0] {
        for (m, expected) in [
            (EnvironmentModel::unruh_unbounded(x)?, -(PI / x).tanh()),
            (EnvironmentModel::thermal_unbounded(x)?, -(0.5 / x).tanh()),
        ] {
            let c = m.coefficients()?;
            for theta in [0.0, 1.0, PI] {
                for factor in [1.0, 3.0] {
                    let tau = factor * 700.0 / (4.0 * c.a);
                    let w = evolve_bloch(&EvolutionSpec::new(state(theta), c, 1.0, t(tau))?)?;
                    worst = worst.max((w.w3 - expected).abs());
                }
            }
        }
    }
    Ok((
        worst <= 1e-12,
        format!("max |ω₃ − ω₃(Gibbs)| = {worst:e} (bound 1e-12)"),
    ))
}

fn c7_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let kind = kinds()[rng.random_range(0..4)];
        let x = if kind.is_thermal() {
            rng.random_range(0.05..5.0)
        } else {
            rng.random_range(0.05..10.0)
        };
        let m = model(kind, x, rng.random_range(0.01..2.0));
        let theta = rng.random_range(0.0..PI);
        let tau = t(rng.random_range(0.0..40.0));
        let base = qfi_parameter(&m, &state(theta), 1.0, tau)?;
        for omega in [0.1, 1.0, 10.0, 100.0] {
            for phi in [0.0, 1.0, 2.0, PI] {
                let f = qfi_parameter(&m, &InitialState::new(theta, phi)?, omega, tau)?;
                worst = worst.max((f - base).abs());
            }
        }
    }
    Ok((
        worst <= 1e-12,
        format!("max |F(Ω,φ) − F(1,0)| = {worst:e} (bound 1e-12)"),
    ))
}

fn slice_peak_counts(
    surface: &QfiSurface,
    min_prominence: f64,
) -> Result<Vec<usize>, unruh_qfi::Error> {
    let xs = surface.axis1.values();
    (0..surface.axis2.count)
        .map(|j| Ok(find_peaks(&xs, &surface.column(j), min_prominence)?.count()))
        .collect()
}

fn c8_fig1_peak() -> Outcome {
    let tpl = SweepTemplate::new(EnvironmentKind::UnruhUnbounded)
        .theta(0.0)
        .tau(5.0);
    let xs = a_axis().values();
    let ys: Vec<f64> = xs
        .iter()
        .map(|&a| tpl.evaluate(&[(AxisName::A, a)]))
        .collect::<Result<_, _>>()?;
    let report = find_peaks(&xs, &ys, 1e-6)?;
    let top = report.peaks.iter().map(|p| p.value).fold(0.0, f64::max);
    let (first, last) = (ys[0] / top, ys[ys.len() - 1] / top);
    let ok = report.count() == 1 && first < 0.1 && last < 0.1;
    let loc = report.peaks.first().map_or(f64::NAN, |p| p.location);
    Ok((ok, format!("{} peak(s), at a = {loc:.4}, F = {top:.6}; endpoint ratios {first:.2e}, {last:.2e} (< 0.1)", report.count())))
}

fn c9_fig3() -> Outcome {
    let unbounded = sweep(
        &SweepTemplate::new(EnvironmentKind::UnruhUnbounded).theta(0.0),
        a_axis(),
        tau_axis(true),
    )?;
    let near = sweep(
        &figure_spec(FigureId::Fig3, Panel::Left).template,
        a_axis(),
        tau_axis(true),
    )?;
    let enhanced = near.max_value() > unbounded.max_value();
    let far = figure_spec(FigureId::Fig3, Panel::Right);
    let counts = slice_peak_counts(&sweep(&far.template, far.axis1, far.axis2)?, 1e-6)?;
    let taus = far.axis2.values();
    let doubles: Vec<f64> = counts
        .iter()
        .zip(&taus)
        .filter(|(c, _)| **c == 2)
        .map(|(_, t)| *t)
        .collect();
    let detail = format!(
        "max F z=0.01: {:.6} vs unbounded {:.6} ({}); z=1 two-peak slices: {} (first τ = {})",
        near.max_value(),
        unbounded.max_value(),
        if enhanced { "enhanced" } else { "NOT enhanced" },
        doubles.len(),
        doubles.first().map_or("none".into(), |t| format!("{t:.3}")),
    );
    Ok((enhanced && !doubles.is_empty(), detail))
}

fn c10_fig5() -> Outcome {
    let mut all_single = true;
    let mut detail = String::new();
    let mut maxima = Vec::new();
    for panel in [Panel::Left, Panel::Middle, Panel::Right] {
        let spec = figure_spec(FigureId::Fig5, panel);
        let surface = sweep(&spec.template, spec.axis1, spec.axis2)?;
        let counts = slice_peak_counts(&surface, 1e-6)?;
        let worst = counts.iter().copied().max().unwrap_or(0);
        let multi = counts.iter().filter(|&&c| c > 1).count();
        all_single &= worst <= 1;
        detail.push_str(&format!(
            "z={}: max count {worst} ({multi} slices > 1); ",
            spec.template.z.unwrap()
        ));
        maxima.push(
            (0..surface.axis2.count)
                .map(|j| surface.column(j).into_iter().fold(0.0, f64::max))
                .collect::<Vec<_>>(),
        );
    }
    // early window: consecutive leading slices where z=0.01 stays below both others
    let early = (0..maxima[0].len())
        .take_while(|&j| maxima[0][j] < maxima[1][j] && maxima[0][j] < maxima[2][j])
        .count();
    let taus = tau_axis(true).values();
    detail.push_str(&format!(
        "z=0.01 below z=0.5,1 for the first {early} slices (τ ≤ {:.3})",
        if early > 0 { taus[early - 1] } else { f64::NAN }
    ));
    Ok((all_single && early >= 2, detail))
}

fn c11_periodicity() -> Outcome {
    let mut ok = true;
    let mut detail = String::new();
    for (label, unbounded_kind, boundary_kind, grid) in [
        (
            "a",
            EnvironmentKind::UnruhUnbounded,
            EnvironmentKind::UnruhBoundary,
            a_axis().values(),
        ),
        (
            "T",
            EnvironmentKind::ThermalUnbounded,
            EnvironmentKind::ThermalBoundary,
            t_axis().values(),
        ),
    ] {
        let ub = SweepTemplate::new(unbounded_kind);
        let bd = SweepTemplate::new(boundary_kind).z(0.5);
        let d = |tpl: &SweepTemplate, tau| theta_amplitude(tpl, tau, &grid);
        let (u01, u5, u9) = (d(&ub, 0.1)?, d(&ub, 5.0)?, d(&ub, 9.0)?);
        let (b01, b9) = (d(&bd, 0.1)?, d(&bd, 9.0)?);
        let fades = u01 > u5 && u5 > u9;
        let protected = b9 / b01 > u9 / u01;
        ok &= fades && protected;
        detail.push_str(&format!(
            "{label}: Δ unbounded {u01:.3e} > {u5:.3e} > {u9:.3e} ({}); ratio boundary {:.3e} vs unbounded {:.3e} ({}); ",
            if fades { "fades" } else { "NOT fading" },
            b9 / b01,
            u9 / u01,
            if protected { "longer-lived" } else { "NOT longer-lived" }
        ));
    }
    Ok((ok, detail.trim_end_matches("; ").to_string()))
}

fn c12_boundary_limits() -> Outcome {
    let mut node = 0.0f64;
    for x in t_axis().values() {
        let (b, u) = (thermal_boundary(x, FRAC_PI_2)?, thermal_unbounded(x)?);
        node = node.max((b.a - u.a).abs()).max((b.b - u.b).abs());
    }
    let mut far = 0.0f64;
    for a in a_axis().values() {
        let (b, u) = (unruh_boundary(a, 100.0)?, unruh_unbounded(a)?);
        far = far
            .max((b.a / u.a - 1.0).abs())
            .max((b.b / u.b - 1.0).abs());
    }
    let mut wall = 0.0f64;
    for x in [0.05, 0.5, 1.0, 2.0, 5.0, 10.0] {
        for c in [unruh_boundary(x, 1e-8)?, thermal_boundary(x, 1e-8)?] {
            wall = wall.max(c.a).max(c.b);
        }
    }
    Ok((
        node <= 1e-14 && far < 1e-3 && wall <= 1e-7,
        format!("z=π/2 thermal diff {node:e} (≤1e-14); z=100 relative {far:e} (<1e-3); z=1e-8 max(A,B) {wall:e} (≤1e-7)"),
    ))
}

fn c13_determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut outputs = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("run{k}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_unruh-qfi"))
            .args(["figure", "fig1", "left", "--out"])
            .arg(&path)
            .status()
            .expect("spawn unruh-qfi");
        if !status.success() {
            return Ok((false, format!("run {k} exited with {status}")));
        }
        outputs.push(std::fs::read(&path).expect("read output"));
    }
    let same = outputs[0] == outputs[1];
    Ok((
        same,
        format!("{} bytes, identical: {same}", outputs[0].len()),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        (
            "oracle equivalence (closed form vs RK4)",
            c1_oracle_equivalence,
        ),
        (
            "derivative correctness (analytic vs central differences)",
            c2_derivative,
        ),
        (
            "QFI oracle equivalence (Bloch formula vs SLD)",
            c3_qfi_oracle,
        ),
        ("zero-information start", c4_zero_start),
        ("Unruh-thermal reparameterization", c5_reparameterization),
        ("Gibbs steady state", c6_gibbs),
        ("Ω/φ invariance", c7_invariance),
        ("fig1: single interior peak in a", c8_fig1_peak),
        ("fig3: boundary enhancement and double peaks", c9_fig3),
        ("fig5: at most one peak, early ordering in z", c10_fig5),
        (
            "fig2/4/6: periodicity fading and boundary protection",
            c11_periodicity,
        ),
        ("boundary limits", c12_boundary_limits),
        ("determinism of figure output", c13_determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (passed, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {detail}",
            i + 1,
            if passed { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
