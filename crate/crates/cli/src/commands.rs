//! The three subcommands.

use std::f64::consts::PI;
use std::time::Instant;

use circspec_core::fredholm::e_orthogonal_limit;
use circspec_core::painleve::{sigma_piii_conjectured_asymptote, SigmaSolver};
use circspec_core::spectrum::{
    assemble_finite_spectrum, assemble_limit_spectra, assemble_limit_spectrum, default_s_star,
    sample_finite_gen_fn, sample_limit_gen_fn, snap_s_star, spectrum_at_zero_exact, FiniteOptions,
    LimitOptions, PhiRule,
};
use circspec_core::{xi_of_omega, Beta, Route, Sign};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::grid::parse_grid;
use crate::output::{emit, fmt12, json_document, Cell, Format, Table};
use crate::{Failure, GenfnArgs, KernelArg, PhiRuleArg, RouteArg, SpectrumArgs, ValidateArgs};

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn beta_of(b: u32) -> Result<Beta, Failure> {
    Beta::try_from(b).map_err(|_| Failure::Usage(format!("--beta must be 1, 2 or 4, got {b}")))
}

fn positive_n(n: Option<usize>) -> Result<Option<usize>, Failure> {
    match n {
        Some(0) => usage("--N must be a positive integer"),
        other => Ok(other),
    }
}

/// Routes the finite-`N` generating function supports for `(β, N)`.
fn check_finite_route(beta: Beta, n: usize, route: Route) -> Result<(), Failure> {
    if beta == Beta::One && n % 2 == 1 && matches!(route, Route::Fredholm | Route::Painleve) {
        return usage(format!(
            "the {} route needs an odd orthogonal group; for beta 1 use an even N or the determinant/recurrence routes",
            route.name()
        ));
    }
    Ok(())
}

fn check_limit_route(route: Route) -> Result<(), Failure> {
    match route {
        Route::Fredholm | Route::Painleve => Ok(()),
        r => usage(format!(
            "the limit has no {} route; use fredholm or painleve",
            r.name()
        )),
    }
}

fn grid_text(values: &[f64], pattern: Option<&str>) -> String {
    pattern.map(str::to_string).unwrap_or_else(|| {
        values
            .iter()
            .map(|&w| fmt12(w))
            .collect::<Vec<_>>()
            .join(",")
    })
}

#[derive(Serialize)]
struct SpectrumConfig {
    command: &'static str,
    beta: u32,
    #[serde(rename = "N")]
    n: Option<usize>,
    limit: bool,
    omega: String,
    route: Route,
    s_star: Option<f64>,
    grid_spacing: Option<f64>,
    phi_rule: Option<PhiRuleArg>,
    timings: bool,
    threads: Option<usize>,
}

struct Row {
    omega: f64,
    value: f64,
    err_estimate: f64,
    route: &'static str,
    wall_ms: f64,
}

pub fn spectrum(a: &SpectrumArgs) -> Result<(), Failure> {
    let beta = beta_of(a.beta)?;
    let n = positive_n(a.n)?;
    let omegas = match &a.omega_grid {
        Some(pattern) => parse_grid(pattern).map_err(Failure::Usage)?,
        None => a.omega.clone(),
    };
    if omegas.is_empty() {
        return usage("empty frequency grid");
    }
    let default_route = if a.limit {
        RouteArg::Fredholm
    } else {
        RouteArg::Determinant
    };
    let route: Route = a.route.unwrap_or(default_route).into();
    let rows = match n {
        Some(n) => finite_rows(a, beta, n, route, &omegas)?,
        None => limit_rows(a, beta, route, &omegas)?,
    };
    let table = Table {
        columns: vec!["omega", "value", "err_estimate", "route", "wall_ms"],
        rows: rows
            .into_iter()
            .map(|r| {
                vec![
                    Cell::Num(r.omega),
                    Cell::Num(r.value),
                    Cell::Num(r.err_estimate),
                    Cell::Text(r.route.to_string()),
                    Cell::Num(r.wall_ms),
                ]
            })
            .collect(),
    };
    let config = SpectrumConfig {
        command: "spectrum",
        beta: a.beta,
        n,
        limit: a.limit,
        omega: grid_text(&omegas, a.omega_grid.as_deref()),
        route,
        s_star: a.s_star,
        grid_spacing: a.grid_spacing,
        phi_rule: a.phi_rule,
        timings: a.timings,
        threads: a.common.threads,
    };
    let text = match a.common.format {
        Format::Csv => table.csv(),
        Format::Json => json_document(&config, table.json_rows()),
    };
    emit(a.common.output.as_deref(), &text).map_err(Failure::Io)
}

fn finite_rows(
    a: &SpectrumArgs,
    beta: Beta,
    n: usize,
    route: Route,
    omegas: &[f64],
) -> Result<Vec<Row>, Failure> {
    if a.s_star.is_some() || a.grid_spacing.is_some() {
        return usage("--s-star and --grid-spacing apply only with --limit");
    }
    check_finite_route(beta, n, route)?;
    if let Some(w) = omegas.iter().find(|w| !(0.0..=PI).contains(*w)) {
        return usage(format!("frequency {w} outside [0, π]"));
    }
    let opts = FiniteOptions {
        route,
        phi_rule: match a.phi_rule.unwrap_or(PhiRuleArg::Gauss) {
            PhiRuleArg::Gauss => PhiRule::Gauss,
            PhiRuleArg::UniformGrid => PhiRule::UniformGrid,
        },
    };
    let results: Vec<Result<Row, String>> = omegas
        .par_iter()
        .map(|&omega| {
            let start = Instant::now();
            let (value, err_estimate, label) = if omega == 0.0 {
                let v = spectrum_at_zero_exact(beta, n).map_err(|e| e.to_string())?;
                (v, 0.0, "exact")
            } else {
                let v = assemble_finite_spectrum(beta, n, omega, &opts)
                    .map_err(|e| format!("at (omega = {omega}, route = {}): {e}", route.name()))?;
                (v.value, v.err_estimate, route.name())
            };
            let wall_ms = if a.timings {
                start.elapsed().as_secs_f64() * 1e3
            } else {
                0.0
            };
            Ok(Row {
                omega,
                value,
                err_estimate,
                route: label,
                wall_ms,
            })
        })
        .collect();
    results
        .into_iter()
        .map(|r| r.map_err(Failure::Numerical))
        .collect()
}

fn limit_rows(
    a: &SpectrumArgs,
    beta: Beta,
    route: Route,
    omegas: &[f64],
) -> Result<Vec<Row>, Failure> {
    if a.phi_rule.is_some() {
        return usage("--phi-rule applies only at finite N");
    }
    check_limit_route(route)?;
    let target = a.s_star.unwrap_or_else(|| default_s_star(beta));
    let grid_spacing = a.grid_spacing.unwrap_or(0.1);
    if !(grid_spacing > 0.0 && grid_spacing <= 1.0) {
        return usage(format!("--grid-spacing {grid_spacing} outside (0, 1]"));
    }
    for &w in omegas {
        if !(w > 0.0 && w <= PI) {
            return usage(format!(
                "frequency {w} outside (0, π]; the limit diverges at 0"
            ));
        }
        snap_s_star(w, target).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let opts = LimitOptions {
        s_star_target: Some(target),
        grid_spacing,
        route,
    };
    let start = Instant::now();
    let values = match assemble_limit_spectra(beta, omegas, &opts) {
        Ok(v) => v,
        Err(batch) => {
            for &w in omegas {
                if let Err(e) = assemble_limit_spectrum(beta, w, &opts) {
                    return Err(Failure::Numerical(format!(
                        "at (omega = {w}, route = {}): {e}",
                        route.name()
                    )));
                }
            }
            return Err(Failure::Numerical(format!(
                "limit sweep, route = {}: {batch}",
                route.name()
            )));
        }
    };
    // Samples are shared across the sweep, so the batch time is split evenly.
    let wall_ms = if a.timings {
        start.elapsed().as_secs_f64() * 1e3 / omegas.len() as f64
    } else {
        0.0
    };
    Ok(values
        .into_iter()
        .map(|v| {
            if let Some(w) = &v.warning {
                eprintln!("circspec: warning at omega = {}: {w}", v.omega);
            }
            Row {
                omega: v.omega,
                value: v.value,
                err_estimate: v.err_estimate,
                route: v.route.name(),
                wall_ms,
            }
        })
        .collect())
}

#[derive(Serialize)]
struct GenfnConfig {
    command: &'static str,
    beta: Option<u32>,
    #[serde(rename = "N")]
    n: Option<usize>,
    limit: bool,
    kernel: Option<KernelArg>,
    omega: Option<f64>,
    xi: [f64; 2],
    grid: String,
    route: Route,
    threads: Option<usize>,
}

pub fn genfn(a: &GenfnArgs) -> Result<(), Failure> {
    let beta = beta_of(a.beta.unwrap_or(2))?;
    let n = positive_n(a.n)?;
    let xi = match (a.omega, a.xi) {
        (Some(w), _) => xi_of_omega(w),
        (None, Some((re, im))) => Complex64::new(re, im),
        (None, None) => return usage("one of --omega or --xi is required"),
    };
    let default_route = if a.limit {
        RouteArg::Fredholm
    } else {
        RouteArg::Determinant
    };
    let route: Route = a.route.unwrap_or(default_route).into();
    let (abscissa, grid_pattern, values) = match n {
        Some(n) => {
            let Some(pattern) = &a.phi_grid else {
                return usage("finite N needs --phi-grid");
            };
            check_finite_route(beta, n, route)?;
            let phis = parse_grid(pattern).map_err(Failure::Usage)?;
            if let Some(p) = phis.iter().find(|p| !(0.0..=PI).contains(*p)) {
                return usage(format!("angle {p} outside [0, π]"));
            }
            let values = sample_finite_gen_fn(beta, n, xi, &phis, route).map_err(|e| {
                Failure::Numerical(format!("route = {}, xi = {xi}: {e}", route.name()))
            })?;
            (("phi", phis), pattern.clone(), values)
        }
        None => {
            let Some(pattern) = &a.s_grid else {
                return usage("the limit needs --s-grid");
            };
            check_limit_route(route)?;
            let lengths = parse_grid(pattern).map_err(Failure::Usage)?;
            if let Some(s) = lengths.iter().find(|s| **s < 0.0) {
                return usage(format!("length {s} is negative"));
            }
            let values = limit_gen_fn(a.kernel, beta, xi, &lengths, route).map_err(|e| {
                Failure::Numerical(format!("route = {}, xi = {xi}: {e}", route.name()))
            })?;
            (("s", lengths), pattern.clone(), values)
        }
    };
    let table = Table {
        columns: vec![abscissa.0, "re", "im"],
        rows: abscissa
            .1
            .iter()
            .zip(&values)
            .map(|(&x, e)| vec![Cell::Num(x), Cell::Num(e.re), Cell::Num(e.im)])
            .collect(),
    };
    let config = GenfnConfig {
        command: "genfn",
        beta: a.kernel.is_none().then_some(a.beta.unwrap_or(2)),
        n,
        limit: a.limit,
        kernel: a.kernel,
        omega: a.omega,
        xi: [xi.re, xi.im],
        grid: grid_pattern,
        route,
        threads: a.common.threads,
    };
    let text = match a.common.format {
        Format::Csv => table.csv(),
        Format::Json => json_document(&config, table.json_rows()),
    };
    emit(a.common.output.as_deref(), &text).map_err(Failure::Io)
}

fn limit_gen_fn(
    kernel: Option<KernelArg>,
    beta: Beta,
    xi: Complex64,
    lengths: &[f64],
    route: Route,
) -> circspec_core::Result<Vec<Complex64>> {
    let sign = match kernel {
        None => return sample_limit_gen_fn(beta, xi, lengths, route),
        Some(KernelArg::Sine) => return sample_limit_gen_fn(Beta::Two, xi, lengths, route),
        Some(KernelArg::SinePlus) => Sign::Plus,
        Some(KernelArg::SineMinus) => Sign::Minus,
    };
    if route == Route::Painleve {
        let inner: Vec<usize> = (0..lengths.len()).filter(|&i| lengths[i] > 0.0).collect();
        let ts: Vec<f64> = inner.iter().map(|&i| (PI * lengths[i]).powi(2)).collect();
        let traj = SigmaSolver::default().piii(sign, xi, &ts)?;
        let mut out = vec![Complex64::new(1.0, 0.0); lengths.len()];
        for (k, &i) in inner.iter().enumerate() {
            out[i] = traj.gen_fn(k).value;
        }
        return Ok(out);
    }
    lengths
        .par_iter()
        .map(|&s| Ok(e_orthogonal_limit(sign, s, xi, None)?.value))
        .collect()
}

#[derive(Serialize)]
struct ValidateConfig {
    command: &'static str,
    omega: f64,
    threads: Option<usize>,
}

struct Check {
    name: &'static str,
    max_abs_diff: f64,
    tolerance: f64,
}

fn max_diff(pairs: impl IntoIterator<Item = (Complex64, Complex64)>) -> f64 {
    pairs
        .into_iter()
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

fn numerical(route: &str) -> impl Fn(circspec_core::Error) -> Failure + '_ {
    move |e| Failure::Numerical(format!("{route}: {e}"))
}

pub fn validate(a: &ValidateArgs) -> Result<(), Failure> {
    if !(a.omega > 0.0 && a.omega <= PI) {
        return usage(format!("frequency {} outside (0, π]", a.omega));
    }
    let omegas = [PI / 4.0, 2.0 * PI / 3.0, PI];
    let phis = [0.7, 1.9, 2.9];
    let lengths = [0.5, 1.5, 3.0];
    let mut det_rec = 0.0f64;
    let mut det_fred = 0.0f64;
    for n in [3usize, 8, 20] {
        for &w in &omegas {
            let xi = xi_of_omega(w);
            let det = sample_finite_gen_fn(Beta::Two, n, xi, &phis, Route::Determinant)
                .map_err(numerical("determinant"))?;
            let rec = sample_finite_gen_fn(Beta::Two, n, xi, &phis, Route::Recurrence)
                .map_err(numerical("recurrence"))?;
            let fred = sample_finite_gen_fn(Beta::Two, n, xi, &phis, Route::Fredholm)
                .map_err(numerical("fredholm"))?;
            det_rec = det_rec.max(max_diff(det.iter().copied().zip(rec)));
            det_fred = det_fred.max(max_diff(det.iter().copied().zip(fred)));
        }
    }
    let ts: Vec<f64> = lengths.iter().map(|s| (PI * s).powi(2)).collect();
    let mut tau_fred = 0.0f64;
    // At ω = π the determinant is real and changes sign, which log E cannot follow.
    for w in [0.7, 1.9, 2.8] {
        let xi = xi_of_omega(w);
        let traj = SigmaSolver::default()
            .piii(Sign::Minus, xi, &ts)
            .map_err(numerical("painleve"))?;
        for (k, &s) in lengths.iter().enumerate() {
            let f = e_orthogonal_limit(Sign::Minus, s, xi, None).map_err(numerical("fredholm"))?;
            tau_fred = tau_fred.max((traj.gen_fn(k).value - f.value).norm());
        }
    }
    let checks = [
        Check {
            name: "cue determinant vs recurrence",
            max_abs_diff: det_rec,
            tolerance: 1e-10,
        },
        Check {
            name: "cue determinant vs finite kernel",
            max_abs_diff: det_fred,
            tolerance: 1e-9,
        },
        Check {
            name: "sine-minus tau function vs fredholm",
            max_abs_diff: tau_fred,
            tolerance: 1e-8,
        },
    ];

    // v_± are shared by all three ensembles, so one overlay covers every β.
    let t_grid: Vec<f64> = (0..=8).map(|j| 100.0 + 10.0 * j as f64).collect();
    let xi = xi_of_omega(a.omega);
    let mut deviations = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let traj = SigmaSolver::default()
            .piii(sign, xi, &t_grid)
            .map_err(numerical("painleve"))?;
        let dev: Vec<f64> = traj
            .samples
            .iter()
            .map(|s| {
                let c = sigma_piii_conjectured_asymptote(sign, a.omega, s.t)?.value;
                Ok((s.u - c).norm() / c.norm())
            })
            .collect::<circspec_core::Result<_>>()
            .map_err(numerical("conjecture"))?;
        deviations.push(dev);
    }

    let check_table = Table {
        columns: vec!["check", "max_abs_diff", "tolerance", "status"],
        rows: checks
            .iter()
            .map(|c| {
                let status = if c.max_abs_diff < c.tolerance {
                    "pass"
                } else {
                    "fail"
                };
                vec![
                    Cell::Text(c.name.to_string()),
                    Cell::Num(c.max_abs_diff),
                    Cell::Num(c.tolerance),
                    Cell::Text(status.to_string()),
                ]
            })
            .collect(),
    };
    let overlay = Table {
        columns: vec!["t", "deviation_plus", "deviation_minus"],
        rows: t_grid
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                vec![
                    Cell::Num(t),
                    Cell::Num(deviations[0][i]),
                    Cell::Num(deviations[1][i]),
                ]
            })
            .collect(),
    };
    let config = ValidateConfig {
        command: "validate",
        omega: a.omega,
        threads: a.common.threads,
    };
    let text = match a.common.format {
        Format::Csv => format!("{}\n{}", check_table.csv(), overlay.csv()),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "config": config,
                "checks": check_table.json_rows(),
                "conjecture": overlay.json_rows(),
            }))
            .expect("JSON values always serialise");
            s.push('\n');
            s
        }
    };
    emit(a.common.output.as_deref(), &text).map_err(Failure::Io)?;
    match checks.iter().find(|c| !(c.max_abs_diff < c.tolerance)) {
        Some(c) => Err(Failure::Numerical(format!(
            "{}: max |Δ| = {:e} exceeds {:e}",
            c.name, c.max_abs_diff, c.tolerance
        ))),
        None => Ok(()),
    }
}
