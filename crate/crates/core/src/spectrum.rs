//! Power spectra `S_{N,β}(ω)` at finite `N` and in the bulk scaling limit.
//!
//! At finite `N` the spectrum is a quadratic expression in the two moments
//! `I_{N,q} = (N/2π) ∫_0^π (φ/2π)^q E_{N,β}((0,φ); 1 - e^{iω}) dφ`.
//! In the limit it is `Re ∫_0^∞ E_{∞,β}((0,s); 1 - e^{iω}) ds / (2 sin²(ω/2))`,
//! integrated numerically up to a cut-off `s*` and completed by a tail whose
//! amplitude is matched at `s*` to the algebraic decay `s^{-ω²/(π²β)}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{domain, invalid, Error, Result};
use crate::finitedet::{
    ensemble_gen_fn, number_variance, orthogonal_gen_fn, EnsembleLabel, Precision,
};
use crate::fredholm::{finite_cue_fredholm, finite_orthogonal_fredholm, LimitSpectra};
use crate::painleve::SigmaSolver;
use crate::quadrature::{gauss_legendre, tail_integral, tail_integral_asymptotic, GridFunction};
use crate::recurrence::{gen_fn_from_recurrence, orthogonal_from_unitary};
use crate::special::{digamma, trigamma, EULER_GAMMA};
use crate::{xi_of_omega, Beta, Route, Sign};

/// How the `φ`-integrals of the finite-`N` assembly are discretised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiRule {
    /// Gauss–Legendre with `max(64, 2N + 40)` nodes.
    #[default]
    Gauss,
    /// 101 equally spaced samples joined by local interpolants.
    UniformGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteOptions {
    pub route: Route,
    pub phi_rule: PhiRule,
}

impl Default for FiniteOptions {
    fn default() -> Self {
        Self {
            route: Route::Determinant,
            phi_rule: PhiRule::Gauss,
        }
    }
}

/// One spectrum value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumValue {
    pub omega: f64,
    pub value: f64,
    pub err_estimate: f64,
    pub route: Route,
}

fn check_omega(omega: f64) -> Result<()> {
    if omega == 0.0 {
        return domain("the assembly is singular at ω = 0; use the exact zero-frequency value");
    }
    if !(omega > 0.0 && omega <= PI) {
        return invalid(format!("frequency {omega} outside (0, π]"));
    }
    Ok(())
}

/// Weighted orthogonal-group pieces of the COE and CSE generating functions:
/// `E_{N,β}((0, φ); ξ) = Σ w_i E^{O^{σ_i}(d)}((0, φ/2); η)`.
struct OrthogonalParts {
    dim: usize,
    parts: [(Complex64, Sign); 2],
    param: Complex64,
}

fn orthogonal_parts(beta: Beta, n: usize, xi: Complex64) -> Result<OrthogonalParts> {
    match beta {
        Beta::One => {
            let den = 2.0 - xi;
            if den.norm() < 1e-14 {
                return Err(Error::Pole);
            }
            let nu = if n.is_multiple_of(2) {
                Sign::Plus
            } else {
                Sign::Minus
            };
            Ok(OrthogonalParts {
                dim: n + 1,
                parts: [((1.0 - xi) / den, nu), (1.0 / den, nu.flip())],
                param: xi * (2.0 - xi),
            })
        }
        Beta::Four => Ok(OrthogonalParts {
            dim: 2 * n + 1,
            parts: [
                (Complex64::new(0.5, 0.0), Sign::Plus),
                (Complex64::new(0.5, 0.0), Sign::Minus),
            ],
            param: xi,
        }),
        Beta::Two => invalid("the CUE has no orthogonal decomposition"),
    }
}

fn odd_order(dim: usize, route: Route) -> Result<usize> {
    if dim.is_multiple_of(2) {
        return invalid(format!(
            "the {} route covers only odd orthogonal groups, O(2N+1); dimension {dim} is even",
            route.name()
        ));
    }
    Ok((dim - 1) / 2)
}

/// `E_{N,β}((0, φ); ξ)` at each angle in `[0, π]` along one route.
pub fn sample_finite_gen_fn(
    beta: Beta,
    n: usize,
    xi: Complex64,
    phis: &[f64],
    route: Route,
) -> Result<Vec<Complex64>> {
    if n == 0 {
        return invalid("N must be positive");
    }
    if let Some(&p) = phis.iter().find(|p| !(0.0..=PI).contains(*p)) {
        return invalid(format!("angle {p} outside [0, π]"));
    }
    if beta == Beta::One && route != Route::Determinant {
        let radius = (1.0 / n as f64).min(0.5);
        if (2.0 - xi).norm() < 0.5 * radius {
            // Removable singularity of the orthogonal decomposition: average
            // the degree-N polynomial over a circle around ξ.
            let points = n + 8;
            let mut acc = vec![Complex64::new(0.0, 0.0); phis.len()];
            for k in 0..points {
                let theta = 2.0 * PI * (k as f64 + 0.5) / points as f64;
                let x = xi + Complex64::from_polar(radius, theta);
                for (a, v) in acc
                    .iter_mut()
                    .zip(sample_finite_gen_fn(beta, n, x, phis, route)?)
                {
                    *a += v / points as f64;
                }
            }
            return Ok(acc);
        }
    }
    let one = Complex64::new(1.0, 0.0);
    if route == Route::Painleve {
        return painleve_samples(beta, n, xi, phis);
    }
    phis.par_iter()
        .map(|&phi| {
            if phi == 0.0 {
                return Ok(one);
            }
            match (route, beta) {
                (Route::Determinant, _) => Ok(ensemble_gen_fn(beta, n, phi, xi)?.value),
                (Route::Recurrence, Beta::Two) => {
                    Ok(gen_fn_from_recurrence(n, 0.5 * phi, xi)?.value)
                }
                (Route::Fredholm, Beta::Two) => Ok(finite_cue_fredholm(n, phi, xi, None)?.value),
                (_, _) => {
                    let op = orthogonal_parts(beta, n, xi)?;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (w, sign) in op.parts {
                        let e = match route {
                            Route::Recurrence => orthogonal_from_unitary(
                                EnsembleLabel::orthogonal(sign, op.dim)?,
                                0.5 * phi,
                                op.param,
                            )?,
                            _ => finite_orthogonal_fredholm(
                                sign,
                                odd_order(op.dim, route)?,
                                0.5 * phi,
                                op.param,
                                None,
                            )?,
                        };
                        acc += w * e.value;
                    }
                    Ok(acc)
                }
            }
        })
        .collect()
}

fn painleve_samples(beta: Beta, n: usize, xi: Complex64, phis: &[f64]) -> Result<Vec<Complex64>> {
    let solver = SigmaSolver::default();
    let inner: Vec<usize> = (0..phis.len()).filter(|&i| phis[i] > 0.0).collect();
    let mut out = vec![Complex64::new(1.0, 0.0); phis.len()];
    if beta == Beta::Two {
        let ts: Vec<f64> = inner.iter().map(|&i| 1.0 / (0.5 * phis[i]).tan()).collect();
        let traj = solver.pvi_cue(n, xi, &ts)?;
        for (k, &i) in inner.iter().enumerate() {
            out[i] = traj.gen_fn(k).value;
        }
        return Ok(out);
    }
    let op = orthogonal_parts(beta, n, xi)?;
    let order = odd_order(op.dim, Route::Painleve)?;
    let ts: Vec<f64> = inner
        .iter()
        .map(|&i| (0.25 * phis[i]).sin().powi(2))
        .collect();
    for &i in &inner {
        out[i] = Complex64::new(0.0, 0.0);
    }
    for (w, sign) in op.parts {
        let traj = if order == 0 {
            None
        } else {
            Some(solver.pvi_orthogonal(sign, order, op.param, &ts)?)
        };
        for (k, &i) in inner.iter().enumerate() {
            // O^±(1) has a single fixed eigenvalue and no eigen-angles in (0, π).
            let e = traj
                .as_ref()
                .map_or(Complex64::new(1.0, 0.0), |t| t.gen_fn(k).value);
            out[i] += w * e;
        }
    }
    Ok(out)
}

/// `S_{N,β}(ω)` from the moments `I_{N,0}` and `I_{N,1}`.
fn combine_moments(n: usize, omega: f64, i0: Complex64, i1: Complex64) -> f64 {
    let nf = n as f64;
    let z_inv_n = Complex64::from_polar(1.0, -nf * omega);
    let half = Complex64::from_polar(1.0, -0.5 * nf * omega);
    let inner = -(i0 - (1.0 - z_inv_n) * i1).re + 2.0 / nf * (half * i0).re.powi(2);
    -inner / (2.0 * (0.5 * omega).sin().powi(2))
}

fn gauss_moments(
    beta: Beta,
    n: usize,
    xi: Complex64,
    m: usize,
    route: Route,
) -> Result<(Complex64, Complex64)> {
    let rule = gauss_legendre(m)?;
    let (phis, ws): (Vec<f64>, Vec<f64>) = rule.mapped(0.0, PI).unzip();
    let es = sample_finite_gen_fn(beta, n, xi, &phis, route)?;
    let scale = n as f64 / (2.0 * PI);
    let mut i0 = Complex64::new(0.0, 0.0);
    let mut i1 = Complex64::new(0.0, 0.0);
    for ((p, w), e) in phis.iter().zip(&ws).zip(&es) {
        i0 += e * *w;
        i1 += e * (*w * p / (2.0 * PI));
    }
    Ok((i0 * scale, i1 * scale))
}

fn grid_moments(
    beta: Beta,
    n: usize,
    xi: Complex64,
    intervals: usize,
    route: Route,
) -> Result<(Complex64, Complex64)> {
    let phis: Vec<f64> = (0..=intervals)
        .map(|k| PI * k as f64 / intervals as f64)
        .collect();
    let es = sample_finite_gen_fn(beta, n, xi, &phis, route)?;
    let weighted: Vec<Complex64> = phis
        .iter()
        .zip(&es)
        .map(|(p, e)| e * (p / (2.0 * PI)))
        .collect();
    let scale = n as f64 / (2.0 * PI);
    let i0 = GridFunction::new(phis.clone(), es)?.integrate(0.0, PI)?;
    let i1 = GridFunction::new(phis, weighted)?.integrate(0.0, PI)?;
    Ok((i0 * scale, i1 * scale))
}

/// Gauss–Legendre node count of the finite-`N` `φ` rule.
pub fn gauss_phi_nodes(n: usize) -> usize {
    (2 * n + 40).max(64)
}

/// `S_{N,β}(ω)` for `0 < ω ≤ π`. The error estimate compares against a
/// coarser rule (three quarters of the Gauss nodes, or every second grid
/// point).
pub fn assemble_finite_spectrum(
    beta: Beta,
    n: usize,
    omega: f64,
    opts: &FiniteOptions,
) -> Result<SpectrumValue> {
    if n == 0 {
        return invalid("N must be positive");
    }
    check_omega(omega)?;
    let xi = xi_of_omega(omega);
    let ((a0, a1), (b0, b1)) = match opts.phi_rule {
        PhiRule::Gauss => {
            let m = gauss_phi_nodes(n);
            (
                gauss_moments(beta, n, xi, m, opts.route)?,
                gauss_moments(beta, n, xi, 3 * m / 4, opts.route)?,
            )
        }
        PhiRule::UniformGrid => (
            grid_moments(beta, n, xi, 100, opts.route)?,
            grid_moments(beta, n, xi, 50, opts.route)?,
        ),
    };
    let value = combine_moments(n, omega, a0, a1);
    let coarse = combine_moments(n, omega, b0, b1);
    Ok(SpectrumValue {
        omega,
        value,
        err_estimate: (value - coarse).abs(),
        route: opts.route,
    })
}

/// Exact `S_{N,β}(0)` in terms of the digamma and trigamma functions.
pub fn spectrum_at_zero_exact(beta: Beta, n: usize) -> Result<f64> {
    if n == 0 {
        return invalid("N must be positive");
    }
    let nf = n as f64;
    let pi2 = PI * PI;
    let core = |x: f64| EULER_GAMMA + digamma(x) + x * trigamma(x);
    Ok(match beta {
        Beta::Two => nf / (2.0 * pi2) * core(nf),
        Beta::One => nf * (-0.125 + (core(nf) + 0.25 * trigamma(0.5 * (nf + 1.0))) / pi2),
        Beta::Four => {
            nf * (1.0 / 32.0 + (core(2.0 * nf) - 0.25 * trigamma(nf + 0.5)) / (4.0 * pi2))
        }
    })
}

/// `S_{N,β}(0) = (N/2π) ∫_0^π Var N_(0,φ) dφ` with the exact finite-`N`
/// number variance.
pub fn spectrum_at_zero_from_variance(beta: Beta, n: usize) -> Result<f64> {
    if n == 0 {
        return invalid("N must be positive");
    }
    let rule = gauss_legendre(4 * n + 60)?;
    let mut acc = 0.0;
    for (phi, w) in rule.mapped(0.0, PI) {
        acc += w * number_variance(beta, n, phi)?;
    }
    Ok(n as f64 / (2.0 * PI) * acc)
}

/// The constant `c_β` of the large-`N` number variance.
pub fn variance_constant(beta: Beta) -> f64 {
    let base = 2f64.ln() + EULER_GAMMA + 1.0;
    match beta {
        Beta::One => base - PI * PI / 8.0,
        Beta::Two => base,
        Beta::Four => base + 2f64.ln() + PI * PI / 8.0,
    }
}

/// Large-`N` form `(2/βπ²)(log N + log sin(φ/2) + c_β)` of the number variance.
pub fn number_variance_asymptotic(beta: Beta, n: usize, phi: f64) -> Result<f64> {
    if n == 0 {
        return invalid("N must be positive");
    }
    if !(phi > 0.0 && phi < 2.0 * PI) {
        return invalid(format!("angle {phi} outside (0, 2π)"));
    }
    Ok(2.0 / (beta.value() * PI * PI)
        * ((n as f64).ln() + (0.5 * phi).sin().ln() + variance_constant(beta)))
}

/// Large-`N` form `(N/βπ²)(log(N/2) + c_β)` of `S_{N,β}(0)`.
pub fn spectrum_at_zero_asymptotic(beta: Beta, n: usize) -> Result<f64> {
    if n == 0 {
        return invalid("N must be positive");
    }
    let nf = n as f64;
    Ok(nf / (beta.value() * PI * PI) * ((0.5 * nf).ln() + variance_constant(beta)))
}

/// Small-`ω` behaviour of `S_{∞,β}(ω)`: `1/(πβ|ω|) + |ω| log|ω|/(π³β²)`,
/// plus the known `O(|ω|)` term at `β = 2`.
pub fn small_omega_asymptote(beta: Beta, omega: f64) -> Result<f64> {
    if omega == 0.0 || !omega.is_finite() {
        return invalid("frequency must be finite and non-zero");
    }
    let w = omega.abs();
    let b = beta.value();
    let mut v = 1.0 / (PI * b * w) + w * w.ln() / (PI.powi(3) * b * b);
    if beta == Beta::Two {
        v += w * (1.0 / (24.0 * PI) - (2.0 * PI).ln() / (4.0 * PI.powi(3)));
    }
    Ok(v)
}

/// Two-term large-`k` form of the covariance of level displacements `k`
/// apart in the bulk limit.
pub fn covariance_asymptote(beta: Beta, k: u32) -> Result<f64> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    let kf = k as f64;
    let b = beta.value();
    Ok(-1.0 / (b * PI * PI * kf * kf)
        - 6.0 / (b * b * PI.powi(4) * kf.powi(4))
            * ((2.0 * PI * kf).ln() + EULER_GAMMA - 11.0 / 6.0))
}

/// Cut-off and tail data of a limiting-spectrum evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailSpec {
    pub s_star: f64,
    pub grid_spacing: f64,
    /// `(s*)^{ω²/(π²β)} Re E_{∞,β}((0, s*); 1 - e^{iω})`.
    pub amplitude: f64,
    /// `ω²/(π²β)`.
    pub exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitOptions {
    /// Upper bound for `s*`; `None` selects [`default_s_star`].
    pub s_star_target: Option<f64>,
    pub grid_spacing: f64,
    /// [`Route::Fredholm`] or [`Route::Painleve`].
    pub route: Route,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self {
            s_star_target: None,
            grid_spacing: 0.1,
            route: Route::Fredholm,
        }
    }
}

/// Default cut-off target: 100, or 50 for `β = 4`.
pub fn default_s_star(beta: Beta) -> f64 {
    match beta {
        Beta::Four => 50.0,
        _ => 100.0,
    }
}

/// Largest multiple of the period `2π/ω` not exceeding `target`.
pub fn snap_s_star(omega: f64, target: f64) -> Result<f64> {
    let period = 2.0 * PI / omega;
    let k = (target / period + 1e-9).floor();
    if k < 1.0 {
        return invalid(format!(
            "cut-off target {target} is shorter than one period 2π/ω = {period}"
        ));
    }
    Ok(k * period)
}

/// A limiting spectrum value. `err_estimate` is the change against the
/// cut-off one period shorter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitValue {
    pub omega: f64,
    pub value: f64,
    pub err_estimate: f64,
    pub tail: TailSpec,
    pub route: Route,
    /// Set when the cut-off is too short for the requested accuracy.
    pub warning: Option<String>,
}

fn key(s: f64) -> u64 {
    s.to_bits()
}

/// Sampler of `E_{∞,β}((0, s); ·)` shared across frequencies.
enum LimitSampler {
    Fredholm(HashMap<u64, LimitSpectra>),
    Painleve,
}

impl LimitSampler {
    fn new(beta: Beta, lengths: &[f64], route: Route) -> Result<Self> {
        match route {
            Route::Fredholm => {
                let spectra: Vec<LimitSpectra> = lengths
                    .par_iter()
                    .map(|&s| LimitSpectra::new(beta, s))
                    .collect::<Result<_>>()?;
                Ok(Self::Fredholm(
                    spectra.into_iter().map(|l| (key(l.s), l)).collect(),
                ))
            }
            Route::Painleve => Ok(Self::Painleve),
            other => invalid(format!("the limit spectrum has no {} route", other.name())),
        }
    }

    fn sample(&self, beta: Beta, xi: Complex64, lengths: &[f64]) -> Result<Vec<Complex64>> {
        match self {
            Self::Fredholm(map) => lengths
                .iter()
                .map(|s| {
                    map.get(&key(*s))
                        .ok_or_else(|| {
                            Error::InvalidArgument(format!("length {s} was not prepared"))
                        })?
                        .value(xi)
                })
                .collect(),
            Self::Painleve => piii_samples(beta, xi, lengths),
        }
    }
}

fn piii_samples(beta: Beta, xi: Complex64, lengths: &[f64]) -> Result<Vec<Complex64>> {
    let solver = SigmaSolver::default();
    let half = beta != Beta::Four;
    let inner: Vec<usize> = (0..lengths.len()).filter(|&i| lengths[i] > 0.0).collect();
    let ts: Vec<f64> = inner
        .iter()
        .map(|&i| {
            let l = if half { 0.5 * lengths[i] } else { lengths[i] };
            (PI * l).powi(2)
        })
        .collect();
    let param = if beta == Beta::One {
        xi * (2.0 - xi)
    } else {
        xi
    };
    let plus = solver.piii(Sign::Plus, param, &ts)?;
    let minus = solver.piii(Sign::Minus, param, &ts)?;
    let mut out = vec![Complex64::new(1.0, 0.0); lengths.len()];
    for (k, &i) in inner.iter().enumerate() {
        let (p, q) = (plus.gen_fn(k).value, minus.gen_fn(k).value);
        out[i] = match beta {
            Beta::Two => p * q,
            Beta::One => {
                let den = 2.0 - xi;
                if den.norm() < 1e-14 {
                    return Err(Error::Pole);
                }
                ((1.0 - xi) * p + q) / den
            }
            Beta::Four => 0.5 * (p + q),
        };
    }
    Ok(out)
}

fn tail_factor(omega: f64, exponent: f64, s_star: f64) -> Result<f64> {
    if exponent < 0.9 {
        tail_integral(omega, exponent, s_star)
    } else {
        tail_integral_asymptotic(omega, exponent, s_star)
    }
}

struct Cutoffs {
    s_star: f64,
    previous: Option<f64>,
}

fn cutoffs(omega: f64, opts: &LimitOptions, beta: Beta) -> Result<Cutoffs> {
    let target = opts.s_star_target.unwrap_or_else(|| default_s_star(beta));
    let s_star = snap_s_star(omega, target)?;
    let previous = s_star - 2.0 * PI / omega;
    Ok(Cutoffs {
        s_star,
        previous: (previous > 1e-9).then_some(previous),
    })
}

/// `S_{∞,β}(ω)` at each frequency in `(0, π]`, sharing the generating-function
/// samples between frequencies.
pub fn assemble_limit_spectra(
    beta: Beta,
    omegas: &[f64],
    opts: &LimitOptions,
) -> Result<Vec<LimitValue>> {
    let h = opts.grid_spacing;
    if !(h > 0.0 && h <= 1.0) {
        return invalid(format!("grid spacing {h} outside (0, 1]"));
    }
    for &w in omegas {
        check_omega(w)?;
    }
    let cuts: Vec<Cutoffs> = omegas
        .iter()
        .map(|&w| cutoffs(w, opts, beta))
        .collect::<Result<_>>()?;
    let s_max = cuts.iter().map(|c| c.s_star).fold(0.0, f64::max);
    let points = (s_max / h).ceil() as usize + 3;
    let grid: Vec<f64> = (0..=points).map(|j| j as f64 * h).collect();
    let mut lengths = grid.clone();
    for c in &cuts {
        lengths.push(c.s_star);
        lengths.extend(c.previous);
    }
    lengths.sort_by(f64::total_cmp);
    lengths.dedup();
    let sampler = LimitSampler::new(beta, &lengths, opts.route)?;
    omegas
        .par_iter()
        .zip(&cuts)
        .map(|(&omega, cut)| {
            let xi = xi_of_omega(omega);
            let used = ((cut.s_star / h).ceil() as usize + 3).min(points) + 1;
            let xs = grid[..used].to_vec();
            let ys = sampler.sample(beta, xi, &xs)?;
            let f = GridFunction::new(xs, ys)?;
            let exponent = omega * omega / (PI * PI * beta.value());
            let norm = 2.0 * (0.5 * omega).sin().powi(2);
            let assemble = |s_star: f64| -> Result<(f64, f64)> {
                let e_star = sampler.sample(beta, xi, &[s_star])?[0];
                let amplitude = s_star.powf(exponent) * e_star.re;
                let finite = f.integrate(0.0, s_star)?.re;
                let tail = amplitude * tail_factor(omega, exponent, s_star)?;
                Ok(((finite + tail) / norm, amplitude))
            };
            let (value, amplitude) = assemble(cut.s_star)?;
            let err_estimate = match cut.previous {
                Some(p) => (value - assemble(p)?.0).abs(),
                None => value.abs(),
            };
            let warning = (err_estimate > 1e-3 * value.abs()).then(|| {
                format!(
                    "slow convergence: cut-off {:.3} changes the value by {err_estimate:.2e}",
                    cut.s_star
                )
            });
            Ok(LimitValue {
                omega,
                value,
                err_estimate,
                tail: TailSpec {
                    s_star: cut.s_star,
                    grid_spacing: h,
                    amplitude,
                    exponent,
                },
                route: opts.route,
                warning,
            })
        })
        .collect()
}

/// `E_{∞,β}((0, s); ξ)` at each length `s ≥ 0` along the Fredholm or
/// Painlevé route.
pub fn sample_limit_gen_fn(
    beta: Beta,
    xi: Complex64,
    lengths: &[f64],
    route: Route,
) -> Result<Vec<Complex64>> {
    if let Some(&s) = lengths.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
        return invalid(format!("interval length {s} must be non-negative"));
    }
    let inner: Vec<f64> = lengths.iter().copied().filter(|&s| s > 0.0).collect();
    let sampler = LimitSampler::new(beta, &inner, route)?;
    let mut values = sampler.sample(beta, xi, &inner)?.into_iter();
    Ok(lengths
        .iter()
        .map(|&s| {
            if s > 0.0 {
                values.next().unwrap()
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect())
}

/// `S_{∞,β}(ω)` for one frequency.
pub fn assemble_limit_spectrum(beta: Beta, omega: f64, opts: &LimitOptions) -> Result<LimitValue> {
    Ok(assemble_limit_spectra(beta, &[omega], opts)?.remove(0))
}

/// Matrix size of a tabulated spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumSize {
    Finite(usize),
    Limit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub omega: f64,
    pub value: f64,
    pub err_estimate: f64,
    /// `None` for values taken from a closed form.
    pub route: Option<Route>,
    /// Cut-off used in the limit.
    pub s_star: Option<f64>,
}

/// Spectrum values on a frequency grid, in the order of the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub beta: Beta,
    pub size: SpectrumSize,
    pub grid: String,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumTable {
    /// Finite-`N` table; `ω = 0` takes the exact intercept.
    pub fn finite(
        beta: Beta,
        n: usize,
        omegas: &[f64],
        grid: &str,
        opts: &FiniteOptions,
    ) -> Result<Self> {
        let entries = omegas
            .par_iter()
            .map(|&omega| {
                if omega == 0.0 {
                    let value = spectrum_at_zero_exact(beta, n)?;
                    return Ok(SpectrumEntry {
                        omega,
                        value,
                        err_estimate: 1e-14 * value.abs(),
                        route: None,
                        s_star: None,
                    });
                }
                let v = assemble_finite_spectrum(beta, n, omega, opts)?;
                Ok(SpectrumEntry {
                    omega,
                    value: v.value,
                    err_estimate: v.err_estimate,
                    route: Some(v.route),
                    s_star: None,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            beta,
            size: SpectrumSize::Finite(n),
            grid: grid.to_string(),
            entries,
        })
    }

    /// Limiting table. The limit diverges at `ω = 0`, which is rejected.
    pub fn limit(beta: Beta, omegas: &[f64], grid: &str, opts: &LimitOptions) -> Result<Self> {
        let entries = assemble_limit_spectra(beta, omegas, opts)?
            .into_iter()
            .map(|v| SpectrumEntry {
                omega: v.omega,
                value: v.value,
                err_estimate: v.err_estimate,
                route: Some(v.route),
                s_star: Some(v.tail.s_star),
            })
            .collect();
        Ok(Self {
            beta,
            size: SpectrumSize::Limit,
            grid: grid.to_string(),
            entries,
        })
    }
}

/// Orthogonal-group generating function at an arbitrary angle along the
/// determinant route, re-exported for callers assembling their own mixtures.
pub fn orthogonal_value(sign: Sign, dim: usize, phi: f64, xi: Complex64) -> Result<Complex64> {
    Ok(orthogonal_gen_fn(
        EnsembleLabel::orthogonal(sign, dim)?,
        phi,
        xi,
        Precision::Auto,
    )?
    .value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_n3(beta: Beta, w: f64) -> f64 {
        let p2 = PI * PI;
        let p4 = p2 * p2;
        match beta {
            Beta::Two => {
                3.0 * (-81.0 - 72.0 * p2 + 16.0 * p4) / (128.0 * p4)
                    + 3.0 * (-105.0 - 60.0 * p2 + 16.0 * p4) / (160.0 * p4) * w.cos()
                    + 3.0 * (825.0 - 120.0 * p2 + 16.0 * p4) / (640.0 * p4) * (2.0 * w).cos()
            }
            Beta::One => {
                (-225.0 - 60.0 * p2 + 14.0 * p4) / (24.0 * p4)
                    + (p2 - 6.0) / (2.0 * p2) * w.cos()
                    + (225.0 - 48.0 * p2 + 4.0 * p4) / (24.0 * p4) * (2.0 * w).cos()
            }
            Beta::Four => {
                (-148225.0 - 110880.0 * p2 + 20736.0 * p4) / (55296.0 * p4)
                    + (-145145.0 - 92400.0 * p2 + 20736.0 * p4) / (69120.0 * p4) * w.cos()
                    + (1321705.0 - 184800.0 * p2 + 20736.0 * p4) / (276480.0 * p4) * (2.0 * w).cos()
            }
        }
    }

    #[test]
    fn three_by_three_closed_forms() {
        for beta in Beta::ALL {
            for w in [0.3, PI / 3.0, 2.0, PI] {
                let v = assemble_finite_spectrum(beta, 3, w, &FiniteOptions::default()).unwrap();
                let e = exact_n3(beta, w);
                assert!(
                    (v.value / e - 1.0).abs() < 1e-10,
                    "β={beta} ω={w}: {} vs {e}",
                    v.value
                );
            }
        }
    }

    #[test]
    fn uniform_grid_is_less_accurate_but_close() {
        let opts = FiniteOptions {
            phi_rule: PhiRule::UniformGrid,
            ..Default::default()
        };
        let v = assemble_finite_spectrum(Beta::Two, 3, 1.0, &opts).unwrap();
        assert!((v.value / exact_n3(Beta::Two, 1.0) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn cue_intercept_at_one() {
        assert!((spectrum_at_zero_exact(Beta::Two, 1).unwrap() - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn intercepts_match_variance_integral() {
        for beta in Beta::ALL {
            for n in [1, 2, 3, 7] {
                let a = spectrum_at_zero_exact(beta, n).unwrap();
                let b = spectrum_at_zero_from_variance(beta, n).unwrap();
                assert!(
                    (a - b).abs() < 1e-12 * a.abs().max(1.0),
                    "β={beta} N={n}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn covariance_formula_values() {
        let v2 = covariance_asymptote(Beta::Two, 9).unwrap();
        assert!((v2 + 0.000_631_96).abs() < 5e-9);
        let v1 = covariance_asymptote(Beta::One, 9).unwrap();
        assert!((v1 + 0.001_277).abs() < 5e-7);
    }

    #[test]
    fn snapping_keeps_whole_periods() {
        let w = 2.0 * PI * 7.0 / 25.0;
        let s = snap_s_star(w, 100.0).unwrap();
        assert!(s <= 100.0 && (w * s).cos() > 1.0 - 1e-12);
        assert!(snap_s_star(0.01, 100.0).is_err());
    }

    #[test]
    fn limit_table_entry_near_known_value() {
        let w = 2.0 * PI / 25.0;
        let v = assemble_limit_spectrum(Beta::Two, w, &LimitOptions::default()).unwrap();
        assert!((v.value - 0.629975).abs() < 1e-4, "{}", v.value);
        assert!((v.tail.s_star - 100.0).abs() < 1e-9);
    }
}
