//! σ-form Painlevé evaluation of the generating functions.
//!
//! Three equations are covered: σPVI for the CUE (variable `t = cot(φ/2)`),
//! σPVI for `O^±(2N+1)` (`t = sin²(φ/2)`) and σPIII′ for the bulk-scaled
//! orthogonal groups (`t = (πs)²`). Each solution is launched from a power
//! series generated to high order at the regular boundary, then continued by
//! integrating the differentiated (third-order, square-root free) equation
//! together with the running `log E`. The residual of the original
//! second-order equation is monitored along the way.

pub mod ode;
pub mod series;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::special::gamma;
use crate::{GenFnSample, Route, Sign};
pub use ode::OdeOptions;
use series::{solve_series, Series};

/// The σ-form equation a trajectory solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaEquation {
    PviCue { n: usize },
    PviOrthogonal { sign: Sign, n: usize },
    PiiiPrime { sign: Sign },
}

/// Power-series boundary data: `u = Σ c_k X^k` with `X = z / scale`, where
/// `z` is `1/t` for the CUE equation and `√t` otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub t_launch: f64,
    pub scale: f64,
    pub coeffs: Vec<Complex64>,
}

/// State of a trajectory at one abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PainleveSample {
    pub t: f64,
    pub u: Complex64,
    pub du: Complex64,
    pub d2u: Complex64,
    /// `log E` at the interval corresponding to `t`.
    pub log_e: Complex64,
    /// Relative residual of the second-order σ-equation.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PainleveTrajectory {
    pub equation: SigmaEquation,
    pub xi: Complex64,
    pub boundary: BoundaryData,
    /// Samples in the order the targets were requested.
    pub samples: Vec<PainleveSample>,
    pub max_residual: f64,
}

impl PainleveTrajectory {
    /// Interval length corresponding to `t`.
    pub fn interval_length(&self, t: f64) -> f64 {
        match self.equation {
            SigmaEquation::PviCue { .. } => 2.0 * (1.0 / t).atan(),
            SigmaEquation::PviOrthogonal { .. } => 2.0 * t.sqrt().asin(),
            SigmaEquation::PiiiPrime { .. } => t.sqrt() / PI,
        }
    }

    /// Generating-function value at sample `i`.
    pub fn gen_fn(&self, i: usize) -> GenFnSample {
        let s = &self.samples[i];
        let value = s.log_e.exp();
        GenFnSample {
            interval_length: self.interval_length(s.t),
            xi: self.xi,
            value,
            route: Route::Painleve,
            err_estimate: 1e3 * (s.residual + f64::EPSILON) * value.norm(),
        }
    }

    pub fn last(&self) -> GenFnSample {
        self.gen_fn(self.samples.len() - 1)
    }
}

/// Numerical settings shared by the three equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaSolver {
    pub ode: OdeOptions,
    /// Number of series coefficients generated at the boundary.
    pub series_terms: usize,
    /// Relative residual beyond which the trajectory is declared unstable.
    pub residual_limit: f64,
}

impl Default for SigmaSolver {
    fn default() -> Self {
        Self {
            ode: OdeOptions::default(),
            series_terms: 36,
            residual_limit: 1e-6,
        }
    }
}

type State = ode::State<4>;

/// One σ-equation with its boundary series.
trait Model {
    fn equation(&self) -> SigmaEquation;
    /// Right-hand side for `(u, u', u'', log E)`.
    fn rhs(&self, t: f64, y: &State) -> State;
    /// The three groups of terms of the second-order equation.
    fn terms(&self, t: f64, u: Complex64, du: Complex64, d2u: Complex64) -> [Complex64; 3];
    /// State from the boundary series, valid between the boundary and `t_launch`.
    fn series_state(&self, t: f64) -> State;
    fn boundary(&self) -> &BoundaryData;
    /// Whether `t` lies between the boundary and the launch point.
    fn in_series_region(&self, t: f64) -> bool;
    fn check_target(&self, t: f64) -> Result<()>;

    /// Newton correction of `u''` onto the second-order equation, which the
    /// differentiated system only preserves up to the integration error.
    fn project(&self, t: f64, y: &mut State) {
        let f = |d2u: Complex64| -> Complex64 { self.terms(t, y[0], y[1], d2u).iter().sum() };
        let before = self.residual(t, y);
        let mut d2u = y[2];
        for _ in 0..2 {
            // The equation is quadratic in u'', so the central difference is exact.
            let delta = 1e-3 * (d2u.norm() + y[1].norm() + 1e-8);
            let slope = (f(d2u + delta) - f(d2u - delta)) / (2.0 * delta);
            if slope.norm() == 0.0 {
                return;
            }
            d2u -= f(d2u) / slope;
        }
        let mut trial = *y;
        trial[2] = d2u;
        if (d2u - y[2]).norm() <= 1e-6 * (y[2].norm() + y[1].norm() + 1e-12)
            && self.residual(t, &trial) < before
        {
            *y = trial;
        }
    }

    fn residual(&self, t: f64, y: &State) -> f64 {
        let terms = self.terms(t, y[0], y[1], y[2]);
        let sum: Complex64 = terms.iter().sum();
        let mag: f64 = terms.iter().map(|z| z.norm()).sum();
        if mag == 0.0 {
            0.0
        } else {
            sum.norm() / mag
        }
    }
}

/// Pick the launch point `X0` so the series tail is negligible.
fn launch_point(s: &Series) -> Result<f64> {
    let mut x0 = 0.25;
    for _ in 0..30 {
        if s.tail_ratio(x0, 4) < 1e-16 {
            return Ok(x0);
        }
        x0 *= 0.7;
    }
    Err(Error::SlowConvergence(
        "boundary series does not converge".into(),
    ))
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

// σPVI for the CUE in y = 1/t with θ = y d/dy, A = θu:
// (1+y²)²(A+θA)² − 4yA(u+A)² + 4y²A²(N² − yA) = 0.
struct CueModel {
    n2: f64,
    series: Series,
    theta1: Series,
    theta2: Series,
    /// Series of u / (1 + y²) in X.
    damped: Series,
    boundary: BoundaryData,
}

impl CueModel {
    fn new(n: usize, xi: Complex64, terms: usize) -> Result<Self> {
        let nf = n as f64;
        let n2 = nf * nf;
        let rho = (0.5f64).min(1.0 / (nf * xi.norm()));
        let len = terms + 10;
        let y = Series::monomial(Complex64::new(rho, 0.0), 1, len);
        let one = Series::constant(Complex64::new(1.0, 0.0), len);
        let n2s = Series::constant(Complex64::new(n2, 0.0), len);
        let a0 = xi * nf / PI;
        let known = [a0, a0 * a0 * rho];
        let y2 = &y * &y;
        let w = &one + &y2;
        let w2 = &w * &w;
        let series = solve_series(&known, terms, 10, |u| {
            let a = u.theta(1.0);
            let ta = a.theta(1.0);
            let s = &a + &ta;
            let ua = u + &a;
            &w2 * (&s * &s) - (&y * &a).scale(Complex64::new(4.0, 0.0)) * (&ua * &ua)
                + (&y2 * (&a * &a)).scale(Complex64::new(4.0, 0.0)) * (&n2s - &y * &a)
        })?;
        // 1/(1+y²) = Σ (−ρ²X²)^j.
        let mut inv = Series::zeros(len);
        for j in 0..len.div_ceil(2) {
            inv.coeffs[2 * j] = Complex64::new((-rho * rho).powi(j as i32), 0.0);
        }
        let damped = &series * &inv;
        let x0 = launch_point(&series)?;
        let boundary = BoundaryData {
            t_launch: 1.0 / (rho * x0),
            scale: rho,
            coeffs: series.coeffs.clone(),
        };
        Ok(Self {
            n2,
            theta1: series.theta(1.0),
            theta2: series.theta(1.0).theta(1.0),
            series,
            damped,
            boundary,
        })
    }
}

impl Model for CueModel {
    fn equation(&self) -> SigmaEquation {
        SigmaEquation::PviCue {
            n: self.n2.sqrt().round() as usize,
        }
    }

    fn rhs(&self, t: f64, y: &State) -> State {
        let [u, u1, u2, _] = *y;
        let w = 1.0 + t * t;
        let g = u - t * u1;
        let u3 = -(2.0 * t * w * u2 + 2.0 * g * g - 4.0 * t * u1 * g
            + 4.0 * u1 * (u1 + self.n2)
            + 2.0 * u1 * u1)
            / (w * w);
        [u1, u2, u3, u / w]
    }

    fn terms(&self, t: f64, u: Complex64, du: Complex64, d2u: Complex64) -> [Complex64; 3] {
        let a = (1.0 + t * t) * d2u;
        let g = u - t * du;
        [a * a, 4.0 * du * g * g, 4.0 * du * du * (du + self.n2)]
    }

    fn series_state(&self, t: f64) -> State {
        let y = 1.0 / t;
        let x = y / self.boundary.scale;
        let u = self.series.eval(x);
        let a = self.theta1.eval(x);
        let ta = self.theta2.eval(x);
        let j = self.damped.integral(x) * self.boundary.scale;
        [u, -y * a, y * y * (a + ta), -j]
    }

    fn boundary(&self) -> &BoundaryData {
        &self.boundary
    }

    fn in_series_region(&self, t: f64) -> bool {
        t >= self.boundary.t_launch
    }

    fn check_target(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t.is_finite()) {
            return invalid(format!("CUE σPVI abscissa {t} must be non-negative"));
        }
        Ok(())
    }
}

// σPVI for O^±(2N+1) in x = √t with θ = t d/dt, P = θu, Q = θP − P:
// (1−t)²Q²t + (P − N²t)(2ut + (1−2t)P)² − P²(P − (N² − ¼)t) = 0.
struct OrthModel {
    sign: Sign,
    n2: f64,
    series: Series,
    p: Series,
    q: Series,
    /// Series of u / (1 − t) in X.
    damped: Series,
    boundary: BoundaryData,
}

impl OrthModel {
    fn new(sign: Sign, n: usize, xi: Complex64, terms: usize) -> Result<Self> {
        let nf = n as f64;
        let n2 = nf * nf;
        let rho = 0.5 / (nf * xi.norm().max(1.0));
        let len = terms + 10;
        let c = |v: f64| Complex64::new(v, 0.0);
        let t = Series::monomial(c(rho * rho), 2, len);
        let one = Series::constant(c(1.0), len);
        let known: Vec<Complex64> = match sign {
            Sign::Minus => vec![zero(), xi * (2.0 * nf / PI) * rho],
            Sign::Plus => vec![
                zero(),
                zero(),
                zero(),
                xi * (8.0 * nf * (n2 - 0.25) / (3.0 * PI)) * rho.powi(3),
            ],
        };
        let one_minus_t = &one - &t;
        let one_minus_2t = &one - &t.scale(c(2.0));
        let series = solve_series(&known, terms, 10, |u| {
            let p = u.theta(0.5);
            let q = p.theta(0.5) - &p;
            let inner = (u * &t).scale(c(2.0)) + &one_minus_2t * &p;
            let a = &one_minus_t * &q;
            &(&a * &a) * &t + (&p - &t.scale(c(n2))) * (&inner * &inner)
                - (&p * &p) * (&p - &t.scale(c(n2 - 0.25)))
        })?;
        let mut inv = Series::zeros(len);
        for j in 0..len.div_ceil(2) {
            inv.coeffs[2 * j] = c((rho * rho).powi(j as i32));
        }
        let damped = &series * &inv;
        let p = series.theta(0.5);
        let q = p.theta(0.5) - &p;
        let x0 = launch_point(&series)?;
        let boundary = BoundaryData {
            t_launch: (rho * x0).powi(2),
            scale: rho,
            coeffs: series.coeffs.clone(),
        };
        Ok(Self {
            sign,
            n2,
            series,
            p,
            q,
            damped,
            boundary,
        })
    }
}

impl Model for OrthModel {
    fn equation(&self) -> SigmaEquation {
        SigmaEquation::PviOrthogonal {
            sign: self.sign,
            n: self.n2.sqrt().round() as usize,
        }
    }

    fn rhs(&self, t: f64, y: &State) -> State {
        let [u, u1, u2, _] = *y;
        let w = t * (1.0 - t);
        let dw = 1.0 - 2.0 * t;
        let g = 2.0 * u + dw * u1;
        let u3 = -(2.0 * w * dw * u2 + g * g + 2.0 * dw * (u1 - self.n2) * g
            - 2.0 * u1 * (u1 - self.n2 + 0.25)
            - u1 * u1)
            / (2.0 * w * w);
        [u1, u2, u3, u / (t * (t - 1.0))]
    }

    fn terms(&self, t: f64, u: Complex64, du: Complex64, d2u: Complex64) -> [Complex64; 3] {
        let a = t * (1.0 - t) * d2u;
        let g = 2.0 * u + (1.0 - 2.0 * t) * du;
        [
            a * a,
            (du - self.n2) * g * g,
            -du * du * (du - self.n2 + 0.25),
        ]
    }

    fn series_state(&self, t: f64) -> State {
        let x = t.sqrt() / self.boundary.scale;
        let u = self.series.eval(x);
        let p = self.p.eval(x);
        let q = self.q.eval(x);
        let log_e = -2.0 * self.damped.log_integral(x);
        [u, p / t, q / (t * t), log_e]
    }

    fn boundary(&self) -> &BoundaryData {
        &self.boundary
    }

    fn in_series_region(&self, t: f64) -> bool {
        t <= self.boundary.t_launch
    }

    fn check_target(&self, t: f64) -> Result<()> {
        if !(t > 0.0 && t < 1.0) {
            return invalid(format!("orthogonal σPVI abscissa {t} outside (0, 1)"));
        }
        Ok(())
    }
}

// σPIII′ in x = √t with θ = t d/dt, P = θv, Q = θP − P:
// Q² − ¼P² + P(4P − t)(v − P) = 0.
struct PiiiModel {
    sign: Sign,
    series: Series,
    p: Series,
    q: Series,
    boundary: BoundaryData,
}

impl PiiiModel {
    fn new(sign: Sign, xi: Complex64, terms: usize) -> Result<Self> {
        let rho = 0.5 / xi.norm().max(1.0);
        let len = terms + 10;
        let c = |v: f64| Complex64::new(v, 0.0);
        let t = Series::monomial(c(rho * rho), 2, len);
        let known: Vec<Complex64> = match sign {
            Sign::Minus => vec![zero(), xi * (rho / PI)],
            Sign::Plus => vec![zero(), zero(), zero(), xi * (rho.powi(3) / (3.0 * PI))],
        };
        let series = solve_series(&known, terms, 10, |v| {
            let p = v.theta(0.5);
            let q = p.theta(0.5) - &p;
            &q * &q - (&p * &p).scale(c(0.25)) + (&p * (p.scale(c(4.0)) - &t)) * (v - &p)
        })?;
        let p = series.theta(0.5);
        let q = p.theta(0.5) - &p;
        let x0 = launch_point(&series)?;
        let boundary = BoundaryData {
            t_launch: (rho * x0).powi(2),
            scale: rho,
            coeffs: series.coeffs.clone(),
        };
        Ok(Self {
            sign,
            series,
            p,
            q,
            boundary,
        })
    }
}

impl Model for PiiiModel {
    fn equation(&self) -> SigmaEquation {
        SigmaEquation::PiiiPrime { sign: self.sign }
    }

    fn rhs(&self, t: f64, y: &State) -> State {
        let [v, v1, v2, _] = *y;
        let v3 = -(2.0 * t * v2 - 0.5 * v1 + (8.0 * v1 - 1.0) * (v - t * v1)
            - t * v1 * (4.0 * v1 - 1.0))
            / (2.0 * t * t);
        [v1, v2, v3, -v / t]
    }

    fn terms(&self, t: f64, v: Complex64, dv: Complex64, d2v: Complex64) -> [Complex64; 3] {
        let a = t * d2v;
        [a * a, -0.25 * dv * dv, dv * (4.0 * dv - 1.0) * (v - t * dv)]
    }

    fn series_state(&self, t: f64) -> State {
        let x = t.sqrt() / self.boundary.scale;
        let v = self.series.eval(x);
        let p = self.p.eval(x);
        let q = self.q.eval(x);
        [v, p / t, q / (t * t), -2.0 * self.series.log_integral(x)]
    }

    fn boundary(&self) -> &BoundaryData {
        &self.boundary
    }

    fn in_series_region(&self, t: f64) -> bool {
        t <= self.boundary.t_launch
    }

    fn check_target(&self, t: f64) -> Result<()> {
        if !(t > 0.0 && t.is_finite()) {
            return invalid(format!("σPIII′ abscissa {t} must be positive"));
        }
        Ok(())
    }
}

fn sample_of(model: &dyn Model, t: f64, y: &State) -> PainleveSample {
    PainleveSample {
        t,
        u: y[0],
        du: y[1],
        d2u: y[2],
        log_e: y[3],
        residual: model.residual(t, y),
    }
}

fn trivial_trajectory(
    equation: SigmaEquation,
    xi: Complex64,
    targets: &[f64],
) -> PainleveTrajectory {
    PainleveTrajectory {
        equation,
        xi,
        boundary: BoundaryData {
            t_launch: f64::NAN,
            scale: 1.0,
            coeffs: vec![],
        },
        samples: targets
            .iter()
            .map(|&t| PainleveSample {
                t,
                u: zero(),
                du: zero(),
                d2u: zero(),
                log_e: zero(),
                residual: 0.0,
            })
            .collect(),
        max_residual: 0.0,
    }
}

impl SigmaSolver {
    fn run(&self, model: &dyn Model, xi: Complex64, targets: &[f64]) -> Result<PainleveTrajectory> {
        for &t in targets {
            model.check_target(t)?;
        }
        let t0 = model.boundary().t_launch;
        let launch = model.series_state(t0);
        // Integrate outward from the launch point: increasing t, except for
        // the CUE equation whose boundary is t = ∞.
        let outward = |t: f64| !model.in_series_region(t);
        let mut order: Vec<usize> = (0..targets.len())
            .filter(|&i| outward(targets[i]))
            .collect();
        let descending = matches!(model.equation(), SigmaEquation::PviCue { .. });
        order.sort_by(|&a, &b| {
            let c = targets[a].total_cmp(&targets[b]);
            if descending {
                c.reverse()
            } else {
                c
            }
        });
        let ts: Vec<f64> = order.iter().map(|&i| targets[i]).collect();
        let limit = self.residual_limit;
        let mut last_good = t0;
        let states = ode::integrate(
            |t, y| model.rhs(t, y),
            t0,
            launch,
            &ts,
            &self.ode,
            |t, y| {
                model.project(t, y);
                if model.residual(t, y) > limit || !y.iter().all(|z| z.is_finite()) {
                    return Err(Error::Instability { last_t: last_good });
                }
                last_good = t;
                Ok(())
            },
        )
        .map_err(|e| match e {
            Error::Singularity { t } => Error::Instability { last_t: t },
            other => other,
        })?;
        let mut samples = vec![None; targets.len()];
        for (k, &i) in order.iter().enumerate() {
            samples[i] = Some(sample_of(model, targets[i], &states[k]));
        }
        for (i, s) in samples.iter_mut().enumerate() {
            if s.is_none() {
                *s = Some(sample_of(
                    model,
                    targets[i],
                    &model.series_state(targets[i]),
                ));
            }
        }
        let samples: Vec<PainleveSample> = samples.into_iter().map(Option::unwrap).collect();
        let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
        Ok(PainleveTrajectory {
            equation: model.equation(),
            xi,
            boundary: model.boundary().clone(),
            samples,
            max_residual,
        })
    }

    /// CUE σPVI trajectory sampled at `t = cot(φ/2)` for each target.
    pub fn pvi_cue(&self, n: usize, xi: Complex64, targets: &[f64]) -> Result<PainleveTrajectory> {
        if n == 0 {
            return invalid("N must be positive");
        }
        if xi.norm() == 0.0 {
            return Ok(trivial_trajectory(SigmaEquation::PviCue { n }, xi, targets));
        }
        let model = CueModel::new(n, xi, self.series_terms)?;
        self.run(&model, xi, targets)
    }

    /// `O^±(2N+1)` σPVI trajectory sampled at `t = sin²(φ/2)`.
    pub fn pvi_orthogonal(
        &self,
        sign: Sign,
        n: usize,
        xi: Complex64,
        targets: &[f64],
    ) -> Result<PainleveTrajectory> {
        if n == 0 {
            return invalid("N must be positive");
        }
        if xi.norm() == 0.0 {
            return Ok(trivial_trajectory(
                SigmaEquation::PviOrthogonal { sign, n },
                xi,
                targets,
            ));
        }
        let model = OrthModel::new(sign, n, xi, self.series_terms)?;
        self.run(&model, xi, targets)
    }

    /// σPIII′ trajectory `v_±` sampled at `t = (πs)²`.
    pub fn piii(&self, sign: Sign, xi: Complex64, targets: &[f64]) -> Result<PainleveTrajectory> {
        if xi.norm() == 0.0 {
            return Ok(trivial_trajectory(
                SigmaEquation::PiiiPrime { sign },
                xi,
                targets,
            ));
        }
        let model = PiiiModel::new(sign, xi, self.series_terms)?;
        self.run(&model, xi, targets)
    }
}

/// CUE σPVI trajectory from `t = ∞` down to `t_end = cot(φ/2)`.
pub fn integrate_sigma_pvi_cue(n: usize, xi: Complex64, t_end: f64) -> Result<PainleveTrajectory> {
    SigmaSolver::default().pvi_cue(n, xi, &[t_end])
}

/// `O^±(2N+1)` σPVI trajectory from `t = 0` up to `t_end = sin²(φ/2)`.
pub fn integrate_sigma_pvi_orth(
    sign: Sign,
    n: usize,
    xi: Complex64,
    t_end: f64,
) -> Result<PainleveTrajectory> {
    SigmaSolver::default().pvi_orthogonal(sign, n, xi, &[t_end])
}

/// σPIII′ trajectory `v_±` from `t = 0` up to `t_end = (πs)²`.
pub fn integrate_sigma_piii(sign: Sign, xi: Complex64, t_end: f64) -> Result<PainleveTrajectory> {
    SigmaSolver::default().piii(sign, xi, &[t_end])
}

/// `E_{N,2}((0, φ); ξ)` through the CUE σPVI equation.
pub fn cue_gen_fn_painleve(n: usize, phi: f64, xi: Complex64) -> Result<GenFnSample> {
    if !(phi > 0.0 && phi < PI) {
        return invalid(format!("angle {phi} outside (0, π)"));
    }
    Ok(integrate_sigma_pvi_cue(n, xi, 1.0 / (0.5 * phi).tan())?.last())
}

/// `E^{O±(2N+1)}((0, φ); ξ)` through the orthogonal σPVI equation.
pub fn orthogonal_gen_fn_painleve(
    sign: Sign,
    n: usize,
    phi: f64,
    xi: Complex64,
) -> Result<GenFnSample> {
    if !(phi > 0.0 && phi < PI) {
        return invalid(format!("angle {phi} outside (0, π)"));
    }
    Ok(integrate_sigma_pvi_orth(sign, n, xi, (0.5 * phi).sin().powi(2))?.last())
}

/// `E^{O±}((0, s); ξ)` through σPIII′.
pub fn e_orthogonal_limit_painleve(sign: Sign, s: f64, xi: Complex64) -> Result<GenFnSample> {
    if !(s > 0.0) {
        return invalid(format!("interval length {s} must be positive"));
    }
    Ok(integrate_sigma_piii(sign, xi, (PI * s).powi(2))?.last())
}

/// Value of the conjectured large-`t` form of `v_±(t; 1 − e^{iω})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjectureValue {
    pub value: Complex64,
    /// Set at `ω = π`, where only the leading-order reduction is available.
    pub leading_order_only: bool,
}

/// Conjectured large-`t` asymptotic form of the σPIII′ transcendent
/// `v_±(t; 1 − e^{iω})` for `0 ≤ ω ≤ π`.
pub fn sigma_piii_conjectured_asymptote(sign: Sign, omega: f64, t: f64) -> Result<ConjectureValue> {
    if !(0.0..=PI).contains(&omega) {
        return invalid(format!("frequency {omega} outside [0, π]"));
    }
    if !(t > 0.0) {
        return invalid("t must be positive");
    }
    let eps = sign.value();
    let i = Complex64::new(0.0, 1.0);
    let st = t.sqrt();
    let osc = Complex64::from_polar(1.0, -2.0 * st);
    if omega == PI {
        let value = 0.5 * i * st * (osc + eps * i) / (osc - eps * i);
        return Ok(ConjectureValue {
            value,
            leading_order_only: true,
        });
    }
    let w = omega / (2.0 * PI);
    let amp = |o: f64, power: f64| (PI * o).sin() * gamma(1.0 - o).powi(2) * (4.0 * st).powf(power);
    let x = |o: f64| osc * amp(o, 2.0 * o);
    let y = |o: f64| osc * amp(o, 2.0 * o - 1.0);
    let a = -i * w * (st - (2.0 * st).sin().powi(2) / (4.0 * st) * w) + 0.5 * w * w
        - eps * (1.0 - w) / (4.0 * PI) * (x(w) + x(-w).conj());
    let b = 1.0 + i * eps / PI * (y(w) + y(-w).conj());
    Ok(ConjectureValue {
        value: a / b,
        leading_order_only: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitedet::{cue_gen_fn, orthogonal_gen_fn, EnsembleLabel, Precision};
    use crate::fredholm::e_orthogonal_limit;
    use crate::xi_of_omega;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cue_tau_function_matches_toeplitz() {
        let xi = c(0.6, 0.0);
        let e = cue_gen_fn_painleve(5, 1.0, xi).unwrap();
        let d = cue_gen_fn(5, 1.0, xi, Precision::Double).unwrap();
        assert!(
            (e.value - d.value).norm() < 1e-8,
            "{} vs {}",
            e.value,
            d.value
        );
    }

    #[test]
    fn cue_series_reproduces_known_coefficients() {
        let (n, xi) = (4usize, xi_of_omega(1.2));
        let model = CueModel::new(n, xi, 30).unwrap();
        let rho = model.boundary.scale;
        let a2 = model.series.coeffs[2] / (rho * rho);
        let expect = (xi * n as f64 / PI).powu(3);
        assert!(
            (a2 - expect).norm() < 1e-12 * expect.norm(),
            "{a2} vs {expect}"
        );
    }

    #[test]
    fn orthogonal_tau_function_matches_determinant() {
        let xi = c(0.5, 0.0);
        let e = orthogonal_gen_fn_painleve(Sign::Minus, 4, 0.8, xi).unwrap();
        let d = orthogonal_gen_fn(EnsembleLabel::OMinusOdd(4), 0.8, xi, Precision::Double).unwrap();
        assert!((e.value - d.value).norm() < 1e-7);
        let xi = xi_of_omega(2.0);
        let e = orthogonal_gen_fn_painleve(Sign::Plus, 3, 1.7, xi).unwrap();
        let d = orthogonal_gen_fn(EnsembleLabel::OPlusOdd(3), 1.7, xi, Precision::Double).unwrap();
        assert!((e.value - d.value).norm() < 1e-7);
    }

    #[test]
    fn piii_matches_fredholm() {
        let xi = c(1.0, 0.0);
        let e = e_orthogonal_limit_painleve(Sign::Minus, 1.0, xi).unwrap();
        let d = e_orthogonal_limit(Sign::Minus, 1.0, xi, None).unwrap();
        assert!(
            (e.value - d.value).norm() < 1e-8,
            "{} vs {}",
            e.value,
            d.value
        );
    }

    #[test]
    fn small_t_boundary_behaviour() {
        // u^+ ~ c t^{3/2}: log–log slope 3/2 on [1e-8, 1e-6].
        let traj = SigmaSolver::default()
            .pvi_orthogonal(Sign::Plus, 4, c(0.7, 0.0), &[1e-8, 1e-6])
            .unwrap();
        let slope = (traj.samples[1].u.norm() / traj.samples[0].u.norm()).ln() / 100f64.ln();
        assert!((slope - 1.5).abs() < 0.01, "slope {slope}");
    }

    #[test]
    fn conjecture_reduces_at_pi() {
        // The two forms share the leading √t growth and differ at O(1).
        for t in [50.0, 500.0, 5000.0] {
            let v = sigma_piii_conjectured_asymptote(Sign::Plus, PI, t).unwrap();
            assert!(v.leading_order_only);
            let near = sigma_piii_conjectured_asymptote(Sign::Plus, PI * (1.0 - 1e-9), t).unwrap();
            assert!(!near.leading_order_only);
            assert!((near.value - v.value).norm() < 0.25, "t = {t}");
        }
        assert!(sigma_piii_conjectured_asymptote(Sign::Plus, 4.0, 50.0).is_err());
    }
}
