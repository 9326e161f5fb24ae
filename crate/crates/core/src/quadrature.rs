//! Gauss–Legendre rules, piecewise-polynomial integration of sampled data and the
//! oscillatory power-law tail integral.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, invalid, Result};
use crate::special::gamma;

/// Largest node count accepted by [`gauss_legendre`].
pub const MAX_NODES: usize = 2000;

/// A quadrature rule on the unit interval `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Polynomials of degree below `order` are integrated exactly.
    pub order: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped affinely onto `(a, b)`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let len = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (a + len * x, len * w))
    }

    /// Integral of `f` over `(a, b)`.
    pub fn integrate<T, F>(&self, a: f64, b: f64, mut f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: FnMut(f64) -> T,
    {
        self.mapped(a, b)
            .fold(T::default(), |acc, (x, w)| acc + f(x) * w)
    }
}

/// Legendre polynomial `P_m(x)` and its derivative.
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=m {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let m = m as f64;
    let dp = m * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `m`-point Gauss–Legendre rule on `(0, 1)`, found by Newton iteration from
/// asymptotic initial guesses.
pub fn gauss_legendre(m: usize) -> Result<QuadratureRule> {
    if m == 0 || m > MAX_NODES {
        return invalid(format!("Gauss–Legendre order {m} outside 1..={MAX_NODES}"));
    }
    if m == 1 {
        return Ok(QuadratureRule {
            nodes: vec![0.5],
            weights: vec![1.0],
            order: 2,
        });
    }
    let mf = m as f64;
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for k in 0..m.div_ceil(2) {
        let theta = PI * (k as f64 + 0.75) / (mf + 0.5);
        let mut x = theta.cos() * (1.0 - (1.0 - 1.0 / mf) / (8.0 * mf * mf));
        let mut dp = 1.0;
        for _ in 0..30 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 4.0 * f64::EPSILON {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // k-th root from the top: x_k > 0 maps above 1/2.
        nodes[m - 1 - k] = 0.5 * (1.0 + x);
        nodes[k] = 0.5 * (1.0 - x);
        weights[m - 1 - k] = 0.5 * w;
        weights[k] = 0.5 * w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.5;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        order: 2 * m,
    })
}

/// Complex samples of a function on a strictly increasing abscissa grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub abscissae: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(abscissae: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if abscissae.len() != values.len() {
            return invalid("abscissae and values differ in length");
        }
        if abscissae.len() < 4 {
            return invalid("interpolation needs at least four samples");
        }
        if abscissae.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("abscissae must be strictly increasing");
        }
        Ok(Self { abscissae, values })
    }

    /// Uniform grid `x_j = a + j (b - a) / n`, `j = 0..=n`, sampled from `f`.
    pub fn sample_uniform<F>(a: f64, b: f64, n: usize, f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Complex64,
    {
        let xs: Vec<f64> = (0..=n).map(|j| a + (b - a) * j as f64 / n as f64).collect();
        let ys = xs.iter().copied().map(f).collect();
        Self::new(xs, ys)
    }

    pub fn span(&self) -> (f64, f64) {
        (self.abscissae[0], *self.abscissae.last().unwrap())
    }

    /// Local interpolation stencil width: six points (quintic) when
    /// available, otherwise four (cubic).
    fn width(&self) -> usize {
        if self.abscissae.len() >= 6 {
            6
        } else {
            4
        }
    }

    /// Start index of the stencil used on interval `i`, centred on it where
    /// possible and shifted inward at the ends.
    fn stencil(&self, i: usize) -> usize {
        let (n, w) = (self.abscissae.len(), self.width());
        (i + 1).saturating_sub(w / 2).min(n - w)
    }

    fn interval_of(&self, x: f64) -> usize {
        let n = self.abscissae.len();
        match self
            .abscissae
            .binary_search_by(|v| v.partial_cmp(&x).unwrap())
        {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    fn lagrange(&self, start: usize, x: f64) -> Complex64 {
        let points = self.width();
        let xs = &self.abscissae[start..start + points];
        let ys = &self.values[start..start + points];
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..points {
            let mut l = 1.0;
            for k in 0..points {
                if k != j {
                    l *= (x - xs[k]) / (xs[j] - xs[k]);
                }
            }
            acc += ys[j] * l;
        }
        acc
    }

    /// Value of the local interpolant at `x`.
    pub fn interpolate(&self, x: f64) -> Result<Complex64> {
        let (lo, hi) = self.span();
        if !(lo..=hi).contains(&x) {
            return domain(format!("{x} outside the sampled range [{lo}, {hi}]"));
        }
        let i = self.interval_of(x);
        Ok(self.lagrange(self.stencil(i), x))
    }

    /// Integral over `[a, b]` of the piecewise local interpolant.
    pub fn integrate(&self, a: f64, b: f64) -> Result<Complex64> {
        let (lo, hi) = self.span();
        if a > b {
            return Ok(-self.integrate(b, a)?);
        }
        let slack = 1e-12 * (hi - lo);
        if a < lo - slack || b > hi + slack {
            return domain(format!(
                "integration range [{a}, {b}] exceeds the sampled range [{lo}, {hi}]"
            ));
        }
        let (a, b) = (a.max(lo), b.min(hi));
        // Three-point Gauss is exact for quintics.
        let g = 0.5 * 0.6f64.sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in self.interval_of(a)..=self.interval_of(b) {
            let l = self.abscissae[i].max(a);
            let r = self.abscissae[i + 1].min(b);
            if r <= l {
                continue;
            }
            let start = self.stencil(i);
            let (mid, width) = (0.5 * (l + r), r - l);
            let f = |x| self.lagrange(start, x);
            acc += (f(mid - g * width) * 5.0 + f(mid) * 8.0 + f(mid + g * width) * 5.0)
                * (width / 18.0);
        }
        Ok(acc)
    }
}

/// `∫_0^a s^{-e} cos(ω s) ds` for `e < 1`, by the term-wise integrated
/// Taylor series. Intended for `ω a ≲ 2`.
fn power_cos_series(omega: f64, exponent: f64, a: f64) -> f64 {
    let x2 = (omega * a).powi(2);
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 0..200 {
        let contrib = term / (2.0 * k as f64 + 1.0 - exponent);
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs() {
            break;
        }
        term *= -x2 / ((2 * k + 1) as f64 * (2 * k + 2) as f64);
    }
    sum * a.powf(1.0 - exponent)
}

/// `∫_a^b s^{-e} cos(ω s) ds` with `0 < a < b` by Gauss–Legendre panels no
/// longer than half a period.
fn power_cos_panels(omega: f64, exponent: f64, a: f64, b: f64) -> f64 {
    let rule = gauss_legendre(20).expect("fixed order");
    let panel = (PI / omega).min(0.5 * a.max(1e-3));
    let mut acc = 0.0;
    let mut l = a;
    while l < b {
        // Panels grow geometrically near the origin, capped at half a period.
        let width = panel.max(0.5 * l).min(PI / omega);
        let r = (l + width).min(b);
        acc += rule.integrate(l, r, |s| s.powf(-exponent) * (omega * s).cos());
        l = r;
    }
    acc
}

/// `∫_0^b s^{-e} cos(ω s) ds` for `0 < e < 1`.
pub fn power_cos_integral(omega: f64, exponent: f64, b: f64) -> Result<f64> {
    if !(exponent > 0.0 && exponent < 1.0) {
        return domain(format!("exponent {exponent} outside (0, 1)"));
    }
    if !(omega > 0.0) || !(b > 0.0) {
        return invalid("frequency and upper limit must be positive");
    }
    let a = b.min(1.0 / omega);
    let mut acc = power_cos_series(omega, exponent, a);
    if b > a {
        acc += power_cos_panels(omega, exponent, a, b);
    }
    Ok(acc)
}

/// `∫_{s*}^∞ s^{-e} cos(ω s) ds` for `0 < e < 1`, as the closed-form integral
/// over the half line minus the finite part.
pub fn tail_integral(omega: f64, exponent: f64, s_star: f64) -> Result<f64> {
    let finite = power_cos_integral(omega, exponent, s_star)?;
    let full = gamma(1.0 - exponent) * (0.5 * PI * exponent).sin() * omega.powf(exponent - 1.0);
    Ok(full - finite)
}

/// `∫_{s*}^∞ s^{-e} cos(ω s) ds` for any `e > 0` from the integration-by-parts
/// expansion, truncated at its smallest term. Accurate when `ω s*` is large.
pub fn tail_integral_asymptotic(omega: f64, exponent: f64, s_star: f64) -> Result<f64> {
    if !(exponent > 0.0) || !(omega > 0.0) || !(s_star > 0.0) {
        return invalid("exponent, frequency and lower limit must be positive");
    }
    let x = omega * s_star;
    let inv = Complex64::new(0.0, -1.0 / x); // 1 / (i ω s*)
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut prev = f64::INFINITY;
    for k in 0..400 {
        let next = term * inv * (exponent + k as f64);
        if next.norm() >= prev || next.norm() < 1e-18 {
            break;
        }
        prev = next.norm();
        term = next;
        sum += term;
    }
    let phase = Complex64::from_polar(1.0, x);
    let value = phase * Complex64::new(0.0, 1.0 / omega) * s_star.powf(-exponent) * sum;
    Ok(value.re)
}
