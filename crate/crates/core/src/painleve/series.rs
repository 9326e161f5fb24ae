//! Truncated power series and a coefficient-by-coefficient solver for
//! polynomial differential equations written with Euler operators.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Power series `Σ c_k X^k` truncated after `len` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub coeffs: Vec<Complex64>,
}

impl Series {
    pub fn zeros(len: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<Complex64>, len: usize) -> Self {
        coeffs.resize(len, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    /// `coef · X^power`.
    pub fn monomial(coef: Complex64, power: usize, len: usize) -> Self {
        let mut s = Self::zeros(len);
        if power < len {
            s.coeffs[power] = coef;
        }
        s
    }

    pub fn constant(c: Complex64, len: usize) -> Self {
        Self::monomial(c, 0, len)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Euler operator `factor · X d/dX`.
    pub fn theta(&self, factor: f64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * (factor * k as f64))
                .collect(),
        }
    }

    pub fn scale(&self, f: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
        }
    }

    /// Value at `x` by Horner's rule.
    pub fn eval(&self, x: f64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    /// `Σ c_k x^k / k` over `k ≥ 1`: the integral of `Σ c_k X^k dX / X`
    /// from 0, valid when `c_0 = 0`.
    pub fn log_integral(&self, x: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = 1.0;
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            p *= x;
            acc += c * (p / k as f64);
        }
        acc
    }

    /// `Σ c_k x^{k+1} / (k+1)`: the integral from 0.
    pub fn integral(&self, x: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = 1.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            p *= x;
            acc += c * (p / (k + 1) as f64);
        }
        acc
    }

    /// Largest `|c_k| x^k` over the last `tail` coefficients, relative to the
    /// largest term overall: a truncation-error indicator at `x`.
    pub fn tail_ratio(&self, x: f64, tail: usize) -> f64 {
        let terms: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * x.powi(k as i32))
            .collect();
        let max = terms.iter().cloned().fold(0.0, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        let start = terms.len().saturating_sub(tail);
        terms[start..].iter().cloned().fold(0.0, f64::max) / max
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        let n = self.len().min(o.len());
        let mut out = Series::zeros(n);
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Series {
            type Output = Series;
            fn $m(self, o: Series) -> Series {
                (&self).$m(&o)
            }
        }
        impl $tr<&Series> for Series {
            type Output = Series;
            fn $m(self, o: &Series) -> Series {
                (&self).$m(o)
            }
        }
        impl $tr<Series> for &Series {
            type Output = Series;
            fn $m(self, o: Series) -> Series {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Solve `residual(u) = 0` for the coefficients of `u` beyond `known`.
///
/// Each unknown `c_k` first enters the residual linearly at some order `j`;
/// two trial evaluations (`c_k = 0` and `c_k = 1`) locate that order and fix
/// `c_k`. The residual is evaluated on series of length `terms + slack`.
pub fn solve_series<F>(
    known: &[Complex64],
    terms: usize,
    slack: usize,
    residual: F,
) -> Result<Series>
where
    F: Fn(&Series) -> Series,
{
    let len = terms + slack;
    let mut u = Series::from_coeffs(known.to_vec(), len);
    for k in known.len()..terms {
        u.coeffs[k] = Complex64::new(0.0, 0.0);
        let r0 = residual(&u);
        u.coeffs[k] = Complex64::new(1.0, 0.0);
        let r1 = residual(&u);
        let diff: Vec<Complex64> = r1
            .coeffs
            .iter()
            .zip(&r0.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        let scale = diff.iter().map(|d| d.norm()).fold(0.0, f64::max);
        let j = diff
            .iter()
            .position(|d| d.norm() > 1e-10 * scale)
            .filter(|_| scale > 0.0)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "series coefficient {k} does not enter the truncated residual"
                ))
            })?;
        u.coeffs[k] = -r0.coeffs[j] / diff[j];
    }
    for c in &mut u.coeffs[terms..] {
        *c = Complex64::new(0.0, 0.0);
    }
    Ok(u)
}
