//! Generating functions of the finite circular ensembles as Toeplitz and
//! Toeplitz ± Hankel determinants.
//!
//! The unitary case is the `N × N` Toeplitz determinant of the symbol
//! `1 - ξ χ_(0,φ)`. The orthogonal groups `O^±(n)` reduce to `M × M`
//! determinants built from the Fourier coefficients
//! `a_j = δ_{j0} - ξ sin(jφ)/(πj)`, `a_0 = 1 - ξφ/π`, and the COE and CSE
//! follow from inter-relations with those groups.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::ddouble::{ComplexDD, DoubleDouble};
use crate::error::{invalid, Error, Result};
use crate::linalg::{det_c64, det_dd, Determinant};
use crate::{Beta, GenFnSample, Route, Sign};

/// Largest determinant evaluated in double precision.
pub const DOUBLE_CAP: usize = 150;
/// Largest determinant evaluated in double-double precision.
pub const EXTENDED_CAP: usize = 600;

/// Arithmetic used for a determinant evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Precision {
    Double,
    Extended,
    /// Double up to [`DOUBLE_CAP`], extended above.
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Arith {
    Double,
    Extended,
}

fn resolve(precision: Precision, n: usize) -> Result<Arith> {
    let too_big = |cap, precision| Error::PrecisionEscalationRequired { n, cap, precision };
    match precision {
        Precision::Double if n > DOUBLE_CAP => Err(too_big(DOUBLE_CAP, "double")),
        Precision::Double => Ok(Arith::Double),
        Precision::Extended | Precision::Auto if n > EXTENDED_CAP => {
            Err(too_big(EXTENDED_CAP, "extended"))
        }
        Precision::Extended => Ok(Arith::Extended),
        Precision::Auto if n > DOUBLE_CAP => Ok(Arith::Extended),
        Precision::Auto => Ok(Arith::Double),
    }
}

/// Which finite ensemble or classical group a generating function refers to.
///
/// For the orthogonal groups the payload is the size of the reduced
/// determinant: `O^±(2n+1)` for the odd labels, `O^+(2n)` and `O^-(2n+2)` for
/// the even ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnsembleLabel {
    Cue(usize),
    Coe(usize),
    Cse(usize),
    OPlusOdd(usize),
    OMinusOdd(usize),
    OPlusEven(usize),
    OMinusEven(usize),
}

impl EnsembleLabel {
    /// Label of `O^sign(dim)`.
    pub fn orthogonal(sign: Sign, dim: usize) -> Result<Self> {
        match (sign, dim % 2) {
            (Sign::Plus, 1) => Ok(Self::OPlusOdd(dim / 2)),
            (Sign::Minus, 1) => Ok(Self::OMinusOdd(dim / 2)),
            (Sign::Plus, _) if dim >= 2 => Ok(Self::OPlusEven(dim / 2)),
            (Sign::Minus, _) if dim >= 2 => Ok(Self::OMinusEven(dim / 2 - 1)),
            _ => invalid(format!("no orthogonal group of dimension {dim}")),
        }
    }

    /// Number of free eigenvalue angles, i.e. the reduced determinant size.
    pub fn size(self) -> usize {
        match self {
            Self::Cue(n) | Self::Coe(n) | Self::Cse(n) => n,
            Self::OPlusOdd(n) | Self::OMinusOdd(n) | Self::OPlusEven(n) | Self::OMinusEven(n) => n,
        }
    }
}

/// Fourier coefficients `a_0 .. a_{len-1}` of the orthogonal-group symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    pub phi: f64,
    pub xi: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl FourierCoefficients {
    pub fn new(phi: f64, xi: Complex64, len: usize) -> Self {
        let coeffs = (0..len)
            .map(|j| {
                if j == 0 {
                    1.0 - xi * (phi / PI)
                } else {
                    -xi * ((j as f64 * phi).sin() / (PI * j as f64))
                }
            })
            .collect();
        Self { phi, xi, coeffs }
    }
}

/// `sin(j θ) / (π j)` in double-double, with `θ = phi · scale` and `scale`
/// a power of two.
fn sinc_coeff_dd(j: usize, phi: f64, scale: f64) -> DoubleDouble {
    let arg = DoubleDouble::product(j as f64, phi);
    let arg = DoubleDouble {
        hi: arg.hi * scale,
        lo: arg.lo * scale,
    };
    arg.sin_cos().0 / (DoubleDouble::PI * DoubleDouble::from_f64(j as f64))
}

/// Symbol coefficients `c_0 .. c_{len-1}` where
/// `c_j = δ_{j0} - ξ sin(j θ)/(π j)` and `c_0 = 1 - ξ θ / π`, `θ = phi·scale`.
fn symbol_c64(phi: f64, scale: f64, xi: Complex64, len: usize) -> Vec<Complex64> {
    let theta = phi * scale;
    (0..len)
        .map(|j| {
            if j == 0 {
                1.0 - xi * (theta / PI)
            } else {
                -xi * ((j as f64 * theta).sin() / (PI * j as f64))
            }
        })
        .collect()
}

fn symbol_dd(phi: f64, scale: f64, xi: Complex64, len: usize) -> Vec<ComplexDD> {
    let xi = ComplexDD::from_c64(xi);
    (0..len)
        .map(|j| {
            if j == 0 {
                let theta = DoubleDouble {
                    hi: phi * scale,
                    lo: 0.0,
                };
                ComplexDD::ONE - xi.scale(theta / DoubleDouble::PI)
            } else {
                -xi.scale(sinc_coeff_dd(j, phi, scale))
            }
        })
        .collect()
}

/// Evaluate `det[entry(j, k)]` of size `n` from the symbol coefficients.
fn structured_det<F>(
    n: usize,
    arith: Arith,
    phi: f64,
    scale: f64,
    xi: Complex64,
    len: usize,
    entry: F,
) -> Determinant
where
    F: Fn(usize, usize) -> (usize, Option<(usize, f64)>),
{
    // `entry(j, k)` returns the Toeplitz index and an optional Hankel index with its sign.
    match arith {
        Arith::Double => {
            let c = symbol_c64(phi, scale, xi, len);
            let a = (0..n * n)
                .map(|jk| {
                    let (t, h) = entry(jk / n, jk % n);
                    match h {
                        Some((h, s)) => c[t] + c[h] * s,
                        None => c[t],
                    }
                })
                .collect();
            det_c64(a, n)
        }
        Arith::Extended => {
            let c = symbol_dd(phi, scale, xi, len);
            let a = (0..n * n)
                .map(|jk| {
                    let (t, h) = entry(jk / n, jk % n);
                    match h {
                        Some((h, s)) if s > 0.0 => c[t] + c[h],
                        Some((h, _)) => c[t] - c[h],
                        None => c[t],
                    }
                })
                .collect();
            det_dd(a, n)
        }
    }
}

fn check_angle(phi: f64, max: f64) -> Result<()> {
    if !(0.0..=max * (1.0 + 1e-15)).contains(&phi) {
        return invalid(format!("angle {phi} outside [0, {max}]"));
    }
    Ok(())
}

fn check_xi(xi: Complex64) -> Result<()> {
    if !xi.is_finite() {
        return invalid("xi must be finite");
    }
    Ok(())
}

fn sample(phi: f64, xi: Complex64, det: Determinant) -> GenFnSample {
    GenFnSample {
        interval_length: phi,
        xi,
        value: det.value,
        route: Route::Determinant,
        err_estimate: det.rel_err * det.value.norm().max(f64::MIN_POSITIVE),
    }
}

/// `E_{N,2}((0, φ); ξ)` for the CUE as an `N × N` Toeplitz determinant.
pub fn cue_gen_fn(n: usize, phi: f64, xi: Complex64, precision: Precision) -> Result<GenFnSample> {
    if n == 0 {
        return invalid("N must be positive");
    }
    check_angle(phi, 2.0 * PI)?;
    check_xi(xi)?;
    let arith = resolve(precision, n)?;
    // Toeplitz entries c_{|p-q|} with the half angle: sin((p-q)φ/2)/(π(p-q)),
    // and diagonal 1 - ξφ/(2π).
    let det = structured_det(n, arith, phi, 0.5, xi, n, |p, q| (p.abs_diff(q), None));
    Ok(sample(phi, xi, det))
}

/// Generating function of `O^±(n)` from its reduced Toeplitz ± Hankel
/// determinant. `phi` is an angle of `[0, π]`.
pub fn orthogonal_gen_fn(
    label: EnsembleLabel,
    phi: f64,
    xi: Complex64,
    precision: Precision,
) -> Result<GenFnSample> {
    check_angle(phi, PI)?;
    check_xi(xi)?;
    let m = label.size();
    let arith = resolve(precision, m)?;
    let len = 2 * m + 1;
    // Indices are 1-based in the usual statement; here j, k start at 0.
    let det = match label {
        EnsembleLabel::OMinusOdd(_) => structured_det(m, arith, phi, 1.0, xi, len, |j, k| {
            (j.abs_diff(k), Some((j + k + 1, 1.0)))
        }),
        EnsembleLabel::OPlusOdd(_) => structured_det(m, arith, phi, 1.0, xi, len, |j, k| {
            (j.abs_diff(k), Some((j + k + 1, -1.0)))
        }),
        EnsembleLabel::OPlusEven(_) => {
            if m == 0 {
                return invalid("O^+(0) is not a group");
            }
            let mut d = structured_det(m, arith, phi, 1.0, xi, len, |j, k| {
                (j.abs_diff(k), Some((j + k, 1.0)))
            });
            d.value *= 0.5;
            d
        }
        EnsembleLabel::OMinusEven(_) => structured_det(m, arith, phi, 1.0, xi, len, |j, k| {
            (j.abs_diff(k), Some((j + k + 2, -1.0)))
        }),
        _ => return invalid(format!("{label:?} is not an orthogonal group")),
    };
    Ok(sample(phi, xi, det))
}

/// `E_{N,1}((0, φ); ξ)` for the COE from the two orthogonal cosets of
/// dimension `N + 1`, at half the angle and parameter `ξ(2 - ξ)`.
pub fn coe_gen_fn(n: usize, phi: f64, xi: Complex64) -> Result<GenFnSample> {
    if n == 0 {
        return invalid("N must be positive");
    }
    check_angle(phi, 2.0 * PI)?;
    check_xi(xi)?;
    let radius = (1.0 / n as f64).min(0.5);
    if (2.0 - xi).norm() < 0.5 * radius {
        let mut err = 0.0f64;
        let value = circle_mean(xi, radius, n + 8, |x| {
            let e = coe_regular(n, phi, x)?;
            err = err.max(e.err_estimate);
            Ok(e.value)
        })?;
        return Ok(GenFnSample {
            interval_length: phi,
            xi,
            value,
            route: Route::Determinant,
            err_estimate: err,
        });
    }
    coe_regular(n, phi, xi)
}

/// Value at `center` of a polynomial of degree below `points` as its mean
/// over the circle `|ξ - center| = radius`.
pub fn circle_mean<F>(center: Complex64, radius: f64, points: usize, mut f: F) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..points {
        let theta = 2.0 * PI * (k as f64 + 0.5) / points as f64;
        acc += f(center + Complex64::from_polar(radius, theta))?;
    }
    Ok(acc / points as f64)
}

fn coe_regular(n: usize, phi: f64, xi: Complex64) -> Result<GenFnSample> {
    let den = 2.0 - xi;
    if den.norm() < 1e-14 {
        return Err(Error::Pole);
    }
    let nu = if n.is_multiple_of(2) {
        Sign::Plus
    } else {
        Sign::Minus
    };
    let eta = xi * (2.0 - xi);
    let half = (0.5 * phi).min(PI);
    let a = orthogonal_gen_fn(
        EnsembleLabel::orthogonal(nu, n + 1)?,
        half,
        eta,
        Precision::Auto,
    )?;
    let b = orthogonal_gen_fn(
        EnsembleLabel::orthogonal(nu.flip(), n + 1)?,
        half,
        eta,
        Precision::Auto,
    )?;
    let wa = (1.0 - xi) / den;
    let wb = 1.0 / den;
    Ok(GenFnSample {
        interval_length: phi,
        xi,
        value: wa * a.value + wb * b.value,
        route: Route::Determinant,
        err_estimate: wa.norm() * a.err_estimate + wb.norm() * b.err_estimate,
    })
}

/// `E_{N,4}((0, φ); ξ)` for the CSE as the mean of the `O^±(2N + 1)`
/// generating functions at half the angle.
pub fn cse_gen_fn(n: usize, phi: f64, xi: Complex64) -> Result<GenFnSample> {
    if n == 0 {
        return invalid("N must be positive");
    }
    check_angle(phi, 2.0 * PI)?;
    check_xi(xi)?;
    let half = (0.5 * phi).min(PI);
    let a = orthogonal_gen_fn(EnsembleLabel::OPlusOdd(n), half, xi, Precision::Auto)?;
    let b = orthogonal_gen_fn(EnsembleLabel::OMinusOdd(n), half, xi, Precision::Auto)?;
    Ok(GenFnSample {
        interval_length: phi,
        xi,
        value: 0.5 * (a.value + b.value),
        route: Route::Determinant,
        err_estimate: 0.5 * (a.err_estimate + b.err_estimate),
    })
}

/// Generating function of any finite ensemble or group by determinant.
pub fn gen_fn(label: EnsembleLabel, phi: f64, xi: Complex64) -> Result<GenFnSample> {
    match label {
        EnsembleLabel::Cue(n) => cue_gen_fn(n, phi, xi, Precision::Auto),
        EnsembleLabel::Coe(n) => coe_gen_fn(n, phi, xi),
        EnsembleLabel::Cse(n) => cse_gen_fn(n, phi, xi),
        _ => orthogonal_gen_fn(label, phi, xi, Precision::Auto),
    }
}

/// Generating function of the `β` ensemble of size `N`.
pub fn ensemble_gen_fn(beta: Beta, n: usize, phi: f64, xi: Complex64) -> Result<GenFnSample> {
    match beta {
        Beta::One => coe_gen_fn(n, phi, xi),
        Beta::Two => cue_gen_fn(n, phi, xi, Precision::Auto),
        Beta::Four => cse_gen_fn(n, phi, xi),
    }
}

/// Coefficient of `ξ²` in `E_{N,β}((0, φ); ξ)`, from closed-form sums.
pub fn xi_squared_coefficient(beta: Beta, n: usize, phi: f64) -> Result<f64> {
    if n == 0 {
        return invalid("N must be positive");
    }
    check_angle(phi, 2.0 * PI)?;
    let pi2 = PI * PI;
    let sin2_sum = |upper: usize, weight: &dyn Fn(usize) -> f64, arg: f64| -> f64 {
        (1..=upper)
            .map(|j| weight(j) * (j as f64 * arg).sin().powi(2) / (j * j) as f64)
            .sum()
    };
    let half_odd_sum = |m: usize| -> f64 {
        (1..=m)
            .map(|k| {
                let h = k as f64 - 0.5;
                (h * phi).sin() / h
            })
            .sum()
    };
    let c2 = match beta {
        Beta::Two => {
            let h = 0.5 * phi;
            let nf = n as f64;
            nf * (nf - 1.0) * h * h / (2.0 * pi2) - sin2_sum(n - 1, &|j| (n - j) as f64, h) / pi2
        }
        Beta::One if n.is_multiple_of(2) => {
            let m = n / 2;
            let mf = m as f64;
            let s = half_odd_sum(m);
            mf * (mf - 1.0) * phi * phi / (2.0 * pi2) + mf * phi / (2.0 * PI)
                - 2.0 * sin2_sum(n - 1, &|j| (n - j) as f64, 0.5 * phi) / pi2
                + s * s / (2.0 * pi2)
                - s / (2.0 * PI)
        }
        Beta::One => {
            let m = n / 2;
            let mf = m as f64;
            let t: f64 = (1..=m).map(|k| (k as f64 * phi).sin() / k as f64).sum();
            mf * mf * phi * phi / (2.0 * pi2) + mf * phi / (2.0 * PI)
                - 2.0 * sin2_sum(n, &|j| (n - j) as f64, 0.5 * phi) / pi2
                + t * t / (2.0 * pi2)
                + (phi - PI) * t / (2.0 * pi2)
        }
        Beta::Four => {
            let nf = n as f64;
            let u = half_odd_sum(n);
            nf * (nf - 1.0) * phi * phi / (8.0 * pi2)
                - sin2_sum(2 * n - 1, &|j| nf - 0.5 * j as f64, 0.5 * phi) / pi2
                + u * u / (8.0 * pi2)
        }
    };
    Ok(c2)
}

/// Variance of the number of eigenvalues in an arc of length `φ`, read off
/// from the first two `ξ`-coefficients of the generating function.
pub fn number_variance(beta: Beta, n: usize, phi: f64) -> Result<f64> {
    let c2 = xi_squared_coefficient(beta, n, phi)?;
    let mean = n as f64 * phi / (2.0 * PI);
    Ok(2.0 * c2 + mean - mean * mean)
}
