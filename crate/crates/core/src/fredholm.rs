//! Fredholm determinants `det(I - ξ K)` of sine-type kernels by Nyström
//! discretisation with Gauss–Legendre nodes.
//!
//! The bulk kernels act on `(0, s)` and are rescaled to `(0, 1)`:
//! `K(x, y) = s sinc(π s (x - y))`, and the orthogonal-group kernels
//! `K(x, y) ∓ K(x, -y)` whose determinants give `E^{O±}`. Note the sign
//! convention: `E^{O+}` pairs with the difference, `E^{O-}` with the sum.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::finitedet::circle_mean;
use crate::linalg::det_c64;
use crate::quadrature::{gauss_legendre, QuadratureRule};
use crate::{Beta, GenFnSample, Route, Sign};

/// Largest Nyström node count.
pub const MAX_NYSTROM_NODES: usize = 4001;

/// Integral kernel families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    /// `sinc π(x - y)` on `(0, s)`.
    SineBulk,
    /// `sinc π(x - y) - sinc π(x + y)` on `(0, s)`, giving `E^{O+}`.
    SinePlus,
    /// `sinc π(x - y) + sinc π(x + y)` on `(0, s)`, giving `E^{O-}`.
    SineMinus,
    /// Finite-`N` CUE kernel on the arc `(0, φ)`.
    FiniteCue { n: usize },
    /// Kernel of `O^±(2N + 1)` on `(0, φ)`.
    FiniteOrthogonal { sign: Sign, n: usize },
}

/// A kernel together with the length of the interval it acts on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub length: f64,
}

#[inline]
fn sinc_pi(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 - (PI * u).powi(2) / 6.0
    } else {
        (PI * u).sin() / (PI * u)
    }
}

/// `sin(N x) / sin(x / 2)` with its removable singularities at `x ∈ 2πZ`.
#[inline]
fn dirichlet_ratio(n: f64, x: f64) -> f64 {
    let d = (0.5 * x).sin();
    if d.abs() < 1e-7 {
        // L'Hôpital at the nearest multiple of 2π.
        n * (n * x).cos() / (0.5 * (0.5 * x).cos())
    } else {
        (n * x).sin() / d
    }
}

impl KernelSpec {
    pub fn new(kind: KernelKind, length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return invalid(format!("interval length {length} must be positive"));
        }
        match kind {
            KernelKind::FiniteCue { n } | KernelKind::FiniteOrthogonal { n, .. } if n == 0 => {
                return invalid("N must be positive")
            }
            KernelKind::FiniteCue { .. } if length > 2.0 * PI => {
                return invalid("arc longer than the circle")
            }
            KernelKind::FiniteOrthogonal { .. } if length > PI => {
                return invalid("orthogonal-group arc must lie in (0, π)")
            }
            _ => {}
        }
        Ok(Self { kind, length })
    }

    /// Kernel value in the original variables of the interval `(0, length)`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self.kind {
            KernelKind::SineBulk => sinc_pi(x - y),
            KernelKind::SinePlus => sinc_pi(x - y) - sinc_pi(x + y),
            KernelKind::SineMinus => sinc_pi(x - y) + sinc_pi(x + y),
            KernelKind::FiniteCue { n } => {
                let d = x - y;
                let n = n as f64;
                if d.abs() < 1e-9 {
                    n / (2.0 * PI)
                } else {
                    (0.5 * n * d).sin() / (2.0 * PI * (0.5 * d).sin())
                }
            }
            KernelKind::FiniteOrthogonal { sign, n } => {
                let n = n as f64;
                let diff = dirichlet_ratio(n, x - y);
                let sum = dirichlet_ratio(n, x + y);
                (diff - sign.value() * sum) / (2.0 * PI)
            }
        }
    }

    /// Length of an equivalent bulk interval: the kernel oscillates like
    /// `sinc π s (x - y)` on the unit interval.
    pub fn bulk_length(&self) -> f64 {
        match self.kind {
            KernelKind::SineBulk | KernelKind::SinePlus | KernelKind::SineMinus => self.length,
            KernelKind::FiniteCue { n } => n as f64 * self.length / (2.0 * PI),
            KernelKind::FiniteOrthogonal { n, .. } => n as f64 * self.length / PI,
        }
    }
}

/// Node count resolving the kernel to about `1e-12`.
pub fn default_nodes(kernel: &KernelSpec) -> usize {
    let m = (2.0 * kernel.bulk_length()).ceil() as usize + 20;
    let m = m.max(30);
    m | 1
}

/// The symmetrised Nyström matrix `√w_i K(x_i, x_j) √w_j` of a kernel,
/// reusable for any `ξ`.
#[derive(Debug, Clone)]
pub struct NystromOperator {
    pub kernel: KernelSpec,
    pub m: usize,
    matrix: Vec<f64>,
}

impl NystromOperator {
    pub fn new(kernel: KernelSpec, m: usize) -> Result<Self> {
        if m > MAX_NYSTROM_NODES {
            return Err(Error::Resource {
                m,
                cap: MAX_NYSTROM_NODES,
            });
        }
        let rule: QuadratureRule = gauss_legendre(m)?;
        let (xs, sw): (Vec<f64>, Vec<f64>) = rule
            .mapped(0.0, kernel.length)
            .map(|(x, w)| (x, w.sqrt()))
            .unzip();
        let mut matrix = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..=i {
                let k = sw[i] * kernel.eval(xs[i], xs[j]) * sw[j];
                matrix[i * m + j] = k;
                matrix[j * m + i] = k;
            }
        }
        Ok(Self { kernel, m, matrix })
    }

    /// `det(I - ξ K)` on the discretisation.
    pub fn det(&self, xi: Complex64) -> Complex64 {
        let m = self.m;
        let a = self
            .matrix
            .iter()
            .enumerate()
            .map(|(ij, &k)| {
                let d = if ij / m == ij % m { 1.0 } else { 0.0 };
                Complex64::new(d, 0.0) - xi * k
            })
            .collect();
        det_c64(a, m).value
    }
}

impl NystromOperator {
    /// Eigenvalues of the (real symmetric) Nyström matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = self.m;
        let a = nalgebra::DMatrix::from_row_slice(m, m, &self.matrix);
        let mut ev: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Nyström eigenvalues of one kernel, from which `det(I - ξ K)` follows for
/// any `ξ` as `Π (1 - ξ λ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpectrum {
    pub kernel: KernelSpec,
    pub eigenvalues: Vec<f64>,
}

impl KernelSpectrum {
    pub fn new(kernel: KernelSpec) -> Result<Self> {
        let m = default_nodes(&kernel);
        Ok(Self {
            kernel,
            eigenvalues: NystromOperator::new(kernel, m)?.eigenvalues(),
        })
    }

    pub fn det(&self, xi: Complex64) -> Complex64 {
        self.eigenvalues
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &l| acc * (1.0 - xi * l))
    }
}

/// The pair of orthogonal-group spectra that determines `E_{∞,β}((0, s); ·)`
/// for one `s` and every `ξ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSpectra {
    pub beta: Beta,
    pub s: f64,
    plus: Option<KernelSpectrum>,
    minus: Option<KernelSpectrum>,
}

impl LimitSpectra {
    pub fn new(beta: Beta, s: f64) -> Result<Self> {
        if s < 0.0 || !s.is_finite() {
            return invalid(format!("interval length {s} must be non-negative"));
        }
        if s == 0.0 {
            return Ok(Self {
                beta,
                s,
                plus: None,
                minus: None,
            });
        }
        let length = if beta == Beta::Four { s } else { 0.5 * s };
        Ok(Self {
            beta,
            s,
            plus: Some(KernelSpectrum::new(KernelSpec::new(
                KernelKind::SinePlus,
                length,
            )?)?),
            minus: Some(KernelSpectrum::new(KernelSpec::new(
                KernelKind::SineMinus,
                length,
            )?)?),
        })
    }

    /// `E_{∞,β}((0, s); ξ)`.
    pub fn value(&self, xi: Complex64) -> Result<Complex64> {
        let (Some(p), Some(q)) = (&self.plus, &self.minus) else {
            return Ok(Complex64::new(1.0, 0.0));
        };
        match self.beta {
            Beta::Two => Ok(p.det(xi) * q.det(xi)),
            Beta::One => {
                let coe = |x: Complex64| {
                    let eta = x * (2.0 - x);
                    ((1.0 - x) * p.det(eta) + q.det(eta)) / (2.0 - x)
                };
                // Near ξ = 2 both terms cancel; the value is a polynomial in ξ.
                let radius = (1.0 / self.s).min(0.5);
                if (2.0 - xi).norm() < 0.5 * radius {
                    let points = 2 * p.eigenvalues.len().max(q.eigenvalues.len()) + 1;
                    return circle_mean(xi, radius, points, |x| Ok(coe(x)));
                }
                Ok(coe(xi))
            }
            Beta::Four => Ok(0.5 * (p.det(xi) + q.det(xi))),
        }
    }
}

/// A Nyström determinant with the rule that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NystromDet {
    pub value: Complex64,
    pub m: usize,
    /// Polynomial exactness order of the underlying rule.
    pub rule_order: usize,
    /// `|det_m - det_{⌈m/2⌉}|`.
    pub err_estimate: f64,
}

/// `det(I - ξ K)` with `m` nodes, or [`default_nodes`] when `m` is `None`.
pub fn fredholm_det(kernel: &KernelSpec, xi: Complex64, m: Option<usize>) -> Result<NystromDet> {
    if !xi.is_finite() {
        return invalid("xi must be finite");
    }
    let m = m.unwrap_or_else(|| default_nodes(kernel));
    if m == 0 {
        return invalid("node count must be positive");
    }
    let value = NystromOperator::new(*kernel, m)?.det(xi);
    let coarse = NystromOperator::new(*kernel, m.div_ceil(2))?.det(xi);
    Ok(NystromDet {
        value,
        m,
        rule_order: 2 * m,
        err_estimate: (value - coarse).norm(),
    })
}

/// `det(I - ξ K)` without the error estimate.
pub(crate) fn fredholm_value(kind: KernelKind, length: f64, xi: Complex64) -> Result<Complex64> {
    let kernel = KernelSpec::new(kind, length)?;
    Ok(NystromOperator::new(kernel, default_nodes(&kernel))?.det(xi))
}

/// `E^{O±}((0, s); ξ)` of the bulk-scaled orthogonal groups.
pub fn e_orthogonal_limit(
    sign: Sign,
    s: f64,
    xi: Complex64,
    m: Option<usize>,
) -> Result<GenFnSample> {
    if s == 0.0 {
        return Ok(trivial(s, xi));
    }
    let kind = match sign {
        Sign::Plus => KernelKind::SinePlus,
        Sign::Minus => KernelKind::SineMinus,
    };
    let d = fredholm_det(&KernelSpec::new(kind, s)?, xi, m)?;
    Ok(GenFnSample {
        interval_length: s,
        xi,
        value: d.value,
        route: Route::Fredholm,
        err_estimate: d.err_estimate,
    })
}

fn trivial(s: f64, xi: Complex64) -> GenFnSample {
    GenFnSample {
        interval_length: s,
        xi,
        value: Complex64::new(1.0, 0.0),
        route: Route::Fredholm,
        err_estimate: 0.0,
    }
}

/// `E_{∞,β}((0, s); ξ)` without error estimates. `β = 2` uses the
/// factorisation into the two orthogonal-group determinants at `s/2`.
pub fn e_inf_beta_value(beta: Beta, s: f64, xi: Complex64) -> Result<Complex64> {
    if s < 0.0 || !s.is_finite() {
        return invalid(format!("interval length {s} must be non-negative"));
    }
    if s == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    match beta {
        Beta::Two => Ok(fredholm_value(KernelKind::SinePlus, 0.5 * s, xi)?
            * fredholm_value(KernelKind::SineMinus, 0.5 * s, xi)?),
        Beta::One => {
            let den = 2.0 - xi;
            if den.norm() < 1e-14 {
                return Err(Error::Pole);
            }
            let eta = xi * (2.0 - xi);
            let plus = fredholm_value(KernelKind::SinePlus, 0.5 * s, eta)?;
            let minus = fredholm_value(KernelKind::SineMinus, 0.5 * s, eta)?;
            Ok(((1.0 - xi) * plus + minus) / den)
        }
        Beta::Four => Ok(0.5
            * (fredholm_value(KernelKind::SinePlus, s, xi)?
                + fredholm_value(KernelKind::SineMinus, s, xi)?)),
    }
}

/// `E_{∞,β}((0, s); ξ)` with an error estimate. For `β = 2` both the direct
/// sine-kernel determinant and the factorised form are computed and their
/// discrepancy enters the estimate.
pub fn e_inf_beta(beta: Beta, s: f64, xi: Complex64, m: Option<usize>) -> Result<GenFnSample> {
    if s < 0.0 || !s.is_finite() {
        return invalid(format!("interval length {s} must be non-negative"));
    }
    if s == 0.0 {
        return Ok(trivial(s, xi));
    }
    let (value, err) = match beta {
        Beta::Two => {
            let direct = fredholm_det(&KernelSpec::new(KernelKind::SineBulk, s)?, xi, m)?;
            let half_m = m.map(|m| m.div_ceil(2) | 1);
            let p = e_orthogonal_limit(Sign::Plus, 0.5 * s, xi, half_m)?;
            let q = e_orthogonal_limit(Sign::Minus, 0.5 * s, xi, half_m)?;
            let fact = p.value * q.value;
            let err = direct.err_estimate.max((direct.value - fact).norm());
            (fact, err)
        }
        Beta::One => {
            let den = 2.0 - xi;
            if den.norm() < 1e-14 {
                return Err(Error::Pole);
            }
            let eta = xi * (2.0 - xi);
            let p = e_orthogonal_limit(Sign::Plus, 0.5 * s, eta, m)?;
            let q = e_orthogonal_limit(Sign::Minus, 0.5 * s, eta, m)?;
            let wa = (1.0 - xi) / den;
            let wb = 1.0 / den;
            (
                wa * p.value + wb * q.value,
                wa.norm() * p.err_estimate + wb.norm() * q.err_estimate,
            )
        }
        Beta::Four => {
            let p = e_orthogonal_limit(Sign::Plus, s, xi, m)?;
            let q = e_orthogonal_limit(Sign::Minus, s, xi, m)?;
            (
                0.5 * (p.value + q.value),
                0.5 * (p.err_estimate + q.err_estimate),
            )
        }
    };
    Ok(GenFnSample {
        interval_length: s,
        xi,
        value,
        route: Route::Fredholm,
        err_estimate: err,
    })
}

/// `E^{O±(2N+1)}((0, φ); ξ)` from the finite-`N` kernel.
pub fn finite_orthogonal_fredholm(
    sign: Sign,
    n: usize,
    phi: f64,
    xi: Complex64,
    m: Option<usize>,
) -> Result<GenFnSample> {
    if phi == 0.0 {
        return Ok(trivial(phi, xi));
    }
    let kernel = KernelSpec::new(KernelKind::FiniteOrthogonal { sign, n }, phi)?;
    let d = fredholm_det(&kernel, xi, m)?;
    Ok(GenFnSample {
        interval_length: phi,
        xi,
        value: d.value,
        route: Route::Fredholm,
        err_estimate: d.err_estimate,
    })
}

/// `E_{N,2}((0, φ); ξ)` from the finite-`N` CUE kernel.
pub fn finite_cue_fredholm(
    n: usize,
    phi: f64,
    xi: Complex64,
    m: Option<usize>,
) -> Result<GenFnSample> {
    if phi == 0.0 {
        return Ok(trivial(phi, xi));
    }
    let kernel = KernelSpec::new(KernelKind::FiniteCue { n }, phi)?;
    let d = fredholm_det(&kernel, xi, m)?;
    Ok(GenFnSample {
        interval_length: phi,
        xi,
        value: d.value,
        route: Route::Fredholm,
        err_estimate: d.err_estimate,
    })
}

/// `E_{∞,β}` on many interval lengths in parallel.
pub fn e_inf_beta_many(beta: Beta, lengths: &[f64], xi: Complex64) -> Result<Vec<Complex64>> {
    lengths
        .par_iter()
        .map(|&s| e_inf_beta_value(beta, s, xi))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitedet::{cue_gen_fn, orthogonal_gen_fn, EnsembleLabel, Precision};
    use crate::xi_of_omega;

    #[test]
    fn eigenvalue_products_match_lu() {
        let xi = xi_of_omega(2.0);
        for beta in Beta::ALL {
            for s in [0.7, 6.0, 31.0] {
                let a = LimitSpectra::new(beta, s).unwrap().value(xi).unwrap();
                let b = e_inf_beta_value(beta, s, xi).unwrap();
                assert!((a - b).norm() < 1e-12, "{beta} {s}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn xi_one_small_interval_expansion() {
        // E_2((0,s);1) = 1 - s + π² s⁴ / 36 + O(s⁶).
        let s = 0.02;
        let d = fredholm_det(
            &KernelSpec::new(KernelKind::SineBulk, s).unwrap(),
            Complex64::new(1.0, 0.0),
            None,
        )
        .unwrap();
        let series = 1.0 - s + PI * PI * s.powi(4) / 36.0;
        assert!((d.value.re - series).abs() < 1e-9);
        assert!(d.err_estimate < 1e-13);
    }

    #[test]
    fn factorisation_of_the_bulk_determinant() {
        for (s, omega) in [(0.7, 1.0), (3.0, 2.5), (12.0, 0.4)] {
            let xi = xi_of_omega(omega);
            let direct = fredholm_value(KernelKind::SineBulk, s, xi).unwrap();
            let fact = e_inf_beta_value(Beta::Two, s, xi).unwrap();
            assert!(
                (direct - fact).norm() < 1e-12,
                "s = {s}: {direct} vs {fact}"
            );
            let e = e_inf_beta(Beta::Two, s, xi, None).unwrap();
            assert_eq!(e.value, fact);
        }
    }

    #[test]
    fn finite_kernels_match_determinants() {
        let xi = xi_of_omega(2.2);
        for (n, phi) in [(3, 0.8), (7, 2.5)] {
            let a = finite_cue_fredholm(n, phi, xi, None).unwrap().value;
            let b = cue_gen_fn(n, phi, xi, Precision::Double).unwrap().value;
            assert!((a - b).norm() < 1e-11, "CUE N={n}: {a} vs {b}");
            for (sign, label) in [
                (Sign::Plus, EnsembleLabel::OPlusOdd(n)),
                (Sign::Minus, EnsembleLabel::OMinusOdd(n)),
            ] {
                let a = finite_orthogonal_fredholm(sign, n, phi, xi, None)
                    .unwrap()
                    .value;
                let b = orthogonal_gen_fn(label, phi, xi, Precision::Double)
                    .unwrap()
                    .value;
                assert!((a - b).norm() < 1e-11, "{label:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn node_cap_is_enforced() {
        let k = KernelSpec::new(KernelKind::SineBulk, 5000.0).unwrap();
        assert!(matches!(
            fredholm_det(&k, Complex64::new(1.0, 0.0), None),
            Err(Error::Resource { .. })
        ));
    }
}
