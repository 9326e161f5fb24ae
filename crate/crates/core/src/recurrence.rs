//! Discrete Painlevé recurrence for the CUE generating function, the
//! associated monic orthogonal polynomials at `z = ±1`, and the orthogonal
//! group generating functions recovered from them.
//!
//! Angles here are half-angles: the weight is `1 - ξ χ_(-φ, φ)`, so the arc
//! has length `2φ` and `0 < φ < π`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::finitedet::EnsembleLabel;
use crate::{GenFnSample, Route};

/// Below this modulus a recurrence coefficient is treated as zero.
pub const SMALL_DIVISOR: f64 = 1e-13;

/// Coefficients `r_0 = 1, r_1, ..., r_n` of the recurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceState {
    pub phi: f64,
    pub xi: Complex64,
    pub r: Vec<Complex64>,
}

impl RecurrenceState {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }
}

fn check(phi: f64, xi: Complex64) -> Result<()> {
    if !(phi > 0.0 && phi < PI) {
        return invalid(format!("half-angle {phi} outside (0, π)"));
    }
    if !xi.is_finite() {
        return invalid("xi must be finite");
    }
    Ok(())
}

/// `r_0 .. r_n` by forward iteration.
pub fn run_recurrence(n: usize, phi: f64, xi: Complex64) -> Result<RecurrenceState> {
    check(phi, xi)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut r = vec![one];
    if n == 0 {
        return Ok(RecurrenceState { phi, xi, r });
    }
    if xi == zero {
        r.resize(n + 1, zero);
        return Ok(RecurrenceState { phi, xi, r });
    }
    r.push(xi * phi.sin() / (PI - xi * phi));
    let two_cos = 2.0 * phi.cos();
    for k in 1..n {
        let rk = r[k];
        let rkm1 = r[k - 1];
        let rkm2 = if k >= 2 { r[k - 2] } else { zero };
        if rk.norm() < SMALL_DIVISOR {
            return Err(Error::SmallDivisor {
                n: k,
                value: rk.norm(),
            });
        }
        let one_minus = 1.0 - rk * rk;
        if one_minus.norm() < SMALL_DIVISOR {
            return Err(Error::Degenerate { n: k });
        }
        let kf = k as f64;
        let mut bracket = 2.0 * rk * rkm1 + two_cos - one_minus / rk * ((kf - 1.0) * rkm1);
        if k >= 2 {
            bracket += (1.0 - rkm1 * rkm1) / rkm1 * (kf * rk + (kf - 2.0) * rkm2);
        }
        r.push(rk * bracket / (one_minus * (kf + 1.0)));
    }
    Ok(RecurrenceState { phi, xi, r })
}

/// `E_{N,2}((0, 2φ); ξ)` from the recurrence coefficients `r_1 .. r_{N-1}`.
pub fn gen_fn_from_recurrence(n: usize, phi: f64, xi: Complex64) -> Result<GenFnSample> {
    if n == 0 {
        return invalid("N must be positive");
    }
    let state = run_recurrence(n - 1, phi, xi)?;
    let mut log = n as f64 * (1.0 - xi * phi / PI).ln();
    for j in 1..n {
        let f = 1.0 - state.r[j] * state.r[j];
        if f.norm() < SMALL_DIVISOR {
            return Err(Error::Degenerate { n: j });
        }
        log += (n - j) as f64 * f.ln();
    }
    let value = log.exp();
    Ok(GenFnSample {
        interval_length: 2.0 * phi,
        xi,
        value,
        route: Route::Recurrence,
        err_estimate: 1e-15 * (n * n) as f64 * value.norm(),
    })
}

/// `Φ_k(1)` and `Φ_k(-1)` for `k = 0 ..= n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPolys {
    pub at_plus_one: Vec<Complex64>,
    pub at_minus_one: Vec<Complex64>,
}

/// Evaluate the monic orthogonal polynomials of the weight `1 - ξ χ_(-φ,φ)`
/// at `z = ±1` up to degree `state.len() - 1`.
pub fn boundary_polys(state: &RecurrenceState) -> Result<BoundaryPolys> {
    let n = state.r.len();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut plus = vec![one];
    let mut minus = vec![one];
    for k in 0..n.saturating_sub(1) {
        let rk = state.r[k];
        let rk1 = state.r[k + 1];
        if rk.norm() < SMALL_DIVISOR {
            return Err(Error::SmallDivisor {
                n: k,
                value: rk.norm(),
            });
        }
        let inv = 1.0 / rk;
        let (pm1_p, pm1_m) = if k == 0 {
            (zero, zero)
        } else {
            (plus[k - 1], minus[k - 1])
        };
        plus.push(plus[k] + rk1 * inv * plus[k] + rk1 * (rk - inv) * pm1_p);
        minus.push(-minus[k] + rk1 * inv * minus[k] + rk1 * (inv - rk) * pm1_m);
    }
    Ok(BoundaryPolys {
        at_plus_one: plus,
        at_minus_one: minus,
    })
}

/// The square of an orthogonal-group generating function at half-angle `φ`
/// from unitary data: `E_{2N,2}((-φ, φ); ξ)` and `Φ_k(±1)`.
fn orthogonal_squared(label: EnsembleLabel, phi: f64, xi: Complex64) -> Result<Complex64> {
    let m = label.size();
    let (e_n, degree) = match label {
        EnsembleLabel::OPlusEven(0) => return invalid("O^+(0) is not a group"),
        EnsembleLabel::OPlusEven(m) => (2 * m, 2 * m - 1),
        EnsembleLabel::OMinusEven(_) | EnsembleLabel::OPlusOdd(_) | EnsembleLabel::OMinusOdd(_) => {
            (2 * m, 2 * m)
        }
        _ => return invalid(format!("{label:?} is not an orthogonal group")),
    };
    let one = Complex64::new(1.0, 0.0);
    let e = if e_n == 0 {
        one
    } else {
        gen_fn_from_recurrence(e_n, phi, xi)?.value
    };
    let state = run_recurrence(degree, phi, xi)?;
    let polys = boundary_polys(&state)?;
    let p = polys.at_plus_one[degree];
    let q = polys.at_minus_one[degree];
    Ok(match label {
        EnsembleLabel::OPlusEven(_) => e / (-p * q),
        EnsembleLabel::OMinusEven(_) => p * q * e,
        EnsembleLabel::OPlusOdd(_) => p / q * e,
        _ => q / p * e,
    })
}

/// Quadratic (or lower) interpolant through the last three points of `hist`:
/// its value at `t` and the distance from `t` to its nearest complex zero.
fn local_model(hist: &[(f64, Complex64)], t: f64) -> (Complex64, f64) {
    let k = hist.len();
    let (t2, e2) = hist[k - 1];
    let zero = Complex64::new(0.0, 0.0);
    let (d1, dd, t1) = match k {
        1 => (zero, zero, t2),
        2 => {
            let (t1, e1) = hist[0];
            ((e2 - e1) / (t2 - t1), zero, t1)
        }
        _ => {
            let (t0, e0) = hist[k - 3];
            let (t1, e1) = hist[k - 2];
            let d1 = (e2 - e1) / (t2 - t1);
            let d0 = (e1 - e0) / (t1 - t0);
            (d1, (d1 - d0) / (t2 - t0), t1)
        }
    };
    let s = t - t2;
    let value = e2 + d1 * s + dd * s * (t - t1);
    // Model in u = τ - t: a u² + b u + c.
    let a = dd;
    let b = d1 + dd * (2.0 * t - t2 - t1);
    let c = value;
    let reach = if a.norm() > 0.0 {
        let disc = (b * b - 4.0 * a * c).sqrt();
        let q = -0.5
            * (b + if (b.conj() * disc).re >= 0.0 {
                disc
            } else {
                -disc
            });
        let r1 = if q.norm() > 0.0 {
            (c / q).norm()
        } else {
            f64::INFINITY
        };
        let r2 = if a.norm() > 0.0 {
            (q / a).norm()
        } else {
            f64::INFINITY
        };
        r1.min(r2)
    } else if b.norm() > 0.0 {
        (c / b).norm()
    } else {
        f64::INFINITY
    };
    (value, reach)
}

/// Orthogonal-group generating function at angle `φ ∈ (0, π)` from the
/// unitary recurrence. The square root is continued from the value `1` at
/// `ξ = 0`, first along the ray `τ ξ`, then along arcs on either side of it
/// when the ray passes too close to a zero.
pub fn orthogonal_from_unitary(
    label: EnsembleLabel,
    phi: f64,
    xi: Complex64,
) -> Result<GenFnSample> {
    check(phi, xi)?;
    let value = if xi == Complex64::new(0.0, 0.0) {
        Complex64::new(1.0, 0.0)
    } else {
        let mut first_err = None;
        let mut found = None;
        for bow in [0.0, 0.5, -0.5] {
            match continue_root(label, phi, xi, bow) {
                Ok(v) => {
                    found = Some(v);
                    break;
                }
                Err(e) if bow == 0.0 && !matches!(e, Error::Branch(_)) => return Err(e),
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
        match found {
            Some(v) => v,
            None => return Err(first_err.expect("at least one path was tried")),
        }
    };
    Ok(GenFnSample {
        interval_length: phi,
        xi,
        value,
        route: Route::Recurrence,
        err_estimate: if xi == Complex64::new(0.0, 0.0) {
            0.0
        } else {
            1e-13 * value.norm()
        },
    })
}

/// Continuation of the square root along `ξ (τ + i b τ (1 - τ))`. Each step
/// extrapolates E from the last accepted points, takes the square root
/// nearest the prediction, and stays below a quarter of the distance to the
/// nearest zero of the local quadratic model.
fn continue_root(label: EnsembleLabel, phi: f64, xi: Complex64, bow: f64) -> Result<Complex64> {
    const MAX_STEP: f64 = 1.0 / 64.0;
    const MIN_STEP: f64 = 1.0 / (1u64 << 24) as f64;
    let path = |t: f64| xi * Complex64::new(t, bow * t * (1.0 - t));
    let mut hist = vec![(0.0, Complex64::new(1.0, 0.0))];
    let (mut tau, mut h) = (0.0, MAX_STEP);
    while tau < 1.0 {
        let next = (tau + h).min(1.0);
        let sq = orthogonal_squared(label, phi, path(next))?;
        if sq.norm() == 0.0 || !sq.is_finite() {
            return Err(Error::Branch(format!(
                "squared value vanishes at tau = {next}"
            )));
        }
        let (pred, _) = local_model(&hist, next);
        let s = sq.sqrt();
        let cand = if (s - pred).norm() <= (s + pred).norm() {
            s
        } else {
            -s
        };
        if (cand - pred).norm() > 0.25 * cand.norm() {
            h *= 0.5;
            if h < MIN_STEP {
                return Err(Error::Branch(format!(
                    "path passes a zero near tau = {tau}"
                )));
            }
            continue;
        }
        tau = next;
        hist.push((tau, cand));
        let (_, reach) = local_model(&hist, tau);
        h = (2.0 * h).min(0.25 * reach).min(MAX_STEP);
    }
    Ok(hist[hist.len() - 1].1)
}
