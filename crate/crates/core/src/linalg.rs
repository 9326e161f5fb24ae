//! Dense determinants by LU factorisation with partial pivoting.

use num_complex::Complex64;

use crate::ddouble::ComplexDD;

/// Determinant together with a crude relative-error indicator
/// `n · ε · max|u_ii| / min|u_ii|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Determinant {
    pub value: Complex64,
    pub rel_err: f64,
}

/// Determinant of the row-major `n × n` matrix `a` (consumed as workspace).
pub fn det_c64(mut a: Vec<Complex64>, n: usize) -> Determinant {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Determinant {
            value: Complex64::new(1.0, 0.0),
            rel_err: 0.0,
        };
    }
    let mut det = Complex64::new(1.0, 0.0);
    let (mut umax, mut umin) = (0.0f64, f64::INFINITY);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].l1_norm().total_cmp(&a[j * n + k].l1_norm()))
            .unwrap();
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        umax = umax.max(pivot.norm());
        umin = umin.min(pivot.norm());
        if pivot == Complex64::new(0.0, 0.0) {
            return Determinant {
                value: pivot,
                rel_err: f64::INFINITY,
            };
        }
        let inv = pivot.inv();
        let (top, rest) = a.split_at_mut((k + 1) * n);
        let row_k = &top[k * n..];
        for row in rest.chunks_exact_mut(n) {
            let f = row[k] * inv;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in k + 1..n {
                row[c] -= f * row_k[c];
            }
        }
    }
    Determinant {
        value: det,
        rel_err: n as f64 * f64::EPSILON * umax / umin,
    }
}

/// Unit roundoff of double-double arithmetic.
pub const DD_EPSILON: f64 = 4.93e-32;

/// Determinant in double-double arithmetic.
pub fn det_dd(mut a: Vec<ComplexDD>, n: usize) -> Determinant {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Determinant {
            value: Complex64::new(1.0, 0.0),
            rel_err: 0.0,
        };
    }
    let mut det = ComplexDD::ONE;
    let (mut umax, mut umin) = (0.0f64, f64::INFINITY);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].l1().total_cmp(&a[j * n + k].l1()))
            .unwrap();
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det = det * pivot;
        let mag = pivot.to_c64().norm();
        umax = umax.max(mag);
        umin = umin.min(mag);
        if mag == 0.0 {
            return Determinant {
                value: Complex64::new(0.0, 0.0),
                rel_err: f64::INFINITY,
            };
        }
        let inv = ComplexDD::ONE / pivot;
        let (top, rest) = a.split_at_mut((k + 1) * n);
        let row_k = &top[k * n..];
        for row in rest.chunks_exact_mut(n) {
            let f = row[k] * inv;
            for c in k + 1..n {
                row[c] = row[c] - f * row_k[c];
            }
        }
    }
    Determinant {
        value: det.to_c64(),
        rel_err: (n as f64 * DD_EPSILON * umax / umin).max(f64::EPSILON),
    }
}
