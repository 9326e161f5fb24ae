//! Double-double arithmetic (about 32 significant digits), real and complex,
//! with the trigonometric functions needed to build matrix entries.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    pub const PI: Self = Self {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };
    const FRAC_PI_2: Self = Self {
        hi: std::f64::consts::FRAC_PI_2,
        lo: 6.123_233_995_736_766e-17,
    };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Exact product of two doubles.
    pub fn product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Self { hi, lo }
    }

    /// Sine and cosine by reduction modulo `π/2` and Taylor series.
    pub fn sin_cos(self) -> (Self, Self) {
        let k = (self.to_f64() / std::f64::consts::FRAC_PI_2).round();
        let r = self - Self::FRAC_PI_2.mul_f64(k);
        let r2 = r * r;
        // sin r and cos r for |r| <= π/4; 1/27! < 1e-28 so 14 terms suffice.
        let mut s = r;
        let mut c = Self::ONE;
        let mut ts = r;
        let mut tc = Self::ONE;
        for n in 1..16 {
            let n = n as f64;
            ts = -(ts * r2) / Self::from_f64((2.0 * n) * (2.0 * n + 1.0));
            tc = -(tc * r2) / Self::from_f64((2.0 * n - 1.0) * (2.0 * n));
            s = s + ts;
            c = c + tc;
        }
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::from_f64(q3)
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexDD {
    pub re: DoubleDouble,
    pub im: DoubleDouble,
}

impl ComplexDD {
    pub const ZERO: Self = Self {
        re: DoubleDouble::ZERO,
        im: DoubleDouble::ZERO,
    };
    pub const ONE: Self = Self {
        re: DoubleDouble::ONE,
        im: DoubleDouble::ZERO,
    };

    pub fn new(re: DoubleDouble, im: DoubleDouble) -> Self {
        Self { re, im }
    }

    pub fn from_c64(z: num_complex::Complex64) -> Self {
        Self::new(z.re.into(), z.im.into())
    }

    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(self, k: DoubleDouble) -> Self {
        Self::new(self.re * k, self.im * k)
    }

    /// `|re| + |im|` in double precision, for pivot selection.
    pub fn l1(self) -> f64 {
        self.re.hi.abs() + self.im.hi.abs()
    }
}

impl Neg for ComplexDD {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Add for ComplexDD {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        Self::new(self.re + b.re, self.im + b.im)
    }
}

impl Sub for ComplexDD {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        Self::new(self.re - b.re, self.im - b.im)
    }
}

impl Mul for ComplexDD {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        Self::new(
            self.re * b.re - self.im * b.im,
            self.re * b.im + self.im * b.re,
        )
    }
}

impl Div for ComplexDD {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let den = b.re * b.re + b.im * b.im;
        let num = self * Self::new(b.re, -b.im);
        Self::new(num.re / den, num.im / den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_beyond_double_precision() {
        let third = DoubleDouble::ONE / DoubleDouble::from_f64(3.0);
        let back = third * DoubleDouble::from_f64(3.0) - DoubleDouble::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        let tiny = DoubleDouble::from_f64(1e-20);
        let sum = (DoubleDouble::ONE + tiny) - DoubleDouble::ONE;
        assert!((sum.to_f64() - 1e-20).abs() < 1e-35);
    }

    #[test]
    fn sin_cos_identities() {
        for x in [0.1, 1.0, 2.5, -3.7, 40.0, 523.6] {
            let (s, c) = DoubleDouble::from_f64(x).sin_cos();
            let one = s * s + c * c - DoubleDouble::ONE;
            assert!(one.to_f64().abs() < 1e-30, "x = {x}");
            assert!((s.to_f64() - x.sin()).abs() < 4e-16 * x.abs().max(1.0));
            assert!((c.to_f64() - x.cos()).abs() < 4e-16 * x.abs().max(1.0));
        }
        let (s, _) = DoubleDouble::PI.sin_cos();
        assert!(s.to_f64().abs() < 1e-31);
    }

    #[test]
    fn complex_division_round_trip() {
        let a = ComplexDD::new(1.5.into(), (-0.25).into());
        let b = ComplexDD::new(0.3.into(), 2.0.into());
        let r = (a / b) * b - a;
        assert!(r.l1() < 1e-30);
    }
}
