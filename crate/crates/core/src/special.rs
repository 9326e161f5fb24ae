//! Real special functions used by the closed-form spectra.

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Gamma function of a real argument.
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

const SHIFT: f64 = 10.0;

/// Digamma function `ψ(x)` for `x > 0`: upward recursion to `x ≥ 10`, then
/// the asymptotic series.
pub fn digamma(x: f64) -> f64 {
    assert!(x > 0.0, "digamma needs a positive argument");
    let mut x = x;
    let mut acc = 0.0;
    while x < SHIFT {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    let series = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0 - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * 691.0 / 32760.0)))));
    acc + x.ln() - 0.5 / x - series
}

/// Trigamma function `ψ'(x)` for `x > 0`.
pub fn trigamma(x: f64) -> f64 {
    assert!(x > 0.0, "trigamma needs a positive argument");
    let mut x = x;
    let mut acc = 0.0;
    while x < SHIFT {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    // Bernoulli numbers B_2 .. B_12.
    let series = 1.0 / 6.0
        - r * (1.0 / 30.0
            - r * (1.0 / 42.0 - r * (1.0 / 30.0 - r * (5.0 / 66.0 - r * 691.0 / 2730.0))));
    acc + 1.0 / x + 0.5 * r + series * r / x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn digamma_known_values() {
        assert_relative_eq!(digamma(1.0), -EULER_GAMMA, max_relative = 1e-14);
        assert_relative_eq!(
            digamma(0.5),
            -EULER_GAMMA - 2.0 * 2f64.ln(),
            max_relative = 1e-14
        );
        for x in [0.3, 1.7, 4.2, 12.5, 250.0] {
            assert_relative_eq!(
                digamma(x),
                statrs::function::gamma::digamma(x),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn trigamma_known_values() {
        assert_relative_eq!(trigamma(1.0), PI * PI / 6.0, max_relative = 1e-15);
        assert_relative_eq!(trigamma(0.5), PI * PI / 2.0, max_relative = 1e-15);
        // ψ'(x) - ψ'(x + 1) = 1/x².
        for x in [0.7, 3.3, 40.0] {
            assert_relative_eq!(
                trigamma(x) - trigamma(x + 1.0),
                1.0 / (x * x),
                max_relative = 1e-12
            );
        }
    }
}
