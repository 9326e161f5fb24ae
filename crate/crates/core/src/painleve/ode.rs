//! Adaptive Dormand–Prince 5(4) integration of complex first-order systems.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and limits of the integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            max_steps: 2_000_000,
        }
    }
}

pub type State<const D: usize> = [Complex64; D];

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate `y' = f(t, y)` from `(t0, y0)` through the monotone sequence
/// `targets`, returning the state at each. `check` is called after every
/// accepted step; it may adjust the state or abort the integration.
pub fn integrate<const D: usize, F, G>(
    mut f: F,
    t0: f64,
    y0: State<D>,
    targets: &[f64],
    opts: &OdeOptions,
    mut check: G,
) -> Result<Vec<State<D>>>
where
    F: FnMut(f64, &State<D>) -> State<D>,
    G: FnMut(f64, &mut State<D>) -> Result<()>,
{
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(targets.len());
    let Some(&last) = targets.last() else {
        return Ok(out);
    };
    let dir = if last >= t0 { 1.0 } else { -1.0 };
    if targets.windows(2).any(|w| (w[1] - w[0]) * dir < 0.0) || (targets[0] - t0) * dir < 0.0 {
        return Err(Error::InvalidArgument(
            "integration targets are not monotone".into(),
        ));
    }
    let mut t = t0;
    let mut y = y0;
    let mut k0 = f(t, &y);
    let span = (last - t0).abs();
    let mut h = (1e-3 * span).max(1e-8 * t.abs().max(1.0)) * dir;
    let mut steps = 0usize;
    for &target in targets {
        while (target - t) * dir > 0.0 {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::Instability { last_t: t });
            }
            let remaining = target - t;
            let clipped = if (h - remaining) * dir > 0.0 {
                remaining
            } else {
                h
            };
            let mut k = [[zero; D]; 7];
            k[0] = k0;
            for s in 1..7 {
                let mut ys = y;
                for (i, v) in ys.iter_mut().enumerate() {
                    for (j, kj) in k.iter().enumerate().take(s) {
                        if A[s][j] != 0.0 {
                            *v += kj[i] * (clipped * A[s][j]);
                        }
                    }
                }
                k[s] = f(t + C[s] * clipped, &ys);
            }
            let mut y_new = y;
            for (i, v) in y_new.iter_mut().enumerate() {
                for (j, kj) in k.iter().enumerate().take(6) {
                    *v += kj[i] * (clipped * A[6][j]);
                }
            }
            let k_last = f(t + clipped, &y_new);
            k[6] = k_last;
            let mut err = 0.0f64;
            for i in 0..D {
                let mut e = zero;
                for (j, kj) in k.iter().enumerate() {
                    e += kj[i] * (clipped * E[j]);
                }
                let sc = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
                err = err.max(e.norm() / sc);
            }
            if !err.is_finite() {
                h = 0.25 * clipped;
            } else if err <= 1.0 {
                t = if clipped == remaining {
                    target
                } else {
                    t + clipped
                };
                y = y_new;
                check(t, &mut y)?;
                k0 = if y == y_new { k_last } else { f(t, &y) };
                let grow = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                // Keep the trial step when it was only shortened to hit a target.
                h = if clipped == remaining && (h - remaining) * dir > 0.0 {
                    h
                } else {
                    clipped * grow
                };
            } else {
                h = clipped * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
            if h.abs() < 1e-13 * t.abs().max(1e-3) {
                return Err(Error::Singularity { t });
            }
        }
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let f = |_t: f64, y: &State<2>| [y[1], -y[0]];
        let targets = [1.0, 5.0, 30.0];
        let out = integrate(
            f,
            0.0,
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            &targets,
            &OdeOptions::default(),
            |_, _| Ok(()),
        )
        .unwrap();
        for (t, y) in targets.iter().zip(&out) {
            assert!((y[0].re - t.cos()).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn backward_complex_growth() {
        let lambda = Complex64::new(0.3, 2.0);
        let f = |_t: f64, y: &State<1>| [y[0] * lambda];
        let out = integrate(
            f,
            2.0,
            [Complex64::new(1.0, 0.0)],
            &[0.0],
            &OdeOptions::default(),
            |_, _| Ok(()),
        )
        .unwrap();
        assert!((out[0][0] - (-2.0 * lambda).exp()).norm() < 1e-9);
    }

    #[test]
    fn blow_up_is_reported() {
        // y' = y², y(0) = 1 blows up at t = 1.
        let f = |_t: f64, y: &State<1>| [y[0] * y[0]];
        let r = integrate(
            f,
            0.0,
            [Complex64::new(1.0, 0.0)],
            &[2.0],
            &OdeOptions::default(),
            |_, _| Ok(()),
        );
        match r {
            Err(Error::Singularity { t }) => assert!((t - 1.0).abs() < 1e-3, "t = {t}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
