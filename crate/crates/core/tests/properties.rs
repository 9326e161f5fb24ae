//! Property tests over randomly drawn parameters.

use std::f64::consts::PI;

use circspec_core::finitedet::{
    cue_gen_fn, ensemble_gen_fn, orthogonal_gen_fn, EnsembleLabel, Precision,
};
use circspec_core::fredholm::{e_inf_beta_value, fredholm_det, KernelKind, KernelSpec};
use circspec_core::painleve::SigmaSolver;
use circspec_core::quadrature::{
    gauss_legendre, tail_integral, tail_integral_asymptotic, GridFunction,
};
use circspec_core::recurrence::{
    boundary_polys, gen_fn_from_recurrence, orthogonal_from_unitary, run_recurrence,
};
use circspec_core::spectrum::{assemble_finite_spectrum, sample_finite_gen_fn, FiniteOptions};
use circspec_core::{xi_of_omega, Beta, Route, Sign};
use num_complex::Complex64;
use proptest::prelude::*;

fn beta() -> impl Strategy<Value = Beta> {
    prop_oneof![Just(Beta::One), Just(Beta::Two), Just(Beta::Four)]
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn exact_n3(beta: Beta, w: f64) -> f64 {
    let p2 = PI * PI;
    let p4 = p2 * p2;
    let (a, b, c) = match beta {
        Beta::Two => (
            3.0 * (-81.0 - 72.0 * p2 + 16.0 * p4) / (128.0 * p4),
            3.0 * (-105.0 - 60.0 * p2 + 16.0 * p4) / (160.0 * p4),
            3.0 * (825.0 - 120.0 * p2 + 16.0 * p4) / (640.0 * p4),
        ),
        Beta::One => (
            (-225.0 - 60.0 * p2 + 14.0 * p4) / (24.0 * p4),
            (p2 - 6.0) / (2.0 * p2),
            (225.0 - 48.0 * p2 + 4.0 * p4) / (24.0 * p4),
        ),
        Beta::Four => (
            (-148225.0 - 110880.0 * p2 + 20736.0 * p4) / (55296.0 * p4),
            (-145145.0 - 92400.0 * p2 + 20736.0 * p4) / (69120.0 * p4),
            (1321705.0 - 184800.0 * p2 + 20736.0 * p4) / (276480.0 * p4),
        ),
    };
    a + b * w.cos() + c * (2.0 * w).cos()
}

/// `∫_0^b s^{-e} cos(ω s) ds` after `s = u^{1/(1-e)}`, which removes the
/// endpoint singularity; uniform Gauss panels in `u`.
fn finite_part_substituted(omega: f64, e: f64, b: f64) -> f64 {
    let p = 1.0 / (1.0 - e);
    let u_max = b.powf(1.0 - e);
    let rule = gauss_legendre(12).unwrap();
    let panels = 6000;
    let h = u_max / panels as f64;
    (0..panels)
        .map(|j| {
            rule.integrate(j as f64 * h, (j + 1) as f64 * h, |u| {
                p * (omega * u.powf(p)).cos()
            })
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_legendre_integrates_monomials(m in 1usize..=64, d_frac in 0.0f64..1.0) {
        let d = ((2 * m).min(41) as f64 * d_frac) as i32;
        let rule = gauss_legendre(m).unwrap();
        let got = rule.integrate(0.0, 1.0, |x| x.powi(d));
        prop_assert!((got * (d as f64 + 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grid_integration_is_linear(
        a in -3.0f64..3.0, b in -3.0f64..3.0, n in 4usize..60, w in 0.1f64..5.0,
    ) {
        let f = |x: f64| Complex64::new((w * x).cos(), x * x);
        let g = |x: f64| Complex64::new(x.exp(), -(w * x).sin());
        let gf = GridFunction::sample_uniform(0.0, 2.0, n, f).unwrap();
        let gg = GridFunction::sample_uniform(0.0, 2.0, n, g).unwrap();
        let gs = GridFunction::sample_uniform(0.0, 2.0, n, |x| a * f(x) + b * g(x)).unwrap();
        let lhs = gs.integrate(0.0, 2.0).unwrap();
        let rhs = a * gf.integrate(0.0, 2.0).unwrap() + b * gg.integrate(0.0, 2.0).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-13 * (1.0 + rhs.norm()));
    }

    #[test]
    fn determinant_and_recurrence_agree(n in 1usize..=30, phi in 0.05f64..3.1, omega in 0.05f64..PI) {
        let xi = xi_of_omega(omega);
        let d = cue_gen_fn(n, phi, xi, Precision::Auto).unwrap().value;
        let r = gen_fn_from_recurrence(n, 0.5 * phi, xi).unwrap().value;
        prop_assert!((d - r).norm() < 1e-10, "{d} vs {r}");
    }

    #[test]
    fn orthogonal_groups_from_unitary_data(
        sign in sign(), dim in 2usize..=20, phi in 0.2f64..2.9, re in 0.0f64..1.0, im in -0.5f64..0.5,
    ) {
        let label = EnsembleLabel::orthogonal(sign, dim).unwrap();
        let xi = Complex64::new(re, im);
        let d = orthogonal_gen_fn(label, phi, xi, Precision::Auto).unwrap().value;
        let u = orthogonal_from_unitary(label, phi, xi).unwrap().value;
        prop_assert!((d * d - u * u).norm() < 1e-9, "{d} vs {u}");
    }

    #[test]
    fn generating_function_bounded_on_circle(
        beta in beta(), n in 1usize..=25, phi in 0.0f64..PI, omega in 0.0f64..=PI,
    ) {
        let e = ensemble_gen_fn(beta, n, phi, xi_of_omega(omega)).unwrap().value;
        prop_assert!(e.norm() <= 1.0 + 1e-10, "|E| = {}", e.norm());
    }

    #[test]
    fn generating_function_is_a_probability_polynomial(beta in beta(), n in 1usize..=8, phi in 0.1f64..3.1) {
        // E = Σ_l p_l x^l with x = 1 - ξ; recover p_l by a discrete Fourier
        // transform on |x| = 1 and check they form a distribution.
        let m = 2 * n + 2;
        let samples: Vec<Complex64> = (0..m)
            .map(|k| ensemble_gen_fn(beta, n, phi, xi_of_omega(2.0 * PI * k as f64 / m as f64)).unwrap().value)
            .collect();
        let mut total = 0.0;
        for l in 0..m {
            let p: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(k, e)| e * Complex64::from_polar(1.0, -2.0 * PI * (k * l) as f64 / m as f64))
                .sum::<Complex64>()
                / m as f64;
            prop_assert!(p.im.abs() < 1e-9 && p.re > -1e-9, "p_{l} = {p}");
            if l > n {
                prop_assert!(p.norm() < 1e-9, "degree above N: p_{l} = {p}");
            }
            total += p.re;
        }
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn recurrence_is_lipschitz_along_the_circle(n in 1usize..=30, phi in 0.1f64..3.0, tau in 0.0f64..3.0, h in 1e-6f64..0.1) {
        // With x = e^{iτ}, |dE/dτ| ≤ Σ l p_l ≤ N.
        let a = gen_fn_from_recurrence(n, 0.5 * phi, xi_of_omega(tau)).unwrap().value;
        let b = gen_fn_from_recurrence(n, 0.5 * phi, xi_of_omega(tau + h)).unwrap().value;
        prop_assert!((a - b).norm() <= n as f64 * h * (1.0 + 1e-9));
    }

    #[test]
    fn zero_xi_gives_one(beta in beta(), n in 1usize..=12, phi in 0.0f64..PI) {
        let zero = Complex64::new(0.0, 0.0);
        for route in [Route::Determinant, Route::Recurrence] {
            let e = sample_finite_gen_fn(beta, n, zero, &[phi], route).unwrap()[0];
            prop_assert!((e - 1.0).norm() < 1e-14);
        }
        prop_assert!((e_inf_beta_value(beta, 3.0 * phi, zero).unwrap() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn finite_kernel_matches_toeplitz_hankel(
        sign in sign(), n in 1usize..=12, phi in 0.2f64..3.0, omega in 0.1f64..PI,
    ) {
        let xi = xi_of_omega(omega);
        let label = EnsembleLabel::orthogonal(sign, 2 * n + 1).unwrap();
        let d = orthogonal_gen_fn(label, phi, xi, Precision::Auto).unwrap().value;
        let kernel = KernelSpec::new(KernelKind::FiniteOrthogonal { sign, n }, phi).unwrap();
        let f = fredholm_det(&kernel, xi, None).unwrap().value;
        prop_assert!((d - f).norm() < 1e-9, "{d} vs {f}");
    }

    #[test]
    fn real_parameter_gives_a_probability(
        kind in prop_oneof![Just(KernelKind::SineBulk), Just(KernelKind::SinePlus), Just(KernelKind::SineMinus)],
        s in 0.05f64..10.0, xi in 0.0f64..=1.0,
    ) {
        let d = fredholm_det(&KernelSpec::new(kind, s).unwrap(), Complex64::new(xi, 0.0), None).unwrap().value;
        prop_assert!(d.im.abs() < 1e-12);
        prop_assert!(d.re > 0.0 && d.re <= 1.0 + 1e-12, "{d}");
    }

    #[test]
    fn limit_generating_function_bounded(beta in beta(), s in 0.0f64..20.0, omega in 0.0f64..=PI) {
        let e = e_inf_beta_value(beta, s, xi_of_omega(omega)).unwrap();
        prop_assert!(e.norm() <= 1.0 + 1e-10, "|E| = {}", e.norm());
    }

    #[test]
    fn bulk_determinant_factorises(s in 0.05f64..8.0, omega in 0.0f64..=PI) {
        let xi = xi_of_omega(omega);
        let det = |kind, len| fredholm_det(&KernelSpec::new(kind, len).unwrap(), xi, None).unwrap().value;
        let prod = det(KernelKind::SinePlus, s) * det(KernelKind::SineMinus, s);
        let bulk = det(KernelKind::SineBulk, 2.0 * s);
        prop_assert!((prod - bulk).norm() < 1e-10, "{prod} vs {bulk}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spectrum_positive(beta in beta(), n in 1usize..=12, omega in 0.02f64..=PI) {
        let v = assemble_finite_spectrum(beta, n, omega, &FiniteOptions::default()).unwrap();
        prop_assert!(v.value > 0.0, "S = {}", v.value);
    }

    #[test]
    fn three_by_three_closed_forms(beta in beta(), omega in 0.01f64..=PI) {
        let v = assemble_finite_spectrum(beta, 3, omega, &FiniteOptions::default()).unwrap().value;
        let e = exact_n3(beta, omega);
        prop_assert!(((v - e) / e).abs() < 1e-8, "{v} vs {e}");
    }

    #[test]
    fn routes_give_the_same_spectrum(beta in beta(), half_n in 1usize..=5, omega in 0.1f64..3.0) {
        let n = 2 * half_n;
        let det = assemble_finite_spectrum(beta, n, omega, &FiniteOptions::default()).unwrap().value;
        for route in [Route::Recurrence, Route::Fredholm] {
            let opts = FiniteOptions { route, ..FiniteOptions::default() };
            let v = assemble_finite_spectrum(beta, n, omega, &opts).unwrap().value;
            prop_assert!((v - det).abs() < 1e-9 * det, "{route:?}: {v} vs {det}");
        }
    }

    #[test]
    fn v_minus_positive_at_launch(xi in 0.01f64..=1.0, frac in 0.05f64..1.0) {
        let solver = SigmaSolver::default();
        let probe = solver.piii(Sign::Minus, Complex64::new(xi, 0.0), &[1e-6]).unwrap();
        let t = frac * probe.boundary.t_launch;
        let traj = solver.piii(Sign::Minus, Complex64::new(xi, 0.0), &[t]).unwrap();
        let u = traj.samples[0].u;
        prop_assert!(u.re > 0.0 && u.im.abs() < 1e-12 * u.re.max(1e-300), "v_-({t}) = {u}");
    }

    #[test]
    fn sigma_trajectories_keep_small_residuals(sign in sign(), s in 0.2f64..6.0, omega in 0.2f64..3.0) {
        let traj = SigmaSolver::default().piii(sign, xi_of_omega(omega), &[(PI * s).powi(2)]).unwrap();
        prop_assert!(traj.max_residual < 1e-8, "residual {}", traj.max_residual);
    }
}

#[test]
fn tail_and_finite_part_reproduce_the_half_line_integral() {
    for beta in Beta::ALL {
        for k in 1..=12 {
            let omega = 2.0 * PI * k as f64 / 25.0;
            let e = omega * omega / (PI * PI * beta.value());
            let period = 2.0 * PI / omega;
            let s_star = (100.0 / period).floor() * period;
            let closed = statrs::function::gamma::gamma(1.0 - e)
                * (0.5 * PI * e).sin()
                * omega.powf(e - 1.0);
            let finite = finite_part_substituted(omega, e, s_star);
            let asym = tail_integral_asymptotic(omega, e, s_star).unwrap();
            assert!(
                (finite + asym - closed).abs() < 1e-8 * closed.abs().max(1.0),
                "β={beta} k={k}"
            );
            let tail = tail_integral(omega, e, s_star).unwrap();
            assert!(
                (tail - asym).abs() < 1e-8,
                "β={beta} k={k}: {tail} vs {asym}"
            );
        }
    }
}

/// Taylor coefficients of order 1 and 2 in ξ of `(r_n, Φ_n(1), Φ_n(-1))`,
/// by trapezoidal means over a circle around ξ = 0.
fn taylor_coefficients(n: usize, phi: f64) -> Vec<[[f64; 3]; 2]> {
    let (rho, m) = (0.1, 48);
    let mut acc = vec![[[0.0; 3]; 2]; n + 1];
    for k in 0..m {
        let theta = 2.0 * PI * k as f64 / m as f64;
        let xi = Complex64::from_polar(rho, theta);
        let state = run_recurrence(n, phi, xi).unwrap();
        let polys = boundary_polys(&state).unwrap();
        for (j, coeffs) in acc.iter_mut().enumerate() {
            let vals = [state.r[j], polys.at_plus_one[j], polys.at_minus_one[j]];
            for (l, row) in coeffs.iter_mut().enumerate() {
                let w = Complex64::from_polar(1.0, -((l + 1) as f64) * theta)
                    / (rho.powi(l as i32 + 1) * m as f64);
                for (c, v) in row.iter_mut().zip(vals) {
                    *c += (v * w).re;
                }
            }
        }
    }
    acc
}

#[test]
fn second_order_coefficients_obey_the_cancellation_identities() {
    for phi in [0.7, 1.3, 2.2] {
        let c = taylor_coefficients(9, phi);
        for (j, cj) in c.iter().enumerate().skip(1) {
            assert!((cj[0][0] - (j as f64 * phi).sin() / (j as f64 * PI)).abs() < 1e-10);
        }
        for n in 1..=8 {
            let (r1, r2) = (c[n + 1][0][0], c[n + 1][1][0]);
            let plus: f64 = (1..=n).map(|j| c[j][0][0]).sum();
            let alt: f64 = (1..=n)
                .map(|j| if j % 2 == 0 { c[j][0][0] } else { -c[j][0][0] })
                .sum();
            let alpha = c[n + 1][1][1] - c[n][1][1];
            let beta = c[n + 1][1][2] + c[n][1][2];
            assert!(
                (alpha - r2 - r1 * plus).abs() < 1e-6,
                "φ={phi} n={n}: {alpha} vs {}",
                r2 + r1 * plus
            );
            assert!(
                (beta - r2 - r1 * alt).abs() < 1e-6,
                "φ={phi} n={n}: {beta} vs {}",
                r2 + r1 * alt
            );
        }
    }
}

#[test]
fn launch_segment_log_e_is_the_integral_of_the_series() {
    let rule = gauss_legendre(24).unwrap();
    let solver = SigmaSolver::default();
    for sign in [Sign::Plus, Sign::Minus] {
        for xi in [Complex64::new(0.4, 0.0), xi_of_omega(1.9)] {
            for (kind, traj_at) in [
                (
                    "piii",
                    Box::new(|t: &[f64]| solver.piii(sign, xi, t)) as Box<dyn Fn(&[f64]) -> _>,
                ),
                (
                    "pvi",
                    Box::new(|t: &[f64]| solver.pvi_orthogonal(sign, 4, xi, t)),
                ),
            ] {
                let t_end = traj_at(&[1e-6]).unwrap().boundary.t_launch;
                let x_end = t_end.sqrt();
                let xs: Vec<f64> = rule.nodes.iter().map(|z| x_end * z).collect();
                let mut targets: Vec<f64> = xs.iter().map(|x| x * x).collect();
                targets.push(t_end);
                let traj = traj_at(&targets).unwrap();
                // t = x² turns dt/t into 2 dx/x, and u vanishes like x at the origin.
                let integral: Complex64 = xs
                    .iter()
                    .zip(&rule.weights)
                    .zip(&traj.samples)
                    .map(|((&x, &w), smp)| {
                        let measure = if kind == "piii" {
                            -2.0 / x
                        } else {
                            2.0 / (x * (x * x - 1.0))
                        };
                        x_end * w * measure * smp.u
                    })
                    .sum();
                let log_e = traj.samples.last().unwrap().log_e;
                assert!(
                    (integral - log_e).norm() < 1e-9 * log_e.norm().max(1e-3),
                    "{kind} {sign:?} ξ={xi}: {integral} vs {log_e}"
                );
            }
        }
    }
}
