use messep_lab::hydro::*;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn smooth() -> CharFlow {
    // f₀ = (1 + 0.3 cos x)/(2π)
    CharFlow::from_moments(0.5, vec![c(0.15, 0.0)]).unwrap()
}

// admissible profiles: 0 <= f₀ <= 1/(2πα), guaranteed by 2 Σ|m_k| < min(1, 1/α - 1)
fn moment_flow() -> impl Strategy<Value = CharFlow> {
    (0.1f64..0.9, prop::collection::vec((-0.1f64..0.1, -0.1f64..0.1), 1..4))
        .prop_filter("admissible", |(a, m)| 2.0 * m.iter().map(|(x, y)| x.hypot(*y)).sum::<f64>() < (1.0 / a - 1.0).min(1.0))
        .prop_map(|(a, m)| CharFlow::from_moments(a, m.into_iter().map(|(x, y)| c(x, y)).collect()).unwrap())
}

#[test]
fn first_two_moments_closed_form() {
    let flow = CharFlow::from_moments(0.3, vec![c(0.15, 0.05), c(0.05, 0.02)]).unwrap();
    let m = flow.moments(2);
    for t in [0.01, 0.05, 0.3] {
        let got = limit_moments(2, t, &flow).unwrap();
        assert!((got[0] - m[0] * (-2.0 * PI * PI * t).exp()).norm() < 1e-15);
        let a = 0.3;
        let second = (-4.0 * PI * PI * t).exp() * (m[1] - 4.0 * PI.powi(3) * a * t / (PI * a).tan() * m[0] * m[0]);
        assert!((got[1] - second).norm() < 1e-14, "t = {t}");
    }
}

#[test]
fn moment_methods_agree() {
    let flows = [
        CharFlow::from_moments(0.5, vec![c(0.15, 0.0), c(0.05, 0.02), c(0.0, -0.03)]).unwrap(),
        CharFlow::from_moments(0.3, vec![c(0.15, 0.05), c(0.05, 0.02)]).unwrap(),
    ];
    for flow in &flows {
        for t in [0.02, 0.05, 0.3] {
            let bell = limit_moments(8, t, flow).unwrap();
            let lag = lagrange_moments(8, t, flow).unwrap();
            let fft = transported_coefficients(t, flow, 8, 0.5, 256).unwrap();
            for n in 1..=8 {
                let part = limit_moment_partitions(n, t, flow).unwrap();
                assert!((part - bell[n - 1]).norm() < 1e-12);
                assert!((lag[n - 1] - bell[n - 1]).norm() < 1e-12);
                assert!((fft[n] - bell[n - 1]).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn equilibrium_is_stationary() {
    let flow = CharFlow::from_moments(0.4, vec![]).unwrap();
    let g = density_reconstruct(0.05, &flow, 64).unwrap();
    assert!(g.f.iter().all(|v| (v - 1.0 / (2.0 * PI)).abs() < 1e-15));
    assert!(limit_moments(4, 0.1, &flow).unwrap().iter().all(|m| m.norm() == 0.0));
    assert_eq!(pde_residual(0.05, &flow, 64, 1e-3).unwrap(), 0.0);
}

#[test]
fn smooth_profile_reconstruction() {
    let flow = smooth();
    let g = density_reconstruct(0.05, &flow, 1024).unwrap();
    assert!((g.mass() - 1.0).abs() < 1e-12);
    assert!(!g.any_saturated());
    assert!(g.f.iter().all(|&v| v > 0.0 && v < 1.0 / PI));
    for n in 1..=8 {
        let expect = limit_moment(n, 0.05, &flow).unwrap();
        assert!((g.moment(n as i64) - expect).norm() < 1e-12, "n = {n}");
    }
    assert!(pde_residual(0.05, &flow, 1024, 1e-5).unwrap() < 1e-7);
}

#[test]
fn hilbert_and_derivative_on_trig_polynomials() {
    let m = 64;
    let x: Vec<f64> = (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect();
    let f: Vec<f64> = x.iter().map(|&v| 0.5 + (3.0 * v).cos() - 2.0 * (5.0 * v).sin()).collect();
    let h = hilbert_transform(&f).unwrap();
    let d = spectral_derivative(&f).unwrap();
    for (j, &v) in x.iter().enumerate() {
        assert!((h[j] - ((3.0 * v).sin() + 2.0 * (5.0 * v).cos())).abs() < 1e-12);
        assert!((d[j] - (-3.0 * (3.0 * v).sin() - 10.0 * (5.0 * v).cos())).abs() < 1e-11);
    }
    assert!(hilbert_transform(&f[..48]).is_err());
}

#[test]
fn hilbert_of_boundary_values_is_imaginary_part() {
    let flow = CharFlow::step(1.0 / 3.0).unwrap();
    let (m, r) = (4096, 0.99);
    let zs: Vec<Complex64> = (0..m).map(|j| Complex64::from_polar(r, 2.0 * PI * j as f64 / m as f64)).collect();
    let f: Vec<f64> = zs.iter().map(|&z| (1.0 + 2.0 * flow.g0(z).re) / (2.0 * PI)).collect();
    let h = hilbert_transform(&f).unwrap();
    let err = zs.iter().zip(&h).map(|(&z, hv)| (hv - flow.g0(z).im / PI).abs()).fold(0.0, f64::max);
    assert!(err < 1e-9, "{err}");
}

#[test]
fn flux_reduces_to_quadratic_for_small_filling() {
    let (f, hf) = (0.2, -0.05);
    let limit = 4.0 * PI.powi(3) * f * hf;
    for a in [1e-2, 1e-3] {
        let scaled = flux(f, hf, a).unwrap() / (a * (PI * a).sin());
        assert!(((scaled - limit) / limit).abs() < 50.0 * a * a, "α = {a}");
    }
    assert!(flux(0.1, 0.1, 1.0).is_err());
    assert!((velocity(c(0.0, 0.0), 0.3).unwrap() - c(2.0 * PI * PI, 0.0)).norm() < 1e-12);
}

#[test]
fn step_critical_times() {
    let half = step_profile(0.5).unwrap();
    assert!((half.t_lower - 1.0 / (2.0 * PI * PI)).abs() < 1e-15);
    assert!((half.t_upper - 1.0 / (2.0 * PI * PI)).abs() < 1e-15);
    let third = step_profile(1.0 / 3.0).unwrap();
    assert!((third.t_lower - 1.0 / (4.0 * PI * PI)).abs() < 1e-15);
    assert!((third.t_upper - 3.0 / (4.0 * PI * PI)).abs() < 1e-15);
    // the plateau critical point reaches 1 at t_*, the void one reaches -1 at t^*
    let lo = step_critical_points(1.0 / 3.0, third.t_lower).unwrap();
    assert!((lo[0] - 1.0).norm() < 1e-7 && (lo[1] - 1.0).norm() < 1e-7);
    let hi = step_critical_points(1.0 / 3.0, third.t_upper).unwrap();
    assert!((hi[2] + 1.0).norm() < 1e-7 && (hi[3] + 1.0).norm() < 1e-7);
    assert!(step_profile(0.0).is_err() && step_profile(1.0).is_err());
}

#[test]
fn step_regime_one_plateau_and_void() {
    let alpha = 1.0 / 3.0;
    let data = step_profile(alpha).unwrap();
    let t = data.t_lower / 2.0;
    let flow = CharFlow::step(alpha).unwrap();
    let g = density_reconstruct(t, &flow, 1024).unwrap();
    let (p1, p2) = step_fronts(alpha, t).unwrap();
    let (p1, p2) = (p1.unwrap(), p2.unwrap());
    assert!(p1 < PI * alpha && p2 > PI * alpha);
    let cap = 1.0 / (2.0 * PI * alpha);
    for j in 0..g.len() {
        let x = g.x(j);
        let x = if x > PI { x - 2.0 * PI } else { x };
        if x.abs() < p1 - 0.01 {
            assert!((g.f[j] - cap).abs() < 1e-3);
            assert!(g.saturated_high[j]);
        }
        if x.abs() > p2 + 0.01 {
            assert!(g.f[j].abs() < 1e-3);
            assert!(g.saturated_low[j]);
        }
    }
    assert!(g.f.iter().all(|&v| v > -1e-9 && v < cap + 1e-9));
}

#[test]
fn step_fronts_expire() {
    let alpha = 1.0 / 3.0;
    let d = step_profile(alpha).unwrap();
    let mid = 0.5 * (d.t_lower + d.t_upper);
    let (a, b) = step_fronts(alpha, mid).unwrap();
    assert!(a.is_none() && b.is_some());
    let (a, b) = step_fronts(alpha, 2.0 * d.t_upper).unwrap();
    assert!(a.is_none() && b.is_none());
    assert!(step_fronts(0.7, 0.01).is_err());
    let r = step_report(0.7, 0.01).unwrap();
    assert_eq!(r.critical_points.len(), 4);
}

#[test]
fn quartic_roots_are_critical_points() {
    let alpha = 0.3;
    let flow = CharFlow::step(alpha).unwrap();
    for t in [0.005, 0.02, 0.05, 0.2] {
        let (a, b) = step_quartic(alpha, t);
        for w in step_critical_points(alpha, t).unwrap() {
            assert!((w.powi(4) + a * w.powi(3) + b * w * w + a * w + 1.0).norm() < 1e-10);
            assert!((1.0 + t * w * flow.a0_prime(w)).norm() < 1e-10);
        }
    }
}

#[test]
fn taylor_coefficients_of_the_inverse() {
    let flow = CharFlow::from_moments(0.5, vec![c(0.15, 0.0), c(0.05, 0.02)]).unwrap();
    let t = 0.05;
    let a = coefficient_a_n(t, &flow, 200, ContourOptions::default()).unwrap();
    assert!((a[0] - (-t * flow.a0(c(0.0, 0.0))).exp()).norm() < 1e-14);
    for x in [0.3, 2.0, 4.0] {
        let z = Complex64::from_polar(0.5, x);
        let s: Complex64 = a.iter().enumerate().map(|(k, v)| v * z.powi(k as i32 + 1)).sum();
        assert!((s - flow_invert(t, z, &flow).unwrap().w).norm() < 1e-12);
    }
    assert!(coefficient_a_n(0.0, &flow, 4, ContourOptions::default()).is_err());
    let few = ContourOptions { radius: None, nodes: Some(8) };
    assert!(coefficient_a_n(t, &flow, 4, few).is_err());
}

#[test]
fn single_mode_data() {
    let s = single_mode_profile(3).unwrap();
    assert!((s.critical_time - 1.0 / (3.0 * PI.powi(3))).abs() < 1e-18);
    let pts = s.critical_points();
    assert_eq!(pts.len(), 6);
    for w in &pts {
        assert!((w.powi(6) - 1.0).norm() < 1e-12);
        // Φ' vanishes at the critical time
        assert!(s.flow.phi_prime(s.critical_time, *w).norm() < 1e-9);
    }
    assert!(s.derivative_probe(0.01, 0.0, &[0.0]).is_err());
}

#[test]
fn invalid_profiles() {
    assert!(CharFlow::from_moments(0.5, vec![c(1.5, 0.0)]).is_err());
    assert!(CharFlow::from_moments(1.2, vec![]).is_err());
    assert!(CharFlow::step(-0.1).is_err());
    assert!(flow_invert(-1.0, c(0.1, 0.0), &smooth()).is_err());
    assert!(density_at(0.0, &smooth(), 0.0).is_err());
    assert!(pde_residual(0.01, &smooth(), 64, 0.02).is_err());
    let step = CharFlow::step(0.5).unwrap();
    assert!(pde_residual(0.01, &step, 64, 1e-3).is_err(), "saturated grids are refused");
}

#[test]
fn density_csv_layout() {
    let g = density_reconstruct(0.05, &smooth(), 8).unwrap();
    let mut buf = Vec::new();
    write_density_csv(&[g.clone(), g], &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,x,f,saturated_low,saturated_high");
    assert_eq!(text.lines().count(), 17);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn first_moment_decays_exponentially(flow in moment_flow(), t in 0.0f64..1.0) {
        let m1 = flow.moments(1)[0];
        prop_assert!((limit_moment(1, t, &flow).unwrap() - m1 * (-2.0 * PI * PI * t).exp()).norm() < 1e-15);
    }

    #[test]
    fn inverse_lies_inside_and_solves(flow in moment_flow(), t in 0.001f64..0.3, r in 0.05f64..0.95, th in 0.0f64..2.0 * PI) {
        let z = Complex64::from_polar(r, th);
        let inv = flow_invert(t, z, &flow).unwrap();
        prop_assert!(inv.w.norm() < z.norm());
        prop_assert!((flow.phi(t, inv.w) - z).norm() < 1e-10);
    }

    #[test]
    fn inverse_respects_nesting(flow in moment_flow(), t in 0.001f64..0.3, th in 0.0f64..2.0 * PI) {
        // |w(t, z)| grows with |z| along rays
        let mut prev = 0.0;
        for k in 1..=8 {
            let w = flow_invert(t, Complex64::from_polar(k as f64 / 9.0, th), &flow).unwrap().w.norm();
            prop_assert!(w > prev);
            prev = w;
        }
    }

    #[test]
    fn semiflow(flow in moment_flow(), s in 0.001f64..0.1, t in 0.001f64..0.1) {
        let n_max = 8;
        let at_s = limit_moments(n_max, s, &flow).unwrap();
        let restarted = CharFlow::from_moments(flow.alpha(), at_s).unwrap();
        let two_step = limit_moments(n_max, t, &restarted).unwrap();
        let direct = limit_moments(n_max, s + t, &flow).unwrap();
        for (a, b) in two_step.iter().zip(&direct) {
            prop_assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn density_has_unit_mass_and_bounds(flow in moment_flow(), t in 0.005f64..0.2) {
        let g = density_reconstruct(t, &flow, 128).unwrap();
        prop_assert!((g.mass() - 1.0).abs() < 1e-10);
        let cap = 1.0 / (2.0 * PI * flow.alpha());
        prop_assert!(g.f.iter().all(|&v| v > -1e-9 && v < cap + 1e-9));
    }

    #[test]
    fn step_mass_is_conserved(alpha in 0.1f64..0.5, t in 0.002f64..0.1) {
        let g = density_reconstruct(t, &CharFlow::step(alpha).unwrap(), 256).unwrap();
        prop_assert!((g.mass() - 1.0).abs() < 2e-3);
    }
}
