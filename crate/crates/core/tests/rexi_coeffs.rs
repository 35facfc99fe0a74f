mod common;

use std::f64::consts::E;

use common::rng;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use swe_rexi::rexi::{
    cancellation_diagnostic, circle_contour_coeffs, phi_function, scale_radius_with_dt,
    shifted_contour_from_points, ContourSpec, FunctionId, RexiCoefficients, RexiConfig,
};
use swe_rexi::Error;

/// Measured once against the exact exponential (dense sampling of
/// i·[−25, 25], 20001 points) and frozen: 5.77e-4.
const EXP_TOL_25: f64 = 6.0e-4;
/// Same measurement on i·[−24, 24]: 1.39e-4.
const EXP_TOL_24: f64 = 1.5e-4;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn default_exp() -> RexiCoefficients {
    let contour = shifted_contour_from_points(10.0, 30.0, 128).unwrap();
    circle_contour_coeffs(FunctionId::Psi0, &contour).unwrap()
}

fn max_err_on_segment(co: &RexiCoefficients, half: f64, exact: impl Fn(Complex64) -> Complex64) -> f64 {
    let n = 20001;
    (0..n)
        .map(|i| c(0.0, -half + 2.0 * half * i as f64 / (n - 1) as f64))
        .map(|x| (co.eval_rational(x).unwrap() - exact(x)).norm())
        .fold(0.0, f64::max)
}

#[test]
fn single_pole_unit_circle() {
    let contour = ContourSpec::circle(1.0, c(0.0, 0.0), 1).unwrap();
    let co = circle_contour_coeffs(FunctionId::Psi0, &contour).unwrap();
    assert_eq!(co.alphas(), &[c(-1.0, 0.0)]);
    assert_eq!(co.betas(), &[c(-E, 0.0)]);
    // pole at x = 1
    let eps = 1e-6;
    let v = co.eval_rational(c(1.0 + eps, 0.0)).unwrap();
    assert!((v - c(-E / eps, 0.0)).norm() < 1e-6 * E / eps);
    assert!(matches!(
        co.eval_rational(c(1.0, 0.0)),
        Err(Error::PoleCollision { index: 0 })
    ));
}

#[test]
fn shifted_contour_geometry() {
    let s = shifted_contour_from_points(10.0, 30.0, 128).unwrap();
    assert_eq!(s.radius, 50.0);
    assert_eq!(s.center, c(-40.0, 0.0));
    let s = shifted_contour_from_points(10.0, 10.0, 64).unwrap();
    assert_eq!(s.radius, 10.0);
    assert_eq!(s.center, c(0.0, 0.0));
    for (p0, p1) in [(10.0, 30.0), (3.0, 17.0), (0.5, 40.0)] {
        let s = shifted_contour_from_points(p0, p1, 8).unwrap();
        assert!(((c(p0, 0.0) - s.center).norm() - s.radius).abs() < 1e-13 * s.radius);
        assert!(((c(0.0, p1) - s.center).norm() - s.radius).abs() < 1e-13 * s.radius);
        assert!(((c(0.0, -p1) - s.center).norm() - s.radius).abs() < 1e-13 * s.radius);
    }
    assert!(matches!(shifted_contour_from_points(0.0, 30.0, 8), Err(Error::Contour(_))));
}

#[test]
fn default_exp_approximation_matches_frozen_bound() {
    let co = default_exp();
    let e25 = max_err_on_segment(&co, 25.0, |x| x.exp());
    let e24 = max_err_on_segment(&co, 24.0, |x| x.exp());
    assert!(e25 <= EXP_TOL_25, "{e25}");
    assert!(e24 <= EXP_TOL_24, "{e24}");
    let at0 = co.eval_rational(c(0.0, 0.0)).unwrap();
    assert!((at0 - 1.0).norm() <= EXP_TOL_24);
}

#[test]
fn error_grows_towards_and_beyond_the_contour() {
    let co = default_exp();
    let err = |y: f64| (co.eval_rational(c(0.0, y)).unwrap() - c(0.0, y).exp()).norm();
    let inside: Vec<f64> = [22.0, 25.0, 27.0, 28.5].iter().map(|&y| err(y)).collect();
    assert!(inside.windows(2).all(|w| w[0] <= w[1]), "{inside:?}");
    for y in [35.0, 45.0, 60.0] {
        assert!(err(y) > 0.5, "{y}: {}", err(y));
    }
}

#[test]
fn psi_function_values() {
    assert_eq!(phi_function(1, c(0.0, 0.0)), c(1.0, 0.0));
    assert_eq!(phi_function(2, c(0.0, 0.0)), c(0.5, 0.0));
    assert!((phi_function(1, c(1.0, 0.0)) - c(E - 1.0, 0.0)).norm() < 1e-15);
    assert!((phi_function(2, c(1.0, 0.0)) - c(E - 2.0, 0.0)).norm() < 1e-15);
    assert_eq!(phi_function(0, c(0.3, -0.2)), c(0.3, -0.2).exp());
}

#[test]
fn psi_rational_approximations_on_the_default_contour() {
    let contour = shifted_contour_from_points(10.0, 30.0, 128).unwrap();
    for f in [FunctionId::Psi1, FunctionId::Psi2] {
        let co = circle_contour_coeffs(f, &contour).unwrap();
        let e = max_err_on_segment(&co, 24.0, |x| f.eval(x));
        assert!(e < 1e-5, "{f:?} {e}");
    }
}

#[test]
fn radius_scaling() {
    assert_eq!(scale_radius_with_dt(480.0, 30.0, 480.0, 5.0), 30.0);
    assert_eq!(scale_radius_with_dt(48.0, 30.0, 480.0, 5.0), 5.0);
    assert_eq!(scale_radius_with_dt(960.0, 30.0, 480.0, 5.0), 60.0);
    let c = RexiConfig::scaled_circle().contour(120.0).unwrap();
    assert_eq!(c.radius, 7.5);
    assert_eq!(c.num_poles, 32);
}

#[test]
fn cancellation_growth() {
    let r = cancellation_diagnostic(1.0, 16).unwrap();
    let lb = r.max_abs_beta.ln();
    assert!(lb >= 1.0 - 16f64.ln() - 1.0 && lb <= 2.0, "{lb}");

    let d = cancellation_diagnostic(40.0, 128).unwrap().max_abs_beta.ln()
        - cancellation_diagnostic(20.0, 128).unwrap().max_abs_beta.ln();
    assert!((d - 20.0).abs() <= 2.0, "{d}");

    let co = default_exp();
    assert!(co.max_abs_beta() <= (10.0f64 + 1.0).exp());
}

#[test]
fn conjugate_symmetric_coefficients() {
    for n in [16usize, 64, 128] {
        let contour = shifted_contour_from_points(10.0, 30.0, n).unwrap();
        for f in [FunctionId::Psi0, FunctionId::Psi1, FunctionId::Psi2] {
            let co = circle_contour_coeffs(f, &contour).unwrap();
            let mut pairs: Vec<(Complex64, Complex64)> =
                co.alphas().iter().copied().zip(co.betas().iter().copied()).collect();
            let mut conj: Vec<(Complex64, Complex64)> =
                pairs.iter().map(|(a, b)| (a.conj(), b.conj())).collect();
            let key = |p: &(Complex64, Complex64)| (p.0.re, p.0.im);
            pairs.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
            conj.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
            assert_eq!(pairs, conj);
        }
    }
}

#[test]
fn overflowing_contour_is_a_configuration_error() {
    let contour = ContourSpec::circle(10.0, c(800.0, 0.0), 16).unwrap();
    assert!(matches!(
        circle_contour_coeffs(FunctionId::Psi0, &contour),
        Err(Error::Contour(_))
    ));
}

#[test]
fn csv_roundtrip_is_exact() {
    let contour = shifted_contour_from_points(10.0, 30.0, 32).unwrap();
    let co = circle_contour_coeffs(FunctionId::Psi1, &contour).unwrap();
    let mut buf = Vec::new();
    co.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("# function_id=psi1\n"));
    let back = RexiCoefficients::read_csv(&buf[..]).unwrap();
    assert_eq!(back, co);

    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.csv");
    co.save(&p).unwrap();
    assert_eq!(RexiCoefficients::load(&p).unwrap(), co);
    assert!(RexiCoefficients::read_csv(&b"re_alpha,im_alpha,re_beta,im_beta\n1,2,3,4\n"[..]).is_err());
}

#[test]
fn compensated_sum_agrees_at_moderate_radius() {
    let contour = ContourSpec::circle(10.0, c(0.0, 0.0), 64).unwrap();
    let co = circle_contour_coeffs(FunctionId::Psi0, &contour).unwrap();
    let x = c(0.0, 1.3);
    let a = co.eval_rational(x).unwrap();
    let b = co.eval_rational_compensated(x).unwrap();
    assert!((a - b).norm() < 1e-11);
    assert!((b - x.exp()).norm() < 1e-10);
}

proptest! {
    #[test]
    fn psi_recurrence(r in 1e-3f64..10.0, arg in 0.0f64..std::f64::consts::TAU) {
        let z = Complex64::from_polar(r, arg);
        for k in 0..2usize {
            // ψ₀(0) = ψ₁(0) = 1
            let lhs = phi_function(k + 1, z);
            let rhs = (phi_function(k, z) - 1.0) / z;
            prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0), "{} {}", k, (lhs - rhs).norm());
        }
    }

    #[test]
    fn radius_is_monotone_with_floor(a in 1e-3f64..1e5, b in 1e-3f64..1e5) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let rl = scale_radius_with_dt(lo, 30.0, 480.0, 5.0);
        let rh = scale_radius_with_dt(hi, 30.0, 480.0, 5.0);
        prop_assert!(rl <= rh);
        prop_assert!(rl >= 5.0);
    }
}

#[test]
fn rational_maps_conjugates_to_conjugates() {
    let co = default_exp();
    let mut r = rng(11);
    for _ in 0..200 {
        let x = c(r.gen_range(-20.0..20.0), r.gen_range(-25.0..25.0));
        let a = co.eval_rational(x.conj()).unwrap();
        let b = co.eval_rational(x).unwrap().conj();
        let scale: f64 = co
            .alphas()
            .iter()
            .zip(co.betas())
            .map(|(al, be)| (be / (x + al)).norm())
            .sum();
        assert!((a - b).norm() <= 1e-13 * scale, "{} {}", (a - b).norm(), scale);
    }
}
