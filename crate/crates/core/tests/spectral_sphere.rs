mod common;

use std::f64::consts::PI;

use common::{grid_max_diff, max_diff, random_field, rng};
use num_complex::Complex64;
use swe_rexi::sphere::{
    inv_laplacian, laplacian, GridField, SphereConfig, SphereTransform, SpectralField, ValueKind,
};

fn unit_sphere(trunc: usize) -> SphereConfig {
    let nlat = SphereConfig::min_dealiased_nlat(trunc);
    SphereConfig::new(trunc, nlat, 2 * nlat, 1.0, 0.0, 1.0).unwrap()
}

#[test]
fn constant_is_the_l0_mode() {
    let tr = SphereTransform::new(unit_sphere(10)).unwrap();
    let g = tr.sample(|_, _| 1.0);
    let s = tr.analysis(&g).unwrap();
    assert!((s.get(0, 0) - Complex64::new((4.0 * PI).sqrt(), 0.0)).norm() < 1e-13);
    let rest = s.coeffs()[1..].iter().fold(0.0f64, |a, c| a.max(c.norm()));
    assert!(rest < 1e-14, "{rest}");
}

#[test]
fn unit_l0_coefficient_synthesizes_to_inverse_sqrt_4pi() {
    let tr = SphereTransform::new(unit_sphere(6)).unwrap();
    let mut s = SpectralField::zeros(6, ValueKind::RealOrigin);
    s.set(0, 0, Complex64::new(1.0, 0.0));
    let g = tr.synthesis(&s).unwrap();
    let expected = 1.0 / (4.0 * PI).sqrt();
    assert!(g.values().iter().all(|v| (v - expected).abs() < 1e-15));
    let zero = tr.synthesis(&SpectralField::zeros(6, ValueKind::RealOrigin)).unwrap();
    assert_eq!(zero.max_abs(), 0.0);
}

#[test]
fn single_basis_function_by_direct_quadrature() {
    let cfg = unit_sphere(8);
    let tr = SphereTransform::new(cfg).unwrap();
    // Y_2^1 = sqrt(15/(8π)) sinφ cosφ e^{iλ}; a real field with f_{2,1} = 1
    // is 2 Re(Y_2^1).
    let norm = (15.0 / (8.0 * PI)).sqrt();
    let g = tr.sample(|lat, lon| 2.0 * norm * lat.sin() * lat.cos() * lon.cos());
    let s = tr.analysis(&g).unwrap();

    // oracle: Σ_j w_j Σ_k 2π/nlon f conj(Y)
    let lats = tr.latitudes();
    let lons = tr.longitudes();
    let mut direct = Complex64::new(0.0, 0.0);
    for (j, lat) in lats.iter().enumerate() {
        for (k, lon) in lons.iter().enumerate() {
            let y = norm * lat.sin() * lat.cos() * Complex64::new(0.0, *lon).exp();
            direct += tr.weights()[j] * 2.0 * PI / cfg.nlon as f64 * g.at(j, k) * y.conj();
        }
    }
    assert!((direct - Complex64::new(1.0, 0.0)).norm() < 1e-13);
    assert!((s.get(2, 1) - direct).norm() < 1e-13);
    for m in 0..=8i64 {
        for l in m as usize..=8 {
            if (l, m) != (2, 1) {
                assert!(s.get(l, m).norm() < 1e-14, "({l},{m}) = {}", s.get(l, m));
            }
        }
    }
}

#[test]
fn roundtrips_at_t42() {
    let cfg = SphereConfig::earth(42).unwrap();
    let tr = SphereTransform::new(cfg).unwrap();
    let mut r = rng(7);
    for _ in 0..5 {
        let s = random_field(&mut r, 42, 1.0, false);
        let g = tr.synthesis(&s).unwrap();
        let back = tr.analysis(&g).unwrap();
        assert!(max_diff(&s, &back) <= 1e-12 * s.max_abs());
        let g2 = tr.synthesis(&back).unwrap();
        assert!(grid_max_diff(g.values(), g2.values()) <= 1e-12 * g.max_abs());
    }
}

#[test]
fn parseval_holds_under_quadrature() {
    let cfg = unit_sphere(21);
    let tr = SphereTransform::new(cfg).unwrap();
    let s = random_field(&mut rng(3), 21, 1.0, false);
    let g = tr.synthesis(&s).unwrap();
    let mut grid_energy = 0.0;
    for j in 0..cfg.nlat {
        let row: f64 = g.row(j).iter().map(|v| v * v).sum();
        grid_energy += tr.weights()[j] * row * 2.0 * PI / cfg.nlon as f64;
    }
    let mut spec_energy = 0.0;
    for m in 0..=21i64 {
        for l in m as usize..=21 {
            let c = s.get(l, m).norm_sqr();
            spec_energy += if m == 0 { c } else { 2.0 * c };
        }
    }
    assert!((grid_energy - spec_energy).abs() <= 1e-11 * spec_energy);
}

#[test]
fn laplacian_eigenvalues() {
    let cfg = unit_sphere(5);
    let mut s = SpectralField::zeros(5, ValueKind::RealOrigin);
    s.set(0, 0, Complex64::new(3.0, 0.0));
    s.set(1, 1, Complex64::new(1.0, 2.0));
    let l = laplacian(&s, &cfg);
    assert_eq!(l.get(0, 0), Complex64::new(0.0, 0.0));
    assert_eq!(l.get(1, 1), Complex64::new(-2.0, -4.0));

    let big = SphereConfig::earth(42).unwrap();
    let f = random_field(&mut rng(11), 42, 1.0, true);
    let back = inv_laplacian(&laplacian(&f, &big), &big);
    assert!(max_diff(&f, &back) <= 1e-13 * f.max_abs());
    let lap = laplacian(&f, &big);
    for m in 0..=42i64 {
        for deg in (m.max(1)) as usize..=42 {
            let want = -((deg * (deg + 1)) as f64) / (big.radius * big.radius) * f.get(deg, m);
            assert!((lap.get(deg, m) - want).norm() <= 1e-13 * want.norm());
        }
    }
}

#[test]
fn complex_origin_matches_two_real_transforms() {
    let cfg = unit_sphere(12);
    let tr = SphereTransform::new(cfg).unwrap();
    let mut r = rng(5);
    let a = random_field(&mut r, 12, 1.0, false);
    let b = random_field(&mut r, 12, 1.0, false);
    let ga = tr.synthesis(&a).unwrap();
    let gb = tr.synthesis(&b).unwrap();
    let gc = ga.zip_map(&gb, |x, y| x + 0.0 * y);
    let complex_grid = GridField::from_values(
        cfg.nlat,
        cfg.nlon,
        gc.values()
            .iter()
            .zip(gb.values())
            .map(|(x, y)| Complex64::new(*x, *y))
            .collect(),
    )
    .unwrap();
    let c = tr.analysis_complex(&complex_grid).unwrap();
    let (re, im) = c.split_re_im();
    assert!(max_diff(&re, &tr.analysis(&ga).unwrap()) <= 1e-13);
    assert!(max_diff(&im, &tr.analysis(&gb).unwrap()) <= 1e-13);

    let back = tr.synthesis_complex(&c).unwrap();
    assert!(grid_max_diff(back.re().values(), ga.values()) <= 1e-13);
    assert!(grid_max_diff(back.im().values(), gb.values()) <= 1e-13);
}

#[test]
fn shape_and_finiteness_errors() {
    let tr = SphereTransform::new(unit_sphere(4)).unwrap();
    let bad = GridField::<f64>::zeros(3, 3);
    assert!(tr.analysis(&bad).is_err());
    let mut g = tr.zeros_grid();
    g.values_mut()[5] = f64::NAN;
    assert!(matches!(tr.analysis(&g), Err(swe_rexi::Error::Data(_))));
    let too_fine = SpectralField::zeros(9, ValueKind::RealOrigin);
    assert!(matches!(tr.synthesis(&too_fine), Err(swe_rexi::Error::Config(_))));
    // lower truncations are padded
    let mut coarse = SpectralField::zeros(2, ValueKind::RealOrigin);
    coarse.set(0, 0, Complex64::new(1.0, 0.0));
    assert!(tr.synthesis(&coarse).is_ok());
}

#[test]
fn solid_body_rotation() {
    let cfg = SphereConfig::earth(21).unwrap();
    let tr = SphereTransform::new(cfg).unwrap();
    let u0 = 20.0;
    let a = cfg.radius;
    let mut zeta = SpectralField::zeros(21, ValueKind::RealOrigin);
    // sin φ = sqrt(4π/3) Y_1^0
    zeta.set(1, 0, Complex64::new(2.0 * u0 / a * (4.0 * PI / 3.0).sqrt(), 0.0));
    let delta = SpectralField::zeros(21, ValueKind::RealOrigin);
    let (u, v) = tr.uv_from_vortdiv(&zeta, &delta).unwrap();
    let exact = tr.sample(|lat, _| u0 * lat.cos());
    assert!(grid_max_diff(u.values(), exact.values()) < 1e-10 * u0);
    assert!(v.max_abs() < 1e-10 * u0);

    let (z2, d2) = tr.vortdiv_from_uv(&exact, &tr.zeros_grid()).unwrap();
    assert!(d2.max_abs() < 1e-22);
    assert!(max_diff(&z2, &zeta) < 1e-12 * zeta.max_abs());

    let zero = tr.zeros_grid();
    let (zz, dd) = tr.vortdiv_from_uv(&zero, &zero).unwrap();
    assert_eq!((zz.max_abs(), dd.max_abs()), (0.0, 0.0));
    let (uz, vz) = tr.uv_from_vortdiv(&delta, &delta).unwrap();
    assert_eq!((uz.max_abs(), vz.max_abs()), (0.0, 0.0));
}

#[test]
fn gradient_wind_is_irrotational() {
    let cfg = SphereConfig::earth(21).unwrap();
    let tr = SphereTransform::new(cfg).unwrap();
    let a = cfg.radius;
    // χ = a·10 sinφ cosφ cosλ, so δ = ∇²χ = -6/a² χ
    let u = tr.sample(|lat, lon| -10.0 * lat.sin() * lon.sin());
    let v = tr.sample(|lat, lon| 10.0 * (2.0 * lat).cos() * lon.cos());
    let (zeta, delta) = tr.vortdiv_from_uv(&u, &v).unwrap();
    let chi = tr.analysis(&tr.sample(|lat, lon| a * 10.0 * lat.sin() * lat.cos() * lon.cos())).unwrap();
    let expected = laplacian(&chi, &cfg);
    assert!(zeta.max_abs() <= 1e-10 * delta.max_abs());
    assert!(max_diff(&delta, &expected) <= 1e-10 * delta.max_abs());
}

#[test]
fn vortdiv_velocity_roundtrip() {
    let cfg = SphereConfig::earth(42).unwrap();
    let tr = SphereTransform::new(cfg).unwrap();
    let mut r = rng(21);
    let zeta = random_field(&mut r, 42, 1e-5, true);
    let delta = random_field(&mut r, 42, 1e-6, true);
    let (u, v) = tr.uv_from_vortdiv(&zeta, &delta).unwrap();
    let (z2, d2) = tr.vortdiv_from_uv(&u, &v).unwrap();
    assert!(max_diff(&zeta, &z2) <= 1e-10 * zeta.max_abs());
    assert!(max_diff(&delta, &d2) <= 1e-10 * delta.max_abs());
}

#[test]
fn transforms_are_shareable_across_threads() {
    let tr = std::sync::Arc::new(SphereTransform::new(unit_sphere(10)).unwrap());
    let s = random_field(&mut rng(1), 10, 1.0, false);
    let serial = tr.synthesis(&s).unwrap();
    let handles: Vec<_> = (0..3)
        .map(|_| {
            let tr = tr.clone();
            let s = s.clone();
            std::thread::spawn(move || tr.synthesis(&s).unwrap())
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), serial);
    }
}
