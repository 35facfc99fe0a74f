mod common;

use common::{earth_model, max_diff, random_state, rng};
use nalgebra::Matrix2;
use num_complex::Complex64;
use proptest::prelude::*;
use swe_rexi::sphere::{GridField, SphereConfig, SpectralField, ValueKind};
use swe_rexi::swe::{ModelParams, PrognosticState, SweModel, TermGroup};

const PHIBAR: f64 = 1.0e4 * 9.80616;

fn rel(a: &PrognosticState, b: &PrognosticState) -> f64 {
    a.max_diff(b) / b.max_abs().max(1e-300)
}

fn groups() -> [TermGroup; 6] {
    [
        TermGroup::LG,
        TermGroup::LC,
        TermGroup::L,
        TermGroup::N,
        TermGroup::LC_N,
        TermGroup::LN,
    ]
}

#[test]
fn rest_state_is_fixed_point_of_every_group() {
    let model = earth_model(10, PHIBAR);
    let zero = model.zero_state();
    for g in groups() {
        assert_eq!(model.tendency(g, &zero).max_abs(), 0.0, "{g}");
    }
}

#[test]
fn lg_single_divergence_mode() {
    let model = earth_model(10, PHIBAR);
    let mut u = model.zero_state();
    u.div.set(4, 2, Complex64::new(3e-6, -1e-6));
    let t = model.tendency_lg(&u);
    assert_eq!(t.phi.get(4, 2), -PHIBAR * Complex64::new(3e-6, -1e-6));
    assert_eq!(t.vort.max_abs(), 0.0);
    assert_eq!(t.div.max_abs(), 0.0);
    let others = t
        .phi
        .coeffs()
        .iter()
        .filter(|c| c.norm() != 0.0)
        .count();
    assert_eq!(others, 1);
}

#[test]
fn lg_mode_frequencies_match_dense_eigensolve() {
    let model = earth_model(12, PHIBAR);
    let a = model.cfg().radius;
    for (l, m) in [(1usize, 0i64), (5, 3), (12, 12)] {
        // columns: images of unit Φ′ and unit δ on mode (l, m)
        let mut e_phi = model.zero_state();
        e_phi.phi.set(l, m, Complex64::new(1.0, 0.0));
        let mut e_div = model.zero_state();
        e_div.div.set(l, m, Complex64::new(1.0, 0.0));
        let c0 = model.tendency_lg(&e_phi);
        let c1 = model.tendency_lg(&e_div);
        let mat = Matrix2::new(
            c0.phi.get(l, m).re,
            c1.phi.get(l, m).re,
            c0.div.get(l, m).re,
            c1.div.get(l, m).re,
        );
        let eig = mat.complex_eigenvalues();
        let omega = (PHIBAR * (l * (l + 1)) as f64).sqrt() / a;
        let mut ims: Vec<f64> = eig.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        for z in eig.iter() {
            assert!(z.re.abs() < 1e-12 * omega);
        }
        assert!((ims[0] + omega).abs() < 1e-12 * omega);
        assert!((ims[1] - omega).abs() < 1e-12 * omega);
    }
}

#[test]
fn lc_vanishes_without_rotation() {
    let cfg = SphereConfig::earth(10).unwrap().with_omega(0.0).unwrap();
    let model = SweModel::new(ModelParams::new(PHIBAR, cfg).unwrap()).unwrap();
    let u = random_state(&mut rng(1), 10, 1e3, 1e-5);
    assert_eq!(model.tendency_lc(&u).max_abs(), 0.0);
    let n = model.tendency(TermGroup::N, &u);
    let lcn = model.tendency(TermGroup::LC_N, &u);
    assert!(rel(&lcn, &n) < 1e-13, "{}", rel(&lcn, &n));
}

/// Pointwise `(−fδ − v ∂_y f, fζ − u ∂_y f)` on the grid, then analysis.
fn coriolis_oracle(model: &SweModel, u: &PrognosticState) -> PrognosticState {
    let tr = model.transform();
    let om = model.cfg().omega;
    let a = model.cfg().radius;
    let (gu, gv) = tr.uv_from_vortdiv(&u.vort, &u.div).unwrap();
    let z = tr.synthesis(&u.vort).unwrap();
    let d = tr.synthesis(&u.div).unwrap();
    let lat = tr.latitudes();
    let (nlat, nlon) = (gu.nlat(), gu.nlon());
    let f = |j: usize| 2.0 * om * lat[j].sin();
    let fy = |j: usize| 2.0 * om * lat[j].cos() / a;
    let zt = GridField::from_fn(nlat, nlon, |j, k| -f(j) * d.at(j, k) - gv.at(j, k) * fy(j));
    let dt = GridField::from_fn(nlat, nlon, |j, k| f(j) * z.at(j, k) - gu.at(j, k) * fy(j));
    PrognosticState::new(
        SpectralField::zeros(u.trunc(), ValueKind::RealOrigin),
        tr.analysis(&zt).unwrap(),
        tr.analysis(&dt).unwrap(),
    )
}

#[test]
fn lc_matches_pointwise_grid_oracle() {
    let model = earth_model(21, PHIBAR);
    let mut r = rng(2);
    for _ in 0..3 {
        let u = random_state(&mut r, 21, 1e3, 1e-5);
        let got = model.tendency_lc(&u);
        let want = coriolis_oracle(&model, &u);
        assert!(rel(&got, &want) < 1e-10, "{}", rel(&got, &want));
    }
}

/// Advective-form nonlinear terms from grid gradients:
/// `−V·∇Φ′ − Φ′δ`, `−V·∇ζ − ζδ`, `ζ² + (v ∂_x ζ − u ∂_y ζ) − ∇²K`.
fn nonlinear_oracle(model: &SweModel, u: &PrognosticState) -> PrognosticState {
    let tr = model.transform();
    let (gu, gv) = tr.uv_from_vortdiv(&u.vort, &u.div).unwrap();
    let phi = tr.synthesis(&u.phi).unwrap();
    let z = tr.synthesis(&u.vort).unwrap();
    let d = tr.synthesis(&u.div).unwrap();
    let (px, py) = tr.gradient(&u.phi);
    let (zx, zy) = tr.gradient(&u.vort);
    let (nlat, nlon) = (gu.nlat(), gu.nlon());
    let pt = GridField::from_fn(nlat, nlon, |j, k| {
        -(gu.at(j, k) * px.at(j, k) + gv.at(j, k) * py.at(j, k)) - phi.at(j, k) * d.at(j, k)
    });
    let zt = GridField::from_fn(nlat, nlon, |j, k| {
        -(gu.at(j, k) * zx.at(j, k) + gv.at(j, k) * zy.at(j, k)) - z.at(j, k) * d.at(j, k)
    });
    let dt = GridField::from_fn(nlat, nlon, |j, k| {
        z.at(j, k) * z.at(j, k) + gv.at(j, k) * zx.at(j, k) - gu.at(j, k) * zy.at(j, k)
    });
    let ke = GridField::from_fn(nlat, nlon, |j, k| {
        0.5 * (gu.at(j, k).powi(2) + gv.at(j, k).powi(2))
    });
    let lap_ke = swe_rexi::sphere::laplacian(&tr.analysis(&ke).unwrap(), model.cfg());
    let mut div = tr.analysis(&dt).unwrap();
    div.sub_assign(&lap_ke);
    PrognosticState::new(tr.analysis(&pt).unwrap(), tr.analysis(&zt).unwrap(), div)
}

#[test]
fn nonlinear_matches_advective_oracle() {
    let model = earth_model(21, PHIBAR);
    let mut r = rng(3);
    for _ in 0..3 {
        let u = random_state(&mut r, 21, 1e3, 1e-5);
        let got = model.tendency_n(&u);
        let want = nonlinear_oracle(&model, &u);
        for (g, w) in got.fields().iter().zip(want.fields()) {
            let e = max_diff(g, w) / w.max_abs();
            assert!(e < 1e-9, "{e}");
        }
    }
}

#[test]
fn nonlinear_of_constant_geopotential_at_rest_is_zero() {
    let model = earth_model(10, PHIBAR);
    let mut u = model.zero_state();
    u.phi.set(0, 0, Complex64::new(5e3, 0.0));
    assert_eq!(model.tendency_n(&u).max_abs(), 0.0);
}

#[test]
fn group_sums() {
    let model = earth_model(15, PHIBAR);
    let u = random_state(&mut rng(4), 15, 1e3, 1e-5);
    let mut sum = model.tendency_lg(&u);
    sum.add_assign(&model.tendency_lc(&u));
    assert_eq!(model.tendency(TermGroup::L, &u), sum);

    sum.add_assign(&model.tendency_n(&u));
    let ln = model.tendency(TermGroup::LN, &u);
    assert!(rel(&ln, &sum) < 1e-12, "{}", rel(&ln, &sum));
}

#[test]
fn mass_conserving_geopotential_tendencies() {
    let model = earth_model(21, PHIBAR);
    let mut u = random_state(&mut rng(5), 21, 1e3, 1e-5);
    u.div.set(0, 0, Complex64::new(0.0, 0.0));
    let lg = model.tendency_lg(&u);
    assert_eq!(lg.phi.get(0, 0).norm(), 0.0);
    let n = model.tendency_n(&u);
    assert!(n.phi.get(0, 0).norm() < 1e-12 * n.phi.max_abs());
}

#[test]
fn complex_origin_coriolis_is_the_complexified_operator() {
    let model = earth_model(12, PHIBAR);
    let mut r = rng(6);
    let a = random_state(&mut r, 12, 1e3, 1e-5);
    let b = random_state(&mut r, 12, 1e3, 1e-5);
    let mut c = a.to_complex_origin();
    c.axpy_complex(Complex64::new(0.0, 1.0), &b.to_complex_origin());
    let got = model.tendency_lc(&c);
    let mut want = model.tendency_lc(&a).to_complex_origin();
    want.axpy_complex(Complex64::new(0.0, 1.0), &model.tendency_lc(&b).to_complex_origin());
    assert!(rel(&got, &want) < 1e-13);
}

#[test]
fn half_spectrum_application_matches_complex_origin_path() {
    let model = earth_model(12, PHIBAR);
    let mut r = rng(7);
    let a = random_state(&mut r, 12, 1e3, 1e-5);
    let b = random_state(&mut r, 12, 1e3, 1e-5);
    let mut c = a.to_complex_origin();
    c.axpy_complex(Complex64::new(0.0, 1.0), &b.to_complex_origin());
    // half spectrum of c: the m >= 0 block, stored in a real-origin layout
    let t = 12;
    let mut half = model.zero_state();
    for (dst, src) in half.fields_mut().into_iter().zip(c.fields()) {
        for m in 0..=t as i64 {
            for l in m as usize..=t {
                dst.set(l, m, src.get(l, m));
            }
        }
    }
    let got = model.apply_linear_half_spectrum(TermGroup::L, &half);
    let full = model.tendency(TermGroup::L, &c);
    let mut e = 0.0f64;
    for (g, w) in got.fields().iter().zip(full.fields()) {
        for m in 0..=t as i64 {
            for l in m as usize..=t {
                e = e.max((g.get(l, m) - w.get(l, m)).norm());
            }
        }
    }
    assert!(e < 1e-13 * full.max_abs(), "{e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn linear_groups_are_linear(seed in any::<u64>(), sa in -3.0f64..3.0, sb in -3.0f64..3.0) {
        let model = earth_model(10, PHIBAR);
        let mut r = rng(seed);
        let u1 = random_state(&mut r, 10, 1e3, 1e-5);
        let u2 = random_state(&mut r, 10, 1e3, 1e-5);
        let mut comb = u1.clone();
        comb.scale(sa);
        comb.axpy(sb, &u2);
        for g in [TermGroup::LG, TermGroup::LC] {
            let lhs = model.tendency(g, &comb);
            let mut rhs = model.tendency(g, &u1);
            rhs.scale(sa);
            rhs.axpy(sb, &model.tendency(g, &u2));
            let scale = model.tendency(g, &u1).max_abs().max(model.tendency(g, &u2).max_abs());
            prop_assert!(lhs.max_diff(&rhs) <= 1e-12 * scale * (sa.abs() + sb.abs() + 1.0));
        }
    }
}
