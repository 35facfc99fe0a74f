#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swe_rexi::sphere::{SpectralField, SphereConfig, ValueKind};
use swe_rexi::swe::{ModelParams, PrognosticState, SweModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random band-limited real-origin field with O(scale) coefficients.
pub fn random_field(rng: &mut ChaCha8Rng, trunc: usize, scale: f64, zero_mean: bool) -> SpectralField {
    let mut f = SpectralField::zeros(trunc, ValueKind::RealOrigin);
    for m in 0..=trunc {
        for l in m..=trunc {
            let re = rng.gen_range(-1.0..1.0) * scale;
            let im = if m == 0 { 0.0 } else { rng.gen_range(-1.0..1.0) * scale };
            f.set(l, m as i64, Complex64::new(re, im));
        }
    }
    if zero_mean {
        f.set(0, 0, Complex64::new(0.0, 0.0));
    }
    f
}

pub fn max_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn grid_max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Least-squares slope of log(err) against log(dt).
pub fn fitted_order(dts: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// Random real-origin state with magnitudes typical of a mid-latitude
/// flow: Φ′ ~ `phi`, ζ ~ `vort`, δ ~ `vort`/10 (coefficient scale).
pub fn random_state(rng: &mut ChaCha8Rng, trunc: usize, phi: f64, vort: f64) -> PrognosticState {
    PrognosticState::new(
        random_field(rng, trunc, phi, true),
        random_field(rng, trunc, vort, true),
        random_field(rng, trunc, vort * 0.1, true),
    )
}

pub fn earth_model(trunc: usize, phibar: f64) -> SweModel {
    SweModel::new(ModelParams::new(phibar, SphereConfig::earth(trunc).unwrap()).unwrap()).unwrap()
}
