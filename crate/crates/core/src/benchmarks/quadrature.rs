//! Adaptive Gauss–Kronrod (7/15) quadrature on an interval.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: usize = 50;

fn kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = 0.0;
    let mut g = 0.0;
    for i in 0..8 {
        let vals = if i == 7 {
            let v = f(c);
            (v, 0.0)
        } else {
            (f(c - h * XGK[i]), f(c + h * XGK[i]))
        };
        let s = vals.0 + vals.1;
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, (k - g).abs() * h)
}

/// ∫ₐᵇ f by recursive bisection until the Gauss/Kronrod difference is
/// below `rel_tol` times the first whole-interval estimate, or at roundoff.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let whole = kronrod(&f, a, b);
    let scale = whole.0.abs().max(whole.1);
    let floor = 16.0 * f64::EPSILON * scale;
    fn rec(
        f: &impl Fn(f64) -> f64,
        (a, b): (f64, f64),
        tol: f64,
        floor: f64,
        (val, err): (f64, f64),
        depth: usize,
    ) -> Result<f64> {
        if !val.is_finite() {
            return Err(Error::data(format!("non-finite integrand on [{a}, {b}]")));
        }
        if err <= tol.max(floor) {
            return Ok(val);
        }
        if depth >= MAX_DEPTH {
            return Err(Error::data(format!(
                "quadrature did not reach {tol:e} on [{a}, {b}] (estimate {err:e})"
            )));
        }
        let m = 0.5 * (a + b);
        let left = rec(f, (a, m), 0.5 * tol, floor, kronrod(f, a, m), depth + 1)?;
        let right = rec(f, (m, b), 0.5 * tol, floor, kronrod(f, m, b), depth + 1)?;
        Ok(left + right)
    }
    rec(&f, (a, b), rel_tol * scale, floor, whole, 0)
}
