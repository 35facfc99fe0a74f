//! Gauss–Legendre quadrature and orthonormal associated Legendre tables.
//!
//! Normalization used throughout the crate: `P̄_l^m` satisfies
//! `∫_{-1}^{1} P̄_l^m(μ)² dμ = 1/(2π)`, so `Y_l^m = P̄_l^m(sin φ) e^{imλ}` is
//! orthonormal on the unit sphere. The Condon–Shortley phase is omitted,
//! hence `Y_l^{-m} = conj(Y_l^m)`.

use std::f64::consts::PI;

/// Gauss–Legendre nodes (ascending in μ) and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi initial guess for the i-th largest root.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `ε_l^m = sqrt((l² - m²) / (4l² - 1))`, the coupling coefficient of
/// `μ P̄_l^m = ε_{l+1}^m P̄_{l+1}^m + ε_l^m P̄_{l-1}^m`.
#[inline]
pub fn epsilon(l: usize, m: usize) -> f64 {
    if l < m || l == 0 {
        return 0.0;
    }
    let (l, m) = (l as f64, m as f64);
    ((l * l - m * m) / (4.0 * l * l - 1.0)).sqrt()
}

const RESCALE_ABOVE: f64 = 1e100;

/// Orthonormal `P̄_l^m(μ)` for `m <= l <= lmax` at a single point.
///
/// The sectoral seed `P̄_m^m ∝ cos^m φ` is carried in log form and the
/// upward recurrence in l is rescaled on the fly, so deep underflow of the
/// seed near the poles does not poison the larger values further up in l.
pub fn assoc_legendre_column(lmax: usize, m: usize, mu: f64, out: &mut [f64]) {
    debug_assert!(out.len() >= lmax + 1 - m);
    let cos = (1.0 - mu * mu).max(0.0).sqrt();
    let mut log_seed = -0.5 * (4.0 * PI).ln();
    for k in 1..=m {
        let kf = k as f64;
        log_seed += 0.5 * ((2.0 * kf + 1.0) / (2.0 * kf)).ln();
    }
    if m > 0 {
        if cos == 0.0 {
            out[..=lmax - m].iter_mut().for_each(|v| *v = 0.0);
            return;
        }
        log_seed += m as f64 * cos.ln();
    }

    // value = stored * exp(log_scale)
    let mut log_scale = log_seed;
    let mut prev2 = 0.0;
    let mut prev = 1.0;
    let emit = |stored: f64, log_scale: f64| -> f64 {
        if stored == 0.0 {
            return 0.0;
        }
        let lg = stored.abs().ln() + log_scale;
        if lg < -740.0 {
            0.0
        } else {
            stored * log_scale.exp()
        }
    };
    out[0] = emit(prev, log_scale);
    for l in (m + 1)..=lmax {
        let cur = (mu * prev - epsilon(l - 1, m) * prev2) / epsilon(l, m);
        prev2 = prev;
        prev = cur;
        if prev.abs() > RESCALE_ABOVE {
            prev /= RESCALE_ABOVE;
            prev2 /= RESCALE_ABOVE;
            log_scale += RESCALE_ABOVE.ln();
        }
        out[l - m] = emit(prev, log_scale);
    }
}

/// Per-m tables of `P̄_l^m(μ_j)` and `H_l^m(μ_j) = (1-μ²) dP̄_l^m/dμ` for
/// l in m..=T, stored as `[m][j][l - m]`.
#[derive(Debug, Clone)]
pub struct LegendreTables {
    trunc: usize,
    nlat: usize,
    offsets: Vec<usize>,
    p: Vec<f64>,
    h: Vec<f64>,
}

impl LegendreTables {
    pub fn new(trunc: usize, mu: &[f64]) -> Self {
        let nlat = mu.len();
        let mut offsets = Vec::with_capacity(trunc + 2);
        let mut acc = 0;
        for m in 0..=trunc {
            offsets.push(acc);
            acc += nlat * (trunc + 1 - m);
        }
        offsets.push(acc);
        let mut p = vec![0.0; acc];
        let mut h = vec![0.0; acc];
        let mut col = vec![0.0; trunc + 2];
        for m in 0..=trunc {
            let len = trunc + 1 - m;
            for (j, &x) in mu.iter().enumerate() {
                // one extra degree for the derivative relation
                assoc_legendre_column(trunc + 1, m, x, &mut col);
                let base = offsets[m] + j * len;
                for l in m..=trunc {
                    let i = l - m;
                    p[base + i] = col[i];
                    let lower = if l > m { col[i - 1] } else { 0.0 };
                    let lf = l as f64;
                    h[base + i] =
                        -lf * epsilon(l + 1, m) * col[i + 1] + (lf + 1.0) * epsilon(l, m) * lower;
                }
            }
        }
        LegendreTables {
            trunc,
            nlat,
            offsets,
            p,
            h,
        }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn nlat(&self) -> usize {
        self.nlat
    }

    /// `P̄_l^m(μ_j)` for l = m..=T.
    #[inline]
    pub fn p(&self, m: usize, j: usize) -> &[f64] {
        let len = self.trunc + 1 - m;
        let base = self.offsets[m] + j * len;
        &self.p[base..base + len]
    }

    /// `(1-μ_j²) dP̄_l^m/dμ` for l = m..=T.
    #[inline]
    pub fn h(&self, m: usize, j: usize) -> &[f64] {
        let len = self.trunc + 1 - m;
        let base = self.offsets[m] + j * len;
        &self.h[base..base + len]
    }
}
