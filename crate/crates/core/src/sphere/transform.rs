use std::borrow::Cow;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::config::SphereConfig;
use super::field::{GridField, SpectralField, ValueKind};
use super::legendre::{gauss_legendre, LegendreTables};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Precomputed transform plan for one [`SphereConfig`].
///
/// Immutable after construction; every method allocates its own scratch, so a
/// plan can be shared across threads behind an `Arc`.
pub struct SphereTransform {
    cfg: SphereConfig,
    mu: Vec<f64>,
    cos_lat: Vec<f64>,
    weights: Vec<f64>,
    tables: LegendreTables,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SphereTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SphereTransform")
            .field("cfg", &self.cfg)
            .finish_non_exhaustive()
    }
}

impl SphereTransform {
    pub fn new(cfg: SphereConfig) -> Result<Self> {
        cfg.validate()?;
        let (mu, weights) = gauss_legendre(cfg.nlat);
        let cos_lat = mu.iter().map(|m| (1.0 - m * m).sqrt()).collect();
        let tables = LegendreTables::new(cfg.trunc, &mu);
        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(cfg.nlon);
        let fft_inv = planner.plan_fft_inverse(cfg.nlon);
        Ok(SphereTransform {
            cfg,
            mu,
            cos_lat,
            weights,
            tables,
            fft_fwd,
            fft_inv,
        })
    }

    #[inline]
    pub fn config(&self) -> &SphereConfig {
        &self.cfg
    }

    /// sin φ at each grid latitude, south to north.
    pub fn sin_lat(&self) -> &[f64] {
        &self.mu
    }

    pub fn cos_lat(&self) -> &[f64] {
        &self.cos_lat
    }

    pub fn latitudes(&self) -> Vec<f64> {
        self.mu.iter().map(|m| m.asin()).collect()
    }

    pub fn longitudes(&self) -> Vec<f64> {
        let n = self.cfg.nlon;
        (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
    }

    /// Gauss weights on [-1, 1]; `Σ_j w_j · 2π/nlon · Σ_k f` is the surface
    /// integral over the unit sphere.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Sample a function of (latitude, longitude) on the grid.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> GridField {
        let lats = self.latitudes();
        let lons = self.longitudes();
        GridField::from_fn(self.cfg.nlat, self.cfg.nlon, |j, k| f(lats[j], lons[k]))
    }

    pub fn zeros_grid(&self) -> GridField {
        GridField::zeros(self.cfg.nlat, self.cfg.nlon)
    }

    fn check_grid<T: Copy + Default>(&self, g: &GridField<T>) -> Result<()> {
        if g.nlat() != self.cfg.nlat || g.nlon() != self.cfg.nlon {
            return Err(Error::config(format!(
                "grid {}x{} does not match plan {}x{}",
                g.nlat(),
                g.nlon(),
                self.cfg.nlat,
                self.cfg.nlon
            )));
        }
        Ok(())
    }

    /// Accept fields up to the plan truncation; lower truncations are
    /// zero-padded.
    fn conform<'a>(&self, s: &'a SpectralField) -> Result<Cow<'a, SpectralField>> {
        if s.trunc() > self.cfg.trunc {
            return Err(Error::config(format!(
                "field truncation T{} exceeds plan truncation T{}",
                s.trunc(),
                self.cfg.trunc
            )));
        }
        if s.trunc() == self.cfg.trunc {
            Ok(Cow::Borrowed(s))
        } else {
            Ok(Cow::Owned(s.resized(self.cfg.trunc)))
        }
    }

    /// Forward FFT of every row, scaled to `∫ f e^{-imλ} dλ`; returns
    /// `[j][k]` spectra of length nlon.
    fn rows_forward<T: Copy + Default>(
        &self,
        g: &GridField<T>,
        to_c: impl Fn(T) -> Complex64,
    ) -> Vec<Complex64> {
        let n = self.cfg.nlon;
        let scale = 2.0 * PI / n as f64;
        let mut buf: Vec<Complex64> = g.values().iter().map(|&v| to_c(v) * scale).collect();
        let mut scratch = vec![ZERO; self.fft_fwd.get_inplace_scratch_len()];
        for row in buf.chunks_mut(n) {
            self.fft_fwd.process_with_scratch(row, &mut scratch);
        }
        buf
    }

    /// Fourier bin for signed order m.
    #[inline]
    fn bin(&self, m: i64) -> usize {
        if m >= 0 {
            m as usize
        } else {
            (self.cfg.nlon as i64 + m) as usize
        }
    }

    /// Spherical-harmonic analysis of a real grid field.
    pub fn analysis(&self, grid: &GridField) -> Result<SpectralField> {
        self.check_grid(grid)?;
        if !grid.is_finite() {
            return Err(Error::data("non-finite value in grid field"));
        }
        Ok(self.analysis_unchecked(grid))
    }

    pub(crate) fn analysis_unchecked(&self, grid: &GridField) -> SpectralField {
        let rows = self.rows_forward(grid, |v| Complex64::new(v, 0.0));
        let mut out = SpectralField::zeros(self.cfg.trunc, ValueKind::RealOrigin);
        self.legendre_analysis(&rows, &mut out, 0..=self.cfg.trunc as i64);
        out
    }

    /// Analysis of a complex grid field into a complex-origin field.
    pub fn analysis_complex(&self, grid: &GridField<Complex64>) -> Result<SpectralField> {
        self.check_grid(grid)?;
        if !grid.is_finite() {
            return Err(Error::data("non-finite value in grid field"));
        }
        let rows = self.rows_forward(grid, |v| v);
        let t = self.cfg.trunc as i64;
        let mut out = SpectralField::zeros(self.cfg.trunc, ValueKind::ComplexOrigin);
        self.legendre_analysis(&rows, &mut out, -t..=t);
        Ok(out)
    }

    fn legendre_analysis(
        &self,
        rows: &[Complex64],
        out: &mut SpectralField,
        orders: impl Iterator<Item = i64>,
    ) {
        let n = self.cfg.nlon;
        for m in orders {
            let am = m.unsigned_abs() as usize;
            let bin = self.bin(m);
            let block = out.block_mut(m);
            for j in 0..self.cfg.nlat {
                let fm = rows[j * n + bin] * self.weights[j];
                for (c, &p) in block.iter_mut().zip(self.tables.p(am, j)) {
                    *c += fm * p;
                }
            }
        }
    }

    /// Evaluate the series on the grid.
    pub fn synthesis(&self, spec: &SpectralField) -> Result<GridField> {
        let spec = self.conform(spec)?;
        match spec.kind() {
            ValueKind::RealOrigin => Ok(self.synthesis_unchecked(&spec)),
            ValueKind::ComplexOrigin => Err(Error::config(
                "complex-origin field requires synthesis_complex",
            )),
        }
    }

    pub(crate) fn synthesis_unchecked(&self, spec: &SpectralField) -> GridField {
        let t = self.cfg.trunc;
        let mut g = vec![ZERO; self.cfg.nlat * (t + 1)];
        for m in 0..=t {
            let block = spec.block(m as i64);
            for j in 0..self.cfg.nlat {
                g[j * (t + 1) + m] = dot_re(block, self.tables.p(m, j));
            }
        }
        self.rows_inverse_real(&g)
    }

    /// Synthesis of a complex-origin field to a complex grid.
    pub fn synthesis_complex(&self, spec: &SpectralField) -> Result<GridField<Complex64>> {
        let full = self.conform(spec)?.to_complex_origin();
        let t = self.cfg.trunc as i64;
        let n = self.cfg.nlon;
        let mut values = vec![ZERO; self.cfg.nlat * n];
        for m in -t..=t {
            let am = m.unsigned_abs() as usize;
            let block = full.block(m);
            let bin = self.bin(m);
            for j in 0..self.cfg.nlat {
                values[j * n + bin] = dot_re(block, self.tables.p(am, j));
            }
        }
        let mut scratch = vec![ZERO; self.fft_inv.get_inplace_scratch_len()];
        for row in values.chunks_mut(n) {
            self.fft_inv.process_with_scratch(row, &mut scratch);
        }
        GridField::from_values(self.cfg.nlat, n, values)
    }

    /// Inverse row transforms of half-spectra `g[j][m]`, m = 0..=T, into a
    /// real grid using Hermitian symmetry.
    fn rows_inverse_real(&self, g: &[Complex64]) -> GridField {
        let t = self.cfg.trunc;
        let n = self.cfg.nlon;
        let mut out = GridField::zeros(self.cfg.nlat, n);
        let mut buf = vec![ZERO; n];
        let mut scratch = vec![ZERO; self.fft_inv.get_inplace_scratch_len()];
        for j in 0..self.cfg.nlat {
            buf.iter_mut().for_each(|b| *b = ZERO);
            let gm = &g[j * (t + 1)..(j + 1) * (t + 1)];
            buf[0] = Complex64::new(gm[0].re, 0.0);
            for m in 1..=t {
                buf[m] = gm[m];
                buf[n - m] = gm[m].conj();
            }
            self.fft_inv.process_with_scratch(&mut buf, &mut scratch);
            for (o, b) in out.row_mut(j).iter_mut().zip(&buf) {
                *o = b.re;
            }
        }
        out
    }

    /// Velocity components from stream function ψ and velocity potential χ:
    /// `V = k × ∇ψ + ∇χ`.
    pub fn uv_from_psichi(&self, psi: &SpectralField, chi: &SpectralField) -> (GridField, GridField) {
        let t = self.cfg.trunc;
        let nlat = self.cfg.nlat;
        let inv_a = 1.0 / self.cfg.radius;
        let mut gu = vec![ZERO; nlat * (t + 1)];
        let mut gv = vec![ZERO; nlat * (t + 1)];
        for m in 0..=t {
            let pb = psi.block(m as i64);
            let cb = chi.block(m as i64);
            let im = I * m as f64;
            for j in 0..nlat {
                let p = self.tables.p(m, j);
                let h = self.tables.h(m, j);
                let psi_p = dot_re(pb, p);
                let psi_h = dot_re(pb, h);
                let chi_p = dot_re(cb, p);
                let chi_h = dot_re(cb, h);
                // u cos φ = (-(1-μ²)∂_μ ψ + ∂_λ χ)/a,  v cos φ = (∂_λ ψ + (1-μ²)∂_μ χ)/a
                gu[j * (t + 1) + m] = (-psi_h + im * chi_p) * inv_a;
                gv[j * (t + 1) + m] = (im * psi_p + chi_h) * inv_a;
            }
        }
        let mut u = self.rows_inverse_real(&gu);
        let mut v = self.rows_inverse_real(&gv);
        for j in 0..nlat {
            let c = self.cos_lat[j];
            u.row_mut(j).iter_mut().for_each(|x| *x /= c);
            v.row_mut(j).iter_mut().for_each(|x| *x /= c);
        }
        (u, v)
    }

    /// Grid velocity from spectral vorticity and divergence.
    pub fn uv_from_vortdiv(
        &self,
        zeta: &SpectralField,
        delta: &SpectralField,
    ) -> Result<(GridField, GridField)> {
        let psi = inv_laplacian(&*self.conform(zeta)?, &self.cfg);
        let chi = inv_laplacian(&*self.conform(delta)?, &self.cfg);
        Ok(self.uv_from_psichi(&psi, &chi))
    }

    /// Spectral vorticity `k·∇×V` and divergence `∇·V` of a grid vector field.
    pub fn vortdiv_from_uv(
        &self,
        u: &GridField,
        v: &GridField,
    ) -> Result<(SpectralField, SpectralField)> {
        self.check_grid(u)?;
        self.check_grid(v)?;
        if !u.is_finite() || !v.is_finite() {
            return Err(Error::data("non-finite velocity"));
        }
        Ok(self.vortdiv_unchecked(u, v))
    }

    pub(crate) fn vortdiv_unchecked(&self, u: &GridField, v: &GridField) -> (SpectralField, SpectralField) {
        let t = self.cfg.trunc;
        let n = self.cfg.nlon;
        let ru = self.rows_forward(u, |x| Complex64::new(x, 0.0));
        let rv = self.rows_forward(v, |x| Complex64::new(x, 0.0));
        let inv_a = 1.0 / self.cfg.radius;
        let mut zeta = SpectralField::zeros(t, ValueKind::RealOrigin);
        let mut delta = SpectralField::zeros(t, ValueKind::RealOrigin);
        for m in 0..=t {
            let im = I * m as f64;
            let zb = zeta.block_mut(m as i64);
            for j in 0..self.cfg.nlat {
                let wj = self.weights[j] / self.cos_lat[j] * inv_a;
                let um = ru[j * n + m] * wj;
                let vm = rv[j * n + m] * wj;
                let p = self.tables.p(m, j);
                let h = self.tables.h(m, j);
                for ((z, &pl), &hl) in zb.iter_mut().zip(p).zip(h) {
                    *z += im * vm * pl + um * hl;
                }
            }
            let db = delta.block_mut(m as i64);
            for j in 0..self.cfg.nlat {
                let wj = self.weights[j] / self.cos_lat[j] * inv_a;
                let um = ru[j * n + m] * wj;
                let vm = rv[j * n + m] * wj;
                let p = self.tables.p(m, j);
                let h = self.tables.h(m, j);
                for ((d, &pl), &hl) in db.iter_mut().zip(p).zip(h) {
                    *d += im * um * pl - vm * hl;
                }
            }
        }
        (zeta, delta)
    }

    /// Grid gradient `(∂_λ f/(a cos φ), ∂_φ f/a)` of a spectral scalar.
    pub fn gradient(&self, f: &SpectralField) -> (GridField, GridField) {
        let zero = SpectralField::zeros(self.cfg.trunc, ValueKind::RealOrigin);
        self.uv_from_psichi(&zero, f)
    }
}

#[inline]
fn dot_re(c: &[Complex64], w: &[f64]) -> Complex64 {
    let mut acc = ZERO;
    for (a, &b) in c.iter().zip(w) {
        acc += a * b;
    }
    acc
}

/// `∇²` in spectral space: multiply (l, m) by `-l(l+1)/a²`.
pub fn laplacian(spec: &SpectralField, cfg: &SphereConfig) -> SpectralField {
    let inv_a2 = 1.0 / (cfg.radius * cfg.radius);
    let mut out = spec.clone();
    out.map_degree(|l| -((l * (l + 1)) as f64) * inv_a2);
    out
}

/// Inverse Laplacian; the l = 0 mode is mapped to zero.
pub fn inv_laplacian(spec: &SpectralField, cfg: &SphereConfig) -> SpectralField {
    let a2 = cfg.radius * cfg.radius;
    let mut out = spec.clone();
    out.map_degree(|l| {
        if l == 0 {
            0.0
        } else {
            -a2 / (l * (l + 1)) as f64
        }
    });
    out
}
