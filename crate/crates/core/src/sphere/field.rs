use num_complex::Complex64;

use super::config::{block_offset, coeff_index, num_coeffs};
use crate::error::{Error, Result};

/// Whether the spectral coefficients describe a real or a complex grid field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    /// Real grid field: only m >= 0 is stored, m < 0 follows from
    /// `f_{l,-m} = conj(f_{l,m})`.
    RealOrigin,
    /// Complex grid field: m >= 0 and m < 0 are stored independently.
    ComplexOrigin,
}

/// Triangular-truncated spherical-harmonic coefficients.
///
/// Layout is m-major: for each m, degrees l = m..=T are contiguous. A
/// complex-origin field appends a second block of the same layout holding
/// the m < 0 coefficients indexed by |m| (its m = 0 slots stay zero).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    trunc: usize,
    kind: ValueKind,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(trunc: usize, kind: ValueKind) -> Self {
        let n = match kind {
            ValueKind::RealOrigin => num_coeffs(trunc),
            ValueKind::ComplexOrigin => 2 * num_coeffs(trunc),
        };
        SpectralField {
            trunc,
            kind,
            coeffs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_coeffs(trunc: usize, kind: ValueKind, coeffs: Vec<Complex64>) -> Result<Self> {
        let field = Self::zeros(trunc, kind);
        if coeffs.len() != field.coeffs.len() {
            return Err(Error::data(format!(
                "expected {} coefficients for T{trunc}, got {}",
                field.coeffs.len(),
                coeffs.len()
            )));
        }
        Ok(SpectralField {
            coeffs,
            ..field
        })
    }

    #[inline]
    pub fn trunc(&self) -> usize {
        self.trunc
    }

    #[inline]
    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient of degree l and signed order m.
    ///
    /// For real-origin fields negative m is served by conjugate symmetry.
    pub fn get(&self, l: usize, m: i64) -> Complex64 {
        let am = m.unsigned_abs() as usize;
        if am > l || l > self.trunc {
            return Complex64::new(0.0, 0.0);
        }
        let i = coeff_index(self.trunc, l, am);
        match (self.kind, m < 0) {
            (_, false) => self.coeffs[i],
            (ValueKind::RealOrigin, true) => self.coeffs[i].conj(),
            (ValueKind::ComplexOrigin, true) => self.coeffs[num_coeffs(self.trunc) + i],
        }
    }

    /// Set coefficient (l, m). Negative m on a real-origin field sets the
    /// conjugate of the stored m > 0 partner.
    pub fn set(&mut self, l: usize, m: i64, value: Complex64) {
        let am = m.unsigned_abs() as usize;
        assert!(am <= l && l <= self.trunc, "({l}, {m}) outside T{}", self.trunc);
        let i = coeff_index(self.trunc, l, am);
        match (self.kind, m < 0) {
            (_, false) => self.coeffs[i] = value,
            (ValueKind::RealOrigin, true) => self.coeffs[i] = value.conj(),
            (ValueKind::ComplexOrigin, true) => {
                let n = num_coeffs(self.trunc);
                self.coeffs[n + i] = value
            }
        }
    }

    /// Coefficients of signed order m, degrees |m|..=T.
    pub fn block(&self, m: i64) -> &[Complex64] {
        let am = m.unsigned_abs() as usize;
        let start = self.block_start(m);
        &self.coeffs[start..start + self.trunc + 1 - am]
    }

    pub fn block_mut(&mut self, m: i64) -> &mut [Complex64] {
        let am = m.unsigned_abs() as usize;
        let start = self.block_start(m);
        let len = self.trunc + 1 - am;
        &mut self.coeffs[start..start + len]
    }

    fn block_start(&self, m: i64) -> usize {
        let am = m.unsigned_abs() as usize;
        assert!(am <= self.trunc);
        let off = block_offset(self.trunc, am);
        if m < 0 {
            assert_eq!(
                self.kind,
                ValueKind::ComplexOrigin,
                "negative-m block of a real-origin field is implicit"
            );
            num_coeffs(self.trunc) + off
        } else {
            off
        }
    }

    /// Copy into truncation `trunc`, dropping or zero-padding degrees.
    pub fn resized(&self, trunc: usize) -> Self {
        let mut out = SpectralField::zeros(trunc, self.kind);
        let keep = trunc.min(self.trunc) as i64;
        let orders: Vec<i64> = match self.kind {
            ValueKind::RealOrigin => (0..=keep).collect(),
            ValueKind::ComplexOrigin => (-keep..=keep).collect(),
        };
        for m in orders {
            for l in m.unsigned_abs() as usize..=trunc.min(self.trunc) {
                out.set(l, m, self.get(l, m));
            }
        }
        out
    }

    /// Signed orders present in storage.
    pub fn orders(&self) -> Vec<i64> {
        let t = self.trunc as i64;
        match self.kind {
            ValueKind::RealOrigin => (0..=t).collect(),
            ValueKind::ComplexOrigin => (-t..=t).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc.max(c.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.trunc, other.trunc, "truncation mismatch");
        assert_eq!(self.kind, other.kind, "value-kind mismatch");
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.check_compatible(other);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        self.check_compatible(other);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: Complex64, other: &Self) {
        self.check_compatible(other);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    pub fn scale(&mut self, s: f64) {
        self.coeffs.iter_mut().for_each(|c| *c *= s);
    }

    pub fn scale_complex(&mut self, s: Complex64) {
        self.coeffs.iter_mut().for_each(|c| *c *= s);
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.scale(s);
        out
    }

    /// Multiply each (l, m) coefficient by `g(l)`.
    pub fn map_degree(&mut self, g: impl Fn(usize) -> f64) {
        let t = self.trunc;
        let blocks = self.orders();
        for m in blocks {
            let am = m.unsigned_abs() as usize;
            for (i, c) in self.block_mut(m).iter_mut().enumerate() {
                *c *= g(am + i);
            }
        }
        debug_assert_eq!(t, self.trunc);
    }

    /// Copy into a complex-origin field (filling m < 0 by symmetry).
    pub fn to_complex_origin(&self) -> Self {
        match self.kind {
            ValueKind::ComplexOrigin => self.clone(),
            ValueKind::RealOrigin => {
                let n = num_coeffs(self.trunc);
                let mut out = SpectralField::zeros(self.trunc, ValueKind::ComplexOrigin);
                out.coeffs[..n].copy_from_slice(&self.coeffs);
                for m in 1..=self.trunc {
                    let off = block_offset(self.trunc, m);
                    for i in 0..=(self.trunc - m) {
                        out.coeffs[n + off + i] = self.coeffs[off + i].conj();
                    }
                }
                out
            }
        }
    }

    /// Split a complex-origin field `f = g + i h` into the real-origin
    /// fields `g` and `h`.
    pub fn split_re_im(&self) -> (Self, Self) {
        assert_eq!(self.kind, ValueKind::ComplexOrigin);
        let t = self.trunc;
        let mut re = SpectralField::zeros(t, ValueKind::RealOrigin);
        let mut im = SpectralField::zeros(t, ValueKind::RealOrigin);
        for m in 0..=t as i64 {
            for l in m as usize..=t {
                let pos = self.get(l, m);
                let neg = self.get(l, -m);
                // g_{l,m} = (f_{l,m} + conj(f_{l,-m}))/2, h_{l,m} = (f_{l,m} - conj(f_{l,-m}))/(2i)
                re.set(l, m, 0.5 * (pos + neg.conj()));
                im.set(l, m, (pos - neg.conj()) / Complex64::new(0.0, 2.0));
            }
        }
        (re, im)
    }

    /// Inverse of [`split_re_im`](Self::split_re_im).
    pub fn from_re_im(re: &Self, im: &Self) -> Self {
        let mut out = re.to_complex_origin();
        out.axpy(Complex64::new(0.0, 1.0), &im.to_complex_origin());
        out
    }
}

/// Values on the Gauss–Legendre × equiangular grid, row-major
/// `[latitude][longitude]` with latitudes ordered south to north.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField<T = f64> {
    nlat: usize,
    nlon: usize,
    values: Vec<T>,
}

impl<T: Copy + Default> GridField<T> {
    pub fn zeros(nlat: usize, nlon: usize) -> Self {
        GridField {
            nlat,
            nlon,
            values: vec![T::default(); nlat * nlon],
        }
    }

    pub fn from_values(nlat: usize, nlon: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != nlat * nlon {
            return Err(Error::config(format!(
                "grid has {} values, expected {nlat}x{nlon}",
                values.len()
            )));
        }
        Ok(GridField { nlat, nlon, values })
    }

    /// Sample `f(j, k)` at every grid point.
    pub fn from_fn(nlat: usize, nlon: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut values = Vec::with_capacity(nlat * nlon);
        for j in 0..nlat {
            for k in 0..nlon {
                values.push(f(j, k));
            }
        }
        GridField { nlat, nlon, values }
    }

    #[inline]
    pub fn nlat(&self) -> usize {
        self.nlat
    }

    #[inline]
    pub fn nlon(&self) -> usize {
        self.nlon
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    #[inline]
    pub fn row(&self, j: usize) -> &[T] {
        &self.values[j * self.nlon..(j + 1) * self.nlon]
    }

    #[inline]
    pub fn row_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.values[j * self.nlon..(j + 1) * self.nlon]
    }

    #[inline]
    pub fn at(&self, j: usize, k: usize) -> T {
        self.values[j * self.nlon + k]
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!((self.nlat, self.nlon), (other.nlat, other.nlon));
        GridField {
            nlat: self.nlat,
            nlon: self.nlon,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        GridField {
            nlat: self.nlat,
            nlon: self.nlon,
            values: self.values.iter().map(|&a| f(a)).collect(),
        }
    }
}

impl GridField<f64> {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

impl GridField<Complex64> {
    pub fn re(&self) -> GridField<f64> {
        GridField {
            nlat: self.nlat,
            nlon: self.nlon,
            values: self.values.iter().map(|c| c.re).collect(),
        }
    }

    pub fn im(&self) -> GridField<f64> {
        GridField {
            nlat: self.nlat,
            nlon: self.nlon,
            values: self.values.iter().map(|c| c.im).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}
