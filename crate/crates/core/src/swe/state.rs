use num_complex::Complex64;

use crate::sphere::{SpectralField, ValueKind};

/// Prognostic SWE state: geopotential perturbation Φ′ (m²/s²),
/// vorticity ζ (1/s) and divergence δ (1/s) in spectral space.
#[derive(Debug, Clone, PartialEq)]
pub struct PrognosticState {
    pub phi: SpectralField,
    pub vort: SpectralField,
    pub div: SpectralField,
}

impl PrognosticState {
    pub fn zeros(trunc: usize) -> Self {
        Self::zeros_of_kind(trunc, ValueKind::RealOrigin)
    }

    pub fn zeros_of_kind(trunc: usize, kind: ValueKind) -> Self {
        let z = SpectralField::zeros(trunc, kind);
        PrognosticState {
            phi: z.clone(),
            vort: z.clone(),
            div: z,
        }
    }

    pub fn new(phi: SpectralField, vort: SpectralField, div: SpectralField) -> Self {
        assert_eq!(phi.trunc(), vort.trunc());
        assert_eq!(phi.trunc(), div.trunc());
        assert_eq!(phi.kind(), vort.kind());
        assert_eq!(phi.kind(), div.kind());
        PrognosticState { phi, vort, div }
    }

    pub fn trunc(&self) -> usize {
        self.phi.trunc()
    }

    pub fn kind(&self) -> ValueKind {
        self.phi.kind()
    }

    pub fn fields(&self) -> [&SpectralField; 3] {
        [&self.phi, &self.vort, &self.div]
    }

    pub fn fields_mut(&mut self) -> [&mut SpectralField; 3] {
        [&mut self.phi, &mut self.vort, &mut self.div]
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros_of_kind(self.trunc(), self.kind())
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &Self) {
        self.axpy_complex(Complex64::new(s, 0.0), other);
    }

    pub fn axpy_complex(&mut self, s: Complex64, other: &Self) {
        for (a, b) in self.fields_mut().into_iter().zip(other.fields()) {
            a.axpy(s, b);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.fields_mut().into_iter().zip(other.fields()) {
            a.add_assign(b);
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (a, b) in self.fields_mut().into_iter().zip(other.fields()) {
            a.sub_assign(b);
        }
    }

    pub fn scale(&mut self, s: f64) {
        self.fields_mut().into_iter().for_each(|f| f.scale(s));
    }

    pub fn scale_complex(&mut self, s: Complex64) {
        self.fields_mut().into_iter().for_each(|f| f.scale_complex(s));
    }

    /// `self + s * other` as a new state.
    pub fn plus_scaled(&self, s: f64, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(s, other);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.fields().iter().fold(0.0, |a, f| a.max(f.max_abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.fields().iter().all(|f| f.is_finite())
    }

    /// Largest coefficient difference across all three fields.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut d = 0.0f64;
        for (a, b) in self.fields().into_iter().zip(other.fields()) {
            for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                d = d.max((x - y).norm());
            }
        }
        d
    }

    /// Complex conjugate of every stored coefficient.
    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for f in out.fields_mut() {
            f.coeffs_mut().iter_mut().for_each(|c| *c = c.conj());
        }
        out
    }

    pub fn to_complex_origin(&self) -> Self {
        PrognosticState {
            phi: self.phi.to_complex_origin(),
            vort: self.vort.to_complex_origin(),
            div: self.div.to_complex_origin(),
        }
    }

    /// Largest |Im| over the m = 0 coefficients, i.e. the part of a
    /// half-spectrum result that cannot belong to a real field.
    pub fn m0_imag_residue(&self) -> f64 {
        let t = self.trunc();
        let mut r = 0.0f64;
        for f in self.fields() {
            for l in 0..=t {
                r = r.max(f.get(l, 0).im.abs());
            }
        }
        r
    }

    /// Drop the imaginary part of every m = 0 coefficient.
    pub fn discard_m0_imag(&mut self) {
        let t = self.trunc();
        for f in self.fields_mut() {
            for c in f.block_mut(0).iter_mut().take(t + 1) {
                c.im = 0.0;
            }
        }
    }
}
