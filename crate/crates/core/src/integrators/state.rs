use num_complex::Complex64;

use crate::swe::PrognosticState;

/// Vector-space operations the steppers need.
pub trait StateVector: Clone + Send + Sync {
    fn zeros_like(&self) -> Self;
    fn add_assign(&mut self, other: &Self);
    fn axpy(&mut self, a: f64, x: &Self);
    fn axpy_complex(&mut self, a: Complex64, x: &Self);
    fn scale(&mut self, a: f64);
    fn scale_complex(&mut self, a: Complex64);
    /// Project a complex-weighted sum back onto the real subspace;
    /// returns the discarded magnitude.
    fn finish_real(&mut self) -> f64 {
        0.0
    }
    fn is_finite(&self) -> bool;
}

impl StateVector for PrognosticState {
    fn zeros_like(&self) -> Self {
        PrognosticState::zeros_like(self)
    }
    fn add_assign(&mut self, other: &Self) {
        PrognosticState::add_assign(self, other)
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        PrognosticState::axpy(self, a, x)
    }
    fn axpy_complex(&mut self, a: Complex64, x: &Self) {
        PrognosticState::axpy_complex(self, a, x)
    }
    fn scale(&mut self, a: f64) {
        PrognosticState::scale(self, a)
    }
    fn scale_complex(&mut self, a: Complex64) {
        PrognosticState::scale_complex(self, a)
    }
    fn finish_real(&mut self) -> f64 {
        if self.kind() == crate::sphere::ValueKind::RealOrigin {
            let r = self.m0_imag_residue();
            self.discard_m0_imag();
            r
        } else {
            0.0
        }
    }
    fn is_finite(&self) -> bool {
        PrognosticState::is_finite(self)
    }
}

impl StateVector for Complex64 {
    fn zeros_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
    fn axpy_complex(&mut self, a: Complex64, x: &Self) {
        *self += a * x;
    }
    fn scale(&mut self, a: f64) {
        *self *= a;
    }
    fn scale_complex(&mut self, a: Complex64) {
        *self *= a;
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}
