use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::solvers::{FactorCache, ShiftedSolveSpec};
use crate::sphere::ValueKind;
use crate::swe::{PrognosticState, SweModel, TermGroup};

/// A linear operator L with shifted solves `(Δt·L + α)⁻¹`.
pub trait ShiftedLinear<S> {
    fn apply(&self, u: &S) -> S;
    fn solve_shifted(&self, dt: f64, alpha: Complex64, b: &S) -> Result<S>;
}

/// Scalar `L = λ`, for stability-function checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarLinear(pub Complex64);

impl ShiftedLinear<Complex64> for ScalarLinear {
    fn apply(&self, u: &Complex64) -> Complex64 {
        self.0 * u
    }

    fn solve_shifted(&self, dt: f64, alpha: Complex64, b: &Complex64) -> Result<Complex64> {
        let d = dt * self.0 + alpha;
        if d == Complex64::new(0.0, 0.0) {
            return Err(Error::Solver {
                m: 0,
                alpha_re: alpha.re,
                alpha_im: alpha.im,
                detail: "shift cancels the scalar operator".into(),
            });
        }
        Ok(b / d)
    }
}

/// The SWE linear group `lg` or `l` with cached factorizations.
#[derive(Debug, Clone, Copy)]
pub struct SweLinear<'a> {
    pub model: &'a SweModel,
    pub group: TermGroup,
    pub cache: &'a FactorCache,
}

impl ShiftedLinear<PrognosticState> for SweLinear<'_> {
    fn apply(&self, u: &PrognosticState) -> PrognosticState {
        if u.kind() == ValueKind::RealOrigin && u.m0_imag_residue() != 0.0 {
            self.model.apply_linear_half_spectrum(self.group, u)
        } else {
            self.model.tendency(self.group, u)
        }
    }

    fn solve_shifted(&self, dt: f64, alpha: Complex64, b: &PrognosticState) -> Result<PrognosticState> {
        let spec = ShiftedSolveSpec::new(self.group, dt, alpha)?;
        Ok(self.cache.get_or_build(self.model, spec)?.solve(b))
    }
}
