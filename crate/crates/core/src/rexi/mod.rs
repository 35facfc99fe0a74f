//! Rational approximations `f(x) ≈ Σ β_n/(x + α_n)` of eᶻ and the ψ-functions
//! from trapezoidal Cauchy integrals on circles.

mod coeffs;
mod contour;
mod phi;

pub use coeffs::{cancellation_diagnostic, circle_contour_coeffs, CancellationReport, RexiCoefficients};
pub use contour::{
    scale_radius_with_dt, shifted_contour_from_points, ContourSpec, RexiConfig, DEFAULT_BASE_DT,
    DEFAULT_BASE_RADIUS, DEFAULT_MIN_RADIUS,
};
pub use phi::{phi_function, FunctionId, TAYLOR_SWITCH};

use crate::error::Result;

/// Coefficients for ψ₀, ψ₁, ψ₂ on one contour.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiCoefficientSet {
    pub psi: [RexiCoefficients; 3],
}

impl PsiCoefficientSet {
    pub fn new(contour: &ContourSpec) -> Result<Self> {
        Ok(PsiCoefficientSet {
            psi: [
                circle_contour_coeffs(FunctionId::Psi0, contour)?,
                circle_contour_coeffs(FunctionId::Psi1, contour)?,
                circle_contour_coeffs(FunctionId::Psi2, contour)?,
            ],
        })
    }

    pub fn get(&self, id: FunctionId) -> &RexiCoefficients {
        &self.psi[id.order()]
    }

    /// All three sets share the poles.
    pub fn alphas(&self) -> &[num_complex::Complex64] {
        self.psi[0].alphas()
    }
}
