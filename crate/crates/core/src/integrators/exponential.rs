use num_complex::Complex64;

use super::{ShiftedLinear, StateVector};
use crate::error::{Error, Result};
use crate::parallel::{serial_rexi_sum, WeightedInput};
use crate::rexi::{FunctionId, PsiCoefficientSet, RexiCoefficients};

/// `Σ β_n (Δt·L + α_n)⁻¹ U` with the canonical summation tree.
pub fn rexi_step<S: StateVector, L: ShiftedLinear<S>>(
    op: &L,
    u: &S,
    dt: f64,
    coeffs: &RexiCoefficients,
) -> Result<S> {
    let inputs = [WeightedInput {
        weights: coeffs.betas(),
        input: u,
    }];
    let alphas = coeffs.alphas();
    serial_rexi_sum(
        coeffs.len(),
        &mut |n, b: &S| {
            op.solve_shifted(dt, alphas[n], b)
                .map_err(|e| term_error(n, e))
        },
        &inputs,
    )
}

fn term_error(n: usize, e: Error) -> Error {
    match e {
        Error::Solver {
            m,
            alpha_re,
            alpha_im,
            detail,
        } => Error::Solver {
            m,
            alpha_re,
            alpha_im,
            detail: format!("term {n}: {detail}"),
        },
        other => other,
    }
}

/// θ-scheme `(I − aΔtL) U′ = (I + (1−a)ΔtL) U`; a = 1/2 is Crank–Nicolson.
pub fn irk_cn_step<S: StateVector, L: ShiftedLinear<S>>(op: &L, u: &S, dt: f64, a: f64) -> Result<S> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::config(format!("implicit weight must lie in (0, 1], got {a}")));
    }
    // I − aΔtL = −a (ΔtL − I/a)
    let lu = op.apply(u);
    let mut b = u.clone();
    b.axpy((1.0 - a) * dt, &lu);
    b.scale(-1.0 / a);
    let mut x = op.solve_shifted(dt, Complex64::new(-1.0 / a, 0.0), &b)?;
    x.finish_real();
    Ok(x)
}

/// Two-stage ETD2RK with `ψ_k(ΔtL)` evaluated by REXI sums:
/// `A = ψ₀U + Δtψ₁N(U)`, `U′ = A + Δtψ₂(N(A) − N(U))`.
pub fn etdrk2_step<S: StateVector, L: ShiftedLinear<S>>(
    op: &L,
    nonlinear: &mut impl FnMut(&S) -> S,
    u: &S,
    dt: f64,
    set: &PsiCoefficientSet,
) -> Result<S> {
    let alphas = set.alphas();
    let n = alphas.len();
    let mut solve = |i: usize, b: &S| op.solve_shifted(dt, alphas[i], b).map_err(|e| term_error(i, e));
    let nu = nonlinear(u);
    let mut dt_nu = nu.clone();
    dt_nu.scale(dt);
    let a = serial_rexi_sum(
        n,
        &mut solve,
        &[
            WeightedInput {
                weights: set.get(FunctionId::Psi0).betas(),
                input: u,
            },
            WeightedInput {
                weights: set.get(FunctionId::Psi1).betas(),
                input: &dt_nu,
            },
        ],
    )?;
    let mut d = nonlinear(&a);
    d.axpy(-1.0, &nu);
    d.scale(dt);
    let corr = serial_rexi_sum(
        n,
        &mut solve,
        &[WeightedInput {
            weights: set.get(FunctionId::Psi2).betas(),
            input: &d,
        }],
    )?;
    let mut out = a;
    out.add_assign(&corr);
    Ok(out)
}
