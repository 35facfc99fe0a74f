use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sphere::ValueKind;
use crate::swe::{PrognosticState, SweModel, TermGroup};

/// Largest truncation [`dense_operator_matrix`] will materialize.
pub const DENSE_MAX_TRUNC: usize = 15;

/// Stacked coefficient vector of a complex-origin state: for each field
/// (Φ′, ζ, δ) the orders m = −T..=T and degrees l = |m|..=T.
pub fn state_to_vector(u: &PrognosticState) -> Vec<Complex64> {
    let full = u.to_complex_origin();
    let t = u.trunc() as i64;
    let mut v = Vec::with_capacity(3 * ((t + 1) * (t + 1)) as usize);
    for f in full.fields() {
        for m in -t..=t {
            v.extend_from_slice(f.block(m));
        }
    }
    v
}

pub fn vector_to_state(v: &[Complex64], trunc: usize) -> PrognosticState {
    let t = trunc as i64;
    assert_eq!(v.len(), 3 * (trunc + 1) * (trunc + 1));
    let mut u = PrognosticState::zeros_of_kind(trunc, ValueKind::ComplexOrigin);
    let mut pos = 0;
    for f in u.fields_mut() {
        for m in -t..=t {
            let b = f.block_mut(m);
            let n = b.len();
            b.copy_from_slice(&v[pos..pos + n]);
            pos += n;
        }
    }
    u
}

/// `Δt·L` for a linear group as a dense matrix over [`state_to_vector`]
/// coordinates, built column by column from the tendency path.
pub fn dense_operator_matrix(model: &SweModel, group: TermGroup, dt: f64) -> Result<DMatrix<Complex64>> {
    let t = model.cfg().trunc;
    if t > DENSE_MAX_TRUNC {
        return Err(Error::config(format!(
            "dense operator refused for T{t} (limit T{DENSE_MAX_TRUNC})"
        )));
    }
    if !group.is_linear() {
        return Err(Error::config("dense operator needs a linear term group"));
    }
    let n = 3 * (t + 1) * (t + 1);
    let mut mat = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = Complex64::new(1.0, 0.0);
        let u = vector_to_state(&e, t);
        let col = state_to_vector(&model.tendency(group, &u));
        for (i, c) in col.into_iter().enumerate() {
            mat[(i, j)] = c * dt;
        }
        e[j] = Complex64::new(0.0, 0.0);
    }
    Ok(mat)
}

