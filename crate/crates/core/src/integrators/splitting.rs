use super::{SplitVersion, StateVector};
use crate::error::{Error, Result};

/// Strang composition: ver0 is `L^{Δt/2} ∘ R^{Δt} ∘ L^{Δt/2}`, ver1 is
/// `R^{Δt/2} ∘ L^{Δt} ∘ R^{Δt/2}`. `linear(u, h)` and `remainder(u, h)`
/// advance by h. A non-finite substep result stops with its position.
pub fn strang_split_step<S: StateVector>(
    version: SplitVersion,
    linear: &mut dyn FnMut(&S, f64) -> Result<S>,
    remainder: &mut dyn FnMut(&S, f64) -> Result<S>,
    u: &S,
    dt: f64,
) -> Result<S> {
    let (outer, inner): (&mut dyn FnMut(&S, f64) -> Result<S>, &mut dyn FnMut(&S, f64) -> Result<S>) =
        match version {
            SplitVersion::Ver0 => (linear, remainder),
            SplitVersion::Ver1 => (remainder, linear),
        };
    let a = outer(u, 0.5 * dt)?;
    check_finite(&a, "first-half")?;
    let b = inner(&a, dt)?;
    check_finite(&b, "middle")?;
    let c = outer(&b, 0.5 * dt)?;
    check_finite(&c, "second-half")?;
    Ok(c)
}

pub(crate) fn check_finite<S: StateVector>(u: &S, position: &'static str) -> Result<()> {
    if u.is_finite() {
        Ok(())
    } else {
        Err(Error::Divergence {
            steps: 0,
            time: 0.0,
            position: Some(position),
        })
    }
}
