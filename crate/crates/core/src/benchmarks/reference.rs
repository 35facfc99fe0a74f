use std::path::Path;

use super::BenchmarkSpec;
use crate::error::{Error, Result};
use crate::integrators::{run, Stepper, StepperOptions};
use crate::sphere::io::{read_spectral, write_spectral};
use crate::swe::{PrognosticState, SweModel};

/// Reference step at T42 (s).
pub const DEFAULT_REFERENCE_DT: f64 = 15.0;

/// Content-describing file name for a reference snapshot.
pub fn reference_filename(spec: &BenchmarkSpec, trunc: usize, dt_ref: f64) -> String {
    format!(
        "ref_{}_T{}_dt{}_h{}_depth{}.bin",
        spec.name,
        trunc,
        dt_ref,
        spec.horizon_hours,
        spec.mean_geopotential / spec.gravity
    )
}

/// RK4 run of the full system from `u0` to the horizon; written to `path`
/// when given.
pub fn reference_solution(
    spec: &BenchmarkSpec,
    model: &SweModel,
    u0: &PrognosticState,
    dt_ref: f64,
    path: Option<&Path>,
) -> Result<PrognosticState> {
    let mut stepper = Stepper::from_id("ln_erk4", model.clone(), dt_ref, StepperOptions::default())?;
    let u = run(&mut stepper, u0, spec.horizon_seconds())?;
    if let Some(p) = path {
        save_reference(p, model, &u)?;
    }
    Ok(u)
}

pub fn save_reference(path: &Path, model: &SweModel, u: &PrognosticState) -> Result<()> {
    write_spectral(path, model.cfg(), &[&u.phi, &u.vort, &u.div])
}

pub fn load_reference(path: &Path, model: &SweModel) -> Result<PrognosticState> {
    let mut f = read_spectral(path, model.cfg(), 3)?;
    let div = f.pop().expect("three fields");
    let vort = f.pop().expect("three fields");
    let phi = f.pop().expect("three fields");
    Ok(PrognosticState::new(phi, vort, div))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorField {
    /// Height Φ′/g (m).
    H,
    Vort,
    Div,
}

/// Grid maximum of |field − reference|.
pub fn linf_error(model: &SweModel, state: &PrognosticState, reference: &PrognosticState, field: ErrorField) -> Result<f64> {
    let t = model.cfg().trunc;
    if state.trunc() != t || reference.trunc() != t {
        return Err(Error::config(format!(
            "error metric at T{t} got states at T{} and T{}",
            state.trunc(),
            reference.trunc()
        )));
    }
    let (a, b, scale) = match field {
        ErrorField::H => (&state.phi, &reference.phi, 1.0 / model.cfg().gravity),
        ErrorField::Vort => (&state.vort, &reference.vort, 1.0),
        ErrorField::Div => (&state.div, &reference.div, 1.0),
    };
    let mut d = a.clone();
    d.sub_assign(b);
    Ok(model.transform().synthesis(&d)?.max_abs() * scale)
}
