use std::io::Write;
use std::time::Instant;

use super::{linf_error, ErrorField};
use crate::error::{Error, Result};
use crate::integrators::{run, Stepper, StepperOptions};
use crate::swe::{PrognosticState, SweModel};

/// Rows with a larger height error are flagged as filtered (m).
pub const FILTER_THRESHOLD_M: f64 = 100.0;

pub const SWEEP_CSV_HEADER: &str = "stepper_id,dt_seconds,linf_h_error_m,status,wallclock_s";

/// Model, initial state, reference and horizon shared by every row.
#[derive(Debug, Clone, Copy)]
pub struct SweepCase<'a> {
    pub model: &'a SweModel,
    pub initial: &'a PrognosticState,
    pub reference: &'a PrognosticState,
    pub horizon: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    /// Completed with an error above [`FILTER_THRESHOLD_M`].
    Filtered,
    Diverged,
    /// Setup or solver failure; the message is kept for the report.
    Failed(String),
}

impl RowStatus {
    pub fn as_str(&self) -> &str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Filtered => "filtered",
            RowStatus::Diverged => "diverged",
            RowStatus::Failed(_) => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub stepper_id: String,
    pub dt: f64,
    pub linf_h_error: Option<f64>,
    pub status: RowStatus,
    pub wallclock: f64,
}

impl SweepRow {
    /// Completed the horizon, filtered or not.
    pub fn is_stable(&self) -> bool {
        matches!(self.status, RowStatus::Ok | RowStatus::Filtered)
    }
}

fn run_row(id: &str, dt: f64, case: &SweepCase<'_>, opts: &StepperOptions) -> SweepRow {
    let start = Instant::now();
    let outcome = Stepper::from_id(id, case.model.clone(), dt, opts.clone())
        .and_then(|mut s| run(&mut s, case.initial, case.horizon))
        .and_then(|u| linf_error(case.model, &u, case.reference, ErrorField::H));
    let wallclock = start.elapsed().as_secs_f64();
    let (linf_h_error, status) = match outcome {
        Ok(e) if e > FILTER_THRESHOLD_M => (Some(e), RowStatus::Filtered),
        Ok(e) => (Some(e), RowStatus::Ok),
        Err(Error::Divergence { .. }) => (None, RowStatus::Diverged),
        Err(e) => (None, RowStatus::Failed(e.to_string())),
    };
    SweepRow {
        stepper_id: id.to_string(),
        dt,
        linf_h_error,
        status,
        wallclock,
    }
}

/// One row per (stepper, Δt), sorted by id then Δt. Row failures are
/// recorded and the sweep continues.
pub fn run_sweep(ids: &[&str], dts: &[f64], case: &SweepCase<'_>, opts: &StepperOptions) -> Vec<SweepRow> {
    let mut ids = ids.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let mut dts = dts.to_vec();
    dts.sort_by(f64::total_cmp);
    dts.dedup();
    ids.iter()
        .flat_map(|id| dts.iter().map(move |&dt| (*id, dt)))
        .map(|(id, dt)| run_row(id, dt, case, opts))
        .collect()
}

/// CSV table; diverged rows carry `DIVERGED` in the error column.
pub fn write_sweep_csv(rows: &[SweepRow], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SWEEP_CSV_HEADER.split(','))?;
    for r in rows {
        let err = match (&r.status, r.linf_h_error) {
            (RowStatus::Diverged, _) => "DIVERGED".to_string(),
            (_, Some(e)) => format!("{e:.9e}"),
            (_, None) => String::new(),
        };
        out.write_record([
            r.stepper_id.clone(),
            r.dt.to_string(),
            err,
            r.status.as_str().to_string(),
            format!("{:.6}", r.wallclock),
        ])?;
    }
    out.flush().map_err(|e| Error::data(format!("cannot flush sweep table: {e}")))?;
    Ok(())
}
