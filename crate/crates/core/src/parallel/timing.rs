use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

/// Wallclock seconds per category of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingBreakdown {
    pub overall: f64,
    pub nonlinearities: f64,
    pub rexi_total: f64,
    pub broadcast: f64,
    pub term_solves: f64,
    pub reduce: f64,
}

/// Relative slack allowed when checking that the REXI sub-categories fit
/// inside `rexi_total`.
pub const CLOSURE_SLACK: f64 = 0.05;

impl TimingBreakdown {
    pub fn add(&mut self, o: &TimingBreakdown) {
        self.overall += o.overall;
        self.nonlinearities += o.nonlinearities;
        self.rexi_total += o.rexi_total;
        self.broadcast += o.broadcast;
        self.term_solves += o.term_solves;
        self.reduce += o.reduce;
    }

    fn fields(&self) -> [f64; 6] {
        [
            self.overall,
            self.nonlinearities,
            self.rexi_total,
            self.broadcast,
            self.term_solves,
            self.reduce,
        ]
    }

    /// Checks non-negativity, `broadcast + term_solves + reduce ≤
    /// rexi_total·(1 + ε)` and `rexi_total ≤ overall`.
    pub fn check_closure(&self) -> Result<(), String> {
        if self.fields().iter().any(|v| !(*v >= 0.0)) {
            return Err(format!("negative or NaN timing in {self:?}"));
        }
        let parts = self.broadcast + self.term_solves + self.reduce;
        if parts > self.rexi_total * (1.0 + CLOSURE_SLACK) {
            return Err(format!(
                "REXI categories sum to {parts:.6e} s, above rexi_total {:.6e} s",
                self.rexi_total
            ));
        }
        if self.rexi_total > self.overall {
            return Err(format!(
                "rexi_total {:.6e} s exceeds overall {:.6e} s",
                self.rexi_total, self.overall
            ));
        }
        Ok(())
    }

    /// Per-category minimum over ensemble members. Closure is preserved:
    /// the member with the smallest `rexi_total` bounds the summed minima.
    pub fn min_over(runs: &[TimingBreakdown]) -> Option<TimingBreakdown> {
        let first = *runs.first()?;
        Some(runs[1..].iter().fold(first, |a, b| TimingBreakdown {
            overall: a.overall.min(b.overall),
            nonlinearities: a.nonlinearities.min(b.nonlinearities),
            rexi_total: a.rexi_total.min(b.rexi_total),
            broadcast: a.broadcast.min(b.broadcast),
            term_solves: a.term_solves.min(b.term_solves),
            reduce: a.reduce.min(b.reduce),
        }))
    }

    /// Time outside the parallel term solves.
    pub fn serial_time(&self) -> f64 {
        (self.overall - self.term_solves).max(0.0)
    }
}

/// JSON record: the breakdown plus worker count, term count and ensemble
/// member index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    #[serde(flatten)]
    pub breakdown: TimingBreakdown,
    #[serde(rename = "K")]
    pub workers: usize,
    #[serde(rename = "N")]
    pub num_terms: usize,
    pub ensemble: usize,
}

impl TimingRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("timing record serializes")
    }
}

/// Accumulating stopwatch helper.
pub(crate) fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

pub(crate) struct Stopwatch(Instant);

impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch(Instant::now())
    }
    pub fn elapsed(&self) -> f64 {
        secs(self.0.elapsed())
    }
}

/// One row of an Amdahl analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmdahlRow {
    pub workers: usize,
    pub measured_speedup: f64,
    pub projected_speedup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmdahlReport {
    /// Serial share of the baseline run.
    pub serial_fraction: f64,
    /// Projected speedup as K → ∞ (`1/serial_fraction`).
    pub max_speedup: f64,
    pub rows: Vec<AmdahlRow>,
}

/// Amdahl projection from breakdowns measured at several worker counts.
/// The run with the fewest workers is the baseline; the serial share is
/// everything outside `term_solves`. `max_parallelism` caps the usable
/// concurrency (e.g. hardware threads); `None` means K.
pub fn amdahl_report(runs: &[(usize, TimingBreakdown)], max_parallelism: Option<usize>) -> Option<AmdahlReport> {
    let mut ks: Vec<usize> = runs.iter().map(|r| r.0).collect();
    ks.sort_unstable();
    ks.dedup();
    if ks.len() < 2 {
        return None;
    }
    let (k0, base) = *runs.iter().min_by_key(|r| r.0)?;
    if !(base.overall > 0.0) {
        return None;
    }
    let s = (base.serial_time() / base.overall).clamp(0.0, 1.0);
    let eff = |k: usize| -> f64 {
        let k = max_parallelism.map_or(k, |p| k.min(p.max(1)));
        let k0 = max_parallelism.map_or(k0, |p| k0.min(p.max(1)));
        k as f64 / k0 as f64
    };
    let mut rows: Vec<AmdahlRow> = runs
        .iter()
        .map(|&(k, b)| AmdahlRow {
            workers: k,
            measured_speedup: if b.overall > 0.0 { base.overall / b.overall } else { f64::NAN },
            projected_speedup: 1.0 / (s + (1.0 - s) / eff(k)),
        })
        .collect();
    rows.sort_by_key(|r| r.workers);
    Some(AmdahlReport {
        serial_fraction: s,
        max_speedup: if s > 0.0 { 1.0 / s } else { f64::INFINITY },
        rows,
    })
}
