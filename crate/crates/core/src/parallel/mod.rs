//! Term-parallel evaluation of REXI sums with a deterministic reduction,
//! plus the timing breakdown used for overhead studies.

mod executor;
mod plan;
mod timing;
mod tree;

pub use executor::{parallel_rexi_apply, serial_rexi_sum, ReduceMode, RexiExecutor};
pub use plan::{distribute_terms, WorkPlan};
pub use timing::{amdahl_report, AmdahlReport, AmdahlRow, TimingBreakdown, TimingRecord, CLOSURE_SLACK};
pub use tree::{term_rhs, tree_sum, WeightedInput};

pub(crate) use timing::Stopwatch;
