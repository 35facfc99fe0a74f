//! Time steppers: explicit RK, Crank–Nicolson, REXI, ETD2RK and Strang
//! splittings, assembled from identifiers such as `lg_rexi_lc_n_erk_ver1`.

mod explicit;
mod exponential;
mod linear;
mod spec;
mod splitting;
mod state;
mod stepper;

pub use explicit::{erk2_step, erk_step, rk4_step};
pub use exponential::{etdrk2_step, irk_cn_step, rexi_step};
pub use linear::{ScalarLinear, ShiftedLinear, SweLinear};
pub use spec::{parse_stepper_id, Method, SplitVersion, TimeStepperSpec};
pub use splitting::strang_split_step;
pub use state::StateVector;
pub use stepper::{integrate, run, step_count, Integration, Stepper, StepperOptions, DIVERGENCE_PHI_LIMIT};
