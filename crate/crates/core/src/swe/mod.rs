//! Shallow-water right-hand side in vorticity–divergence form, split into
//! gravity (`lg`), Coriolis (`lc`) and nonlinear (`n`) terms.

mod groups;
mod model;
mod state;

pub use groups::TermGroup;
pub use model::{ModelParams, SweModel};
pub use state::PrognosticState;
