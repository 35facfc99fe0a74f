//! Shifted linear solves `(Δt·L + α) x = b` in spectral space.

mod banded;
mod cache;
mod dense;
mod shifted;

pub use banded::{BandLu, BandMatrix};
pub use cache::FactorCache;
pub use dense::{dense_operator_matrix, state_to_vector, vector_to_state, DENSE_MAX_TRUNC};
pub use shifted::{solve_l_shifted, solve_lg_shifted, ShiftedSolveSpec, ShiftedSolver};
