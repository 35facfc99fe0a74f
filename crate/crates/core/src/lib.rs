//! Shallow-water equations on the rotating sphere with a spectral
//! discretization and a family of time integrators: explicit Runge–Kutta,
//! Crank–Nicolson, rational approximations of exponential integrators (REXI)
//! with term-parallel evaluation, ETD2RK, and Strang splittings.

pub mod benchmarks;
pub mod error;
pub mod integrators;
pub mod parallel;
pub mod rexi;
pub mod solvers;
pub mod sphere;
pub mod swe;

pub use error::{Error, Result};
