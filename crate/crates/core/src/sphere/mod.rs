//! Spherical-harmonic pseudo-spectral kernel.

mod config;
mod field;
pub mod io;
pub mod legendre;
mod transform;

pub use config::{
    block_offset, coeff_index, num_coeffs, SphereConfig, EARTH_GRAVITY, EARTH_OMEGA, EARTH_RADIUS,
};
pub use field::{GridField, SpectralField, ValueKind};
pub use transform::{inv_laplacian, laplacian, SphereTransform};
