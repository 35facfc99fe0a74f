use crate::error::{Error, Result};

/// Earth radius in meters.
pub const EARTH_RADIUS: f64 = 6.37122e6;
/// Earth rotation rate in 1/s.
pub const EARTH_OMEGA: f64 = 7.292e-5;
/// Gravitational acceleration in m/s².
pub const EARTH_GRAVITY: f64 = 9.80616;

/// Resolution and physical constants of the sphere.
///
/// `trunc` is the triangular truncation T; the grid is `nlat` Gauss–Legendre
/// latitudes by `nlon` equiangular longitudes. Construction enforces the
/// 3/2-rule so quadratic products evaluated on the grid are alias-free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereConfig {
    pub trunc: usize,
    pub nlat: usize,
    pub nlon: usize,
    pub radius: f64,
    pub omega: f64,
    pub gravity: f64,
}

impl SphereConfig {
    pub fn new(
        trunc: usize,
        nlat: usize,
        nlon: usize,
        radius: f64,
        omega: f64,
        gravity: f64,
    ) -> Result<Self> {
        let cfg = SphereConfig {
            trunc,
            nlat,
            nlon,
            radius,
            omega,
            gravity,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Smallest dealiased grid for truncation `trunc` with Earth constants.
    pub fn earth(trunc: usize) -> Result<Self> {
        let nlat = Self::min_dealiased_nlat(trunc);
        Self::new(
            trunc,
            nlat,
            2 * nlat,
            EARTH_RADIUS,
            EARTH_OMEGA,
            EARTH_GRAVITY,
        )
    }

    /// ceil((3T+1)/2), rounded up to an even count so the grid is
    /// symmetric about the equator.
    pub fn min_dealiased_nlat(trunc: usize) -> usize {
        let n = (3 * trunc + 2) / 2;
        n + n % 2
    }

    pub fn with_omega(mut self, omega: f64) -> Result<Self> {
        self.omega = omega;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trunc == 0 {
            return Err(Error::config("truncation must be at least 1"));
        }
        if self.nlat < self.trunc + 1 {
            return Err(Error::config(format!(
                "nlat = {} is below T+1 = {}",
                self.nlat,
                self.trunc + 1
            )));
        }
        let dealiased = (3 * self.trunc + 2) / 2;
        if self.nlat < dealiased {
            return Err(Error::config(format!(
                "nlat = {} violates the 3/2 dealiasing rule (need >= {dealiased} for T{})",
                self.nlat, self.trunc
            )));
        }
        if self.nlon < 2 * self.nlat {
            return Err(Error::config(format!(
                "nlon = {} must be at least 2*nlat = {}",
                self.nlon,
                2 * self.nlat
            )));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::config("radius must be positive"));
        }
        if !(self.gravity > 0.0 && self.gravity.is_finite()) {
            return Err(Error::config("gravity must be positive"));
        }
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return Err(Error::config("rotation rate must be non-negative"));
        }
        Ok(())
    }

    /// Number of stored (l, m) pairs with 0 <= m <= l <= T.
    pub fn num_coeffs(&self) -> usize {
        num_coeffs(self.trunc)
    }
}

pub fn num_coeffs(trunc: usize) -> usize {
    (trunc + 1) * (trunc + 2) / 2
}

/// Offset of the m-block in the m-major coefficient layout.
#[inline]
pub fn block_offset(trunc: usize, m: usize) -> usize {
    m * (trunc + 1) - m * (m.saturating_sub(1)) / 2
}

/// Flat index of (l, m), 0 <= m <= l <= T.
#[inline]
pub fn coeff_index(trunc: usize, l: usize, m: usize) -> usize {
    debug_assert!(m <= l && l <= trunc);
    block_offset(trunc, m) + (l - m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_dense_and_ordered() {
        let t = 7;
        let mut expected = 0;
        for m in 0..=t {
            for l in m..=t {
                assert_eq!(coeff_index(t, l, m), expected);
                expected += 1;
            }
        }
        assert_eq!(expected, num_coeffs(t));
    }

    #[test]
    fn desk_grids() {
        let t42 = SphereConfig::earth(42).unwrap();
        assert_eq!((t42.nlat, t42.nlon), (64, 128));
        let t21 = SphereConfig::earth(21).unwrap();
        assert_eq!((t21.nlat, t21.nlon), (32, 64));
    }

    #[test]
    fn rejects_aliased_grid() {
        assert!(SphereConfig::new(42, 43, 128, 1.0, 0.0, 1.0).is_err());
        assert!(SphereConfig::new(42, 64, 100, 1.0, 0.0, 1.0).is_err());
        assert!(SphereConfig::new(42, 64, 128, -1.0, 0.0, 1.0).is_err());
        assert!(SphereConfig::new(42, 64, 128, 1.0, -1.0, 1.0).is_err());
    }
}
