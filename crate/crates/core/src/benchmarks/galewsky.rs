//! Barotropically unstable mid-latitude jet with an optional height bump.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::quadrature::integrate;
use crate::error::{Error, Result};
use crate::sphere::{inv_laplacian, GridField, SpectralField, ValueKind};
use crate::swe::{PrognosticState, SweModel};

/// Jet and bump constants.
#[derive(Debug, Clone, PartialEq)]
pub struct JetParams {
    /// Peak zonal wind (m/s).
    pub u_max: f64,
    /// Southern and northern jet edges (rad).
    pub lat0: f64,
    pub lat1: f64,
    /// Bump amplitude (m), longitudinal and latitudinal widths (rad) and
    /// centre latitude (rad).
    pub bump_height: f64,
    pub bump_alpha: f64,
    pub bump_beta: f64,
    pub bump_lat: f64,
    /// Global mean fluid depth (m).
    pub mean_depth: f64,
}

impl Default for JetParams {
    fn default() -> Self {
        let lat0 = PI / 7.0;
        JetParams {
            u_max: 80.0,
            lat0,
            lat1: FRAC_PI_2 - lat0,
            bump_height: 120.0,
            bump_alpha: 1.0 / 3.0,
            bump_beta: 1.0 / 15.0,
            bump_lat: FRAC_PI_4,
            mean_depth: 1.0e4,
        }
    }
}

impl JetParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.u_max.is_finite()
            && self.lat0 < self.lat1
            && self.lat0 > -FRAC_PI_2
            && self.lat1 < FRAC_PI_2
            && self.bump_alpha > 0.0
            && self.bump_beta > 0.0
            && self.mean_depth > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!("invalid jet parameters {self:?}")))
        }
    }

    /// Zonal wind at latitude `lat`.
    pub fn zonal_wind(&self, lat: f64) -> f64 {
        if lat <= self.lat0 || lat >= self.lat1 {
            return 0.0;
        }
        let en = (-4.0 / (self.lat1 - self.lat0).powi(2)).exp();
        self.u_max / en * (1.0 / ((lat - self.lat0) * (lat - self.lat1))).exp()
    }

    /// Height perturbation (m); longitude is wrapped to (−π, π].
    pub fn bump(&self, lat: f64, lon: f64) -> f64 {
        let mut lam = lon.rem_euclid(2.0 * PI);
        if lam > PI {
            lam -= 2.0 * PI;
        }
        self.bump_height
            * lat.cos()
            * (-(lam / self.bump_alpha).powi(2)).exp()
            * (-((self.bump_lat - lat) / self.bump_beta).powi(2)).exp()
    }
}

/// Relative tolerance of the balance integral.
pub const BALANCE_TOL: f64 = 1e-12;

/// `−∫_{−π/2}^{lat} a·u·(f + u·tanφ/a) dφ`, the geopotential anomaly
/// balancing the jet, up to a constant.
pub fn balanced_geopotential(params: &JetParams, radius: f64, omega: f64, lat: f64) -> Result<f64> {
    let hi = lat.min(params.lat1);
    if hi <= params.lat0 {
        return Ok(0.0);
    }
    let integrand = |p: f64| {
        let u = params.zonal_wind(p);
        radius * u * (2.0 * omega * p.sin() + u * p.tan() / radius)
    };
    Ok(-integrate(integrand, params.lat0, hi, BALANCE_TOL)?)
}

/// Total fluid depth h (m) on the grid: balanced jet height with the mean
/// set to `mean_depth`, plus the bump if requested.
pub fn initial_height_grid(model: &SweModel, params: &JetParams, with_bump: bool) -> Result<GridField> {
    params.validate()?;
    let cfg = model.cfg();
    let sht = model.transform();
    let lats = sht.latitudes();
    let col = lats
        .iter()
        .map(|&p| balanced_geopotential(params, cfg.radius, cfg.omega, p).map(|v| v / cfg.gravity))
        .collect::<Result<Vec<f64>>>()?;
    let mean = col.iter().zip(sht.weights()).map(|(h, w)| h * w).sum::<f64>() / 2.0;
    let h0 = params.mean_depth - mean;
    let lons = sht.longitudes();
    Ok(GridField::from_fn(cfg.nlat, cfg.nlon, |j, k| {
        let b = if with_bump { params.bump(lats[j], lons[k]) } else { 0.0 };
        h0 + col[j] + b
    }))
}

/// The jet state at both stages of construction.
#[derive(Debug, Clone)]
pub struct JetState {
    /// Balanced state used for integration (discrete balance).
    pub state: PrognosticState,
    /// Φ′ from the balance integral alone, projected on the truncation.
    pub quadrature_phi: SpectralField,
}

/// Vorticity of the jet and the geopotential that makes the discrete
/// divergence tendency vanish, `Φ′ = ∇⁻²(k·∇×((ζ+f)V)) − |V|²/2`.
///
/// The quadrature height and this discrete solution agree to truncation
/// error; the discrete one removes the residual imbalance left by
/// projecting a narrow jet on the truncation.
pub fn balanced_jet(model: &SweModel, params: &JetParams) -> Result<JetState> {
    params.validate()?;
    let cfg = model.cfg();
    let sht = model.transform();
    let lats = sht.latitudes();
    let u = GridField::from_fn(cfg.nlat, cfg.nlon, |j, _| params.zonal_wind(lats[j]));
    let v = GridField::zeros(cfg.nlat, cfg.nlon);
    let (vort, _) = sht.vortdiv_from_uv(&u, &v)?;

    let h = initial_height_grid(model, params, false)?;
    let mut quadrature_phi = sht.analysis(&h.map(|x| x * cfg.gravity))?;
    quadrature_phi.set(0, 0, Complex64::new(0.0, 0.0));

    let base = PrognosticState::new(
        SpectralField::zeros(cfg.trunc, ValueKind::RealOrigin),
        vort,
        SpectralField::zeros(cfg.trunc, ValueKind::RealOrigin),
    );
    let (gu, gv) = model.velocity(&base);
    let zeta = sht.synthesis(&base.vort)?;
    let coriolis: Vec<f64> = sht.sin_lat().iter().map(|s| 2.0 * cfg.omega * s).collect();
    let q = |j: usize, k: usize| zeta.at(j, k) + coriolis[j];
    let qu = GridField::from_fn(cfg.nlat, cfg.nlon, |j, k| q(j, k) * gu.at(j, k));
    let qv = GridField::from_fn(cfg.nlat, cfg.nlon, |j, k| q(j, k) * gv.at(j, k));
    let (curl, _) = sht.vortdiv_from_uv(&qu, &qv)?;
    let ke = sht.analysis(&gu.zip_map(&gv, |x, y| 0.5 * (x * x + y * y)))?;
    let mut phi = inv_laplacian(&curl, cfg);
    phi.sub_assign(&ke);
    phi.set(0, 0, Complex64::new(0.0, 0.0));

    Ok(JetState {
        state: PrognosticState::new(phi, base.vort, base.div),
        quadrature_phi,
    })
}

/// Initial state of the barotropic-instability case.
pub fn init_barotropic_instability(model: &SweModel, params: &JetParams, with_bump: bool) -> Result<PrognosticState> {
    let mut u = balanced_jet(model, params)?.state;
    if with_bump {
        let cfg = model.cfg();
        let sht = model.transform();
        let bump = sht.sample(|lat, lon| cfg.gravity * params.bump(lat, lon));
        let mut b = sht.analysis(&bump)?;
        b.set(0, 0, Complex64::new(0.0, 0.0));
        u.phi.add_assign(&b);
    }
    Ok(u)
}
