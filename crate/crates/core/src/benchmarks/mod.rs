//! Benchmark cases, reference solutions, error metrics and Δt sweeps.

mod galewsky;
mod quadrature;
mod reference;
mod sweep;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

pub use galewsky::{
    balanced_geopotential, balanced_jet, init_barotropic_instability, initial_height_grid, JetParams, JetState,
    BALANCE_TOL,
};
pub use quadrature::integrate;
pub use reference::{
    linf_error, load_reference, reference_filename, reference_solution, save_reference, ErrorField,
    DEFAULT_REFERENCE_DT,
};
pub use sweep::{run_sweep, write_sweep_csv, RowStatus, SweepCase, SweepRow, FILTER_THRESHOLD_M, SWEEP_CSV_HEADER};

use crate::error::{Error, Result};
use crate::sphere::{SphereConfig, EARTH_GRAVITY, EARTH_OMEGA, EARTH_RADIUS};
use crate::swe::{ModelParams, PrognosticState, SweModel};

/// Mean depth of the baseline case (m).
pub const BASE_MEAN_DEPTH: f64 = 1.0e4;

/// Spherical-harmonic degree and order excited by the gravity-wave case.
pub const GRAVITY_WAVE_MODE: (usize, i64) = (4, 2);

/// Φ′ amplitude of the gravity-wave case (m²/s²); small enough that the
/// nonlinear terms stay far below 1e-6 of the linear ones.
pub const GRAVITY_WAVE_AMPLITUDE: f64 = 1.0e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchmarkName {
    BarotropicInstability,
    BarotropicInstabilityNoBump,
    LinearGravityWave,
}

impl BenchmarkName {
    pub const ALL: [BenchmarkName; 3] = [
        BenchmarkName::BarotropicInstability,
        BenchmarkName::BarotropicInstabilityNoBump,
        BenchmarkName::LinearGravityWave,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchmarkName::BarotropicInstability => "barotropic_instability",
            BenchmarkName::BarotropicInstabilityNoBump => "barotropic_instability_no_bump",
            BenchmarkName::LinearGravityWave => "linear_gravity_wave",
        }
    }
}

impl fmt::Display for BenchmarkName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchmarkName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown benchmark '{s}'")))
    }
}

/// One benchmark configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub name: BenchmarkName,
    /// Φ̄ (m²/s²).
    pub mean_geopotential: f64,
    pub horizon_hours: f64,
    pub radius: f64,
    pub omega: f64,
    pub gravity: f64,
    pub jet: JetParams,
}

impl BenchmarkSpec {
    /// Earth constants, Φ̄ = 10⁴·g, 24 h horizon. The gravity-wave case is
    /// non-rotating so its modes have a closed-form frequency.
    pub fn new(name: BenchmarkName) -> Self {
        BenchmarkSpec {
            name,
            mean_geopotential: BASE_MEAN_DEPTH * EARTH_GRAVITY,
            horizon_hours: 24.0,
            radius: EARTH_RADIUS,
            omega: if name == BenchmarkName::LinearGravityWave { 0.0 } else { EARTH_OMEGA },
            gravity: EARTH_GRAVITY,
            jet: JetParams::default(),
        }
    }

    pub fn with_mean_depth(mut self, depth: f64) -> Self {
        self.mean_geopotential = depth * self.gravity;
        self.jet.mean_depth = depth;
        self
    }

    pub fn with_horizon_hours(mut self, hours: f64) -> Self {
        self.horizon_hours = hours;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [self.mean_geopotential, self.horizon_hours, self.radius, self.gravity];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) || !(self.omega >= 0.0) {
            return Err(Error::config(format!("benchmark constants out of range: {self:?}")));
        }
        self.jet.validate()
    }

    pub fn horizon_seconds(&self) -> f64 {
        self.horizon_hours * 3600.0
    }

    pub fn sphere_config(&self, trunc: usize) -> Result<SphereConfig> {
        self.validate()?;
        let nlat = SphereConfig::min_dealiased_nlat(trunc);
        SphereConfig::new(trunc, nlat, 2 * nlat, self.radius, self.omega, self.gravity)
    }

    pub fn model(&self, trunc: usize) -> Result<SweModel> {
        SweModel::new(ModelParams::new(self.mean_geopotential, self.sphere_config(trunc)?)?)
    }

    pub fn initial_state(&self, model: &SweModel) -> Result<PrognosticState> {
        match self.name {
            BenchmarkName::BarotropicInstability => init_barotropic_instability(model, &self.jet, true),
            BenchmarkName::BarotropicInstabilityNoBump => init_barotropic_instability(model, &self.jet, false),
            BenchmarkName::LinearGravityWave => Ok(linear_gravity_wave_state(model, GRAVITY_WAVE_AMPLITUDE)),
        }
    }

    /// Plain-text `key=value` lines.
    pub fn to_key_value(&self) -> String {
        let j = &self.jet;
        let rows: [(&str, String); 15] = [
            ("version", "1".into()),
            ("name", self.name.to_string()),
            ("mean_geopotential", self.mean_geopotential.to_string()),
            ("horizon_hours", self.horizon_hours.to_string()),
            ("radius", self.radius.to_string()),
            ("omega", self.omega.to_string()),
            ("gravity", self.gravity.to_string()),
            ("jet.u_max", j.u_max.to_string()),
            ("jet.lat0", j.lat0.to_string()),
            ("jet.lat1", j.lat1.to_string()),
            ("jet.bump_height", j.bump_height.to_string()),
            ("jet.bump_alpha", j.bump_alpha.to_string()),
            ("jet.bump_beta", j.bump_beta.to_string()),
            ("jet.bump_lat", j.bump_lat.to_string()),
            ("jet.mean_depth", j.mean_depth.to_string()),
        ];
        let mut out = String::from("# benchmark constants\n");
        for (k, v) in rows {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }

    /// Inverse of [`to_key_value`](Self::to_key_value). `name` is required;
    /// other keys default to [`BenchmarkSpec::new`].
    pub fn from_key_value(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected key=value", i + 1)))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        let name: BenchmarkName = map
            .remove("name")
            .ok_or_else(|| Error::config("benchmark config lacks 'name'"))?
            .parse()?;
        if let Some(v) = map.remove("version") {
            if v != "1" {
                return Err(Error::config(format!("unsupported benchmark config version {v}")));
            }
        }
        let mut spec = BenchmarkSpec::new(name);
        for (k, v) in map {
            let x: f64 = v
                .parse()
                .map_err(|_| Error::config(format!("'{k}': cannot parse '{v}' as a number")))?;
            let slot = match k.as_str() {
                "mean_geopotential" => &mut spec.mean_geopotential,
                "horizon_hours" => &mut spec.horizon_hours,
                "radius" => &mut spec.radius,
                "omega" => &mut spec.omega,
                "gravity" => &mut spec.gravity,
                "jet.u_max" => &mut spec.jet.u_max,
                "jet.lat0" => &mut spec.jet.lat0,
                "jet.lat1" => &mut spec.jet.lat1,
                "jet.bump_height" => &mut spec.jet.bump_height,
                "jet.bump_alpha" => &mut spec.jet.bump_alpha,
                "jet.bump_beta" => &mut spec.jet.bump_beta,
                "jet.bump_lat" => &mut spec.jet.bump_lat,
                "jet.mean_depth" => &mut spec.jet.mean_depth,
                _ => return Err(Error::config(format!("unknown benchmark key '{k}'"))),
            };
            *slot = x;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_key_value()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_key_value(&text)
    }
}

/// Nine barotropic-instability configs with mean depth 2000, 4000, …,
/// 18000 m.
pub fn stiffness_sweep_configs() -> Vec<BenchmarkSpec> {
    (1..=9)
        .map(|i| BenchmarkSpec::new(BenchmarkName::BarotropicInstability).with_mean_depth(2000.0 * i as f64))
        .collect()
}

/// Single-mode Φ′ at rest; every coefficient oscillates as `cos(ωt)`.
pub fn linear_gravity_wave_state(model: &SweModel, amplitude: f64) -> PrognosticState {
    let mut u = model.zero_state();
    let (l, m) = GRAVITY_WAVE_MODE;
    u.phi.set(l, m, Complex64::new(amplitude, 0.0));
    u
}

/// `ω = √(Φ̄·l(l+1))/a`, the non-rotating gravity-wave frequency.
pub fn gravity_wave_frequency(model: &SweModel, l: usize) -> f64 {
    let a = model.cfg().radius;
    (model.mean_geopotential() * (l * (l + 1)) as f64).sqrt() / a
}
