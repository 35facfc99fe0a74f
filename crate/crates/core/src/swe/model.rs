use std::sync::Arc;

use num_complex::Complex64;

use super::{PrognosticState, TermGroup};
use crate::error::{Error, Result};
use crate::sphere::{inv_laplacian, GridField, SpectralField, SphereConfig, SphereTransform, ValueKind};

/// Physical parameters of one model instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Global mean geopotential Φ̄ (m²/s²).
    pub mean_geopotential: f64,
    pub cfg: SphereConfig,
}

impl ModelParams {
    pub fn new(mean_geopotential: f64, cfg: SphereConfig) -> Result<Self> {
        if !(mean_geopotential > 0.0 && mean_geopotential.is_finite()) {
            return Err(Error::config(format!(
                "mean geopotential must be positive, got {mean_geopotential}"
            )));
        }
        Ok(ModelParams {
            mean_geopotential,
            cfg,
        })
    }
}

/// Right-hand side evaluator; owns the transform plan and the Coriolis
/// parameter on the grid. Cheap to clone.
#[derive(Debug, Clone)]
pub struct SweModel {
    params: ModelParams,
    sht: Arc<SphereTransform>,
    coriolis: Arc<Vec<f64>>,
}

impl SweModel {
    pub fn new(params: ModelParams) -> Result<Self> {
        let sht = Arc::new(SphereTransform::new(params.cfg.clone())?);
        Ok(Self::with_transform(params, sht))
    }

    /// Reuse an existing plan; `params.cfg` must be the plan's config.
    pub fn with_transform(params: ModelParams, sht: Arc<SphereTransform>) -> Self {
        assert_eq!(&params.cfg, sht.config());
        let two_omega = 2.0 * params.cfg.omega;
        let coriolis = sht.sin_lat().iter().map(|s| two_omega * s).collect();
        SweModel {
            params,
            sht,
            coriolis: Arc::new(coriolis),
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn cfg(&self) -> &SphereConfig {
        &self.params.cfg
    }

    pub fn transform(&self) -> &SphereTransform {
        &self.sht
    }

    pub fn transform_arc(&self) -> Arc<SphereTransform> {
        Arc::clone(&self.sht)
    }

    pub fn mean_geopotential(&self) -> f64 {
        self.params.mean_geopotential
    }

    /// Copy of this model with a different Φ̄.
    pub fn with_mean_geopotential(&self, phibar: f64) -> Result<Self> {
        let params = ModelParams::new(phibar, self.params.cfg.clone())?;
        Ok(SweModel {
            params,
            sht: Arc::clone(&self.sht),
            coriolis: Arc::clone(&self.coriolis),
        })
    }

    pub fn zero_state(&self) -> PrognosticState {
        PrognosticState::zeros(self.cfg().trunc)
    }

    fn check(&self, u: &PrognosticState) {
        assert_eq!(
            u.trunc(),
            self.cfg().trunc,
            "state truncation does not match the model"
        );
    }

    /// Gravity-wave part `(−Φ̄δ, 0, −∇²Φ′)`. Diagonal per mode; accepts
    /// either value kind.
    pub fn tendency_lg(&self, u: &PrognosticState) -> PrognosticState {
        self.check(u);
        let phibar = self.params.mean_geopotential;
        let inv_a2 = 1.0 / (self.cfg().radius * self.cfg().radius);
        let mut out = u.zeros_like();
        out.phi = u.div.scaled(-phibar);
        out.div = u.phi.clone();
        out.div.map_degree(|l| (l * (l + 1)) as f64 * inv_a2);
        out
    }

    /// Coriolis part `(0, −∇·(fV), k·∇×(fV))`, with the product `fV` formed
    /// on the grid.
    pub fn tendency_lc(&self, u: &PrognosticState) -> PrognosticState {
        self.check(u);
        match u.kind() {
            ValueKind::RealOrigin => {
                let mut out = u.zeros_like();
                if self.cfg().omega != 0.0 {
                    let (gu, gv) = self.velocity(u);
                    self.add_flux_terms(&gu, &gv, None, &mut out);
                }
                out
            }
            ValueKind::ComplexOrigin => self.split_complex(u, |s| self.tendency_lc(s)),
        }
    }

    /// Nonlinear part `(−∇·(Φ′V), −∇·(ζV), k·∇×(ζV) − ∇²(V·V/2))`.
    /// Real-origin states only.
    pub fn tendency_n(&self, u: &PrognosticState) -> PrognosticState {
        self.check(u);
        assert_eq!(u.kind(), ValueKind::RealOrigin, "N is evaluated on real states");
        let mut out = u.zeros_like();
        let (gu, gv) = self.velocity(u);
        let zeta = self.sht.synthesis_unchecked(&u.vort);
        self.add_nonlinear_scalar_terms(u, &gu, &gv, &mut out);
        self.add_flux_terms(&gu, &gv, Some((&zeta, false)), &mut out);
        out
    }

    /// Sum of the tendencies in `group`.
    pub fn tendency(&self, group: TermGroup, u: &PrognosticState) -> PrognosticState {
        self.check(u);
        let mut out = if group.lg {
            self.tendency_lg(u)
        } else {
            u.zeros_like()
        };
        match (group.lc, group.n) {
            (false, false) => {}
            (true, false) => out.add_assign(&self.tendency_lc(u)),
            (false, true) => out.add_assign(&self.tendency_n(u)),
            (true, true) => {
                // absolute vorticity ζ + f in a single flux evaluation
                assert_eq!(u.kind(), ValueKind::RealOrigin);
                let mut part = u.zeros_like();
                let (gu, gv) = self.velocity(u);
                let zeta = self.sht.synthesis_unchecked(&u.vort);
                self.add_nonlinear_scalar_terms(u, &gu, &gv, &mut part);
                self.add_flux_terms(&gu, &gv, Some((&zeta, true)), &mut part);
                out.add_assign(&part);
            }
        }
        out
    }

    /// Grid velocity of a real-origin state.
    pub fn velocity(&self, u: &PrognosticState) -> (GridField, GridField) {
        let psi = inv_laplacian(&u.vort, self.cfg());
        let chi = inv_laplacian(&u.div, self.cfg());
        self.sht.uv_from_psichi(&psi, &chi)
    }

    /// Adds `−∇·(qV)` to ζ and `k·∇×(qV)` to δ, where q is `ζ` (optionally
    /// plus f) or f alone when `zeta` is `None`.
    fn add_flux_terms(
        &self,
        gu: &GridField,
        gv: &GridField,
        zeta: Option<(&GridField, bool)>,
        out: &mut PrognosticState,
    ) {
        let nlon = gu.nlon();
        let q = |j: usize, k: usize| -> f64 {
            match zeta {
                None => self.coriolis[j],
                Some((z, false)) => z.at(j, k),
                Some((z, true)) => z.at(j, k) + self.coriolis[j],
            }
        };
        let qu = GridField::from_fn(gu.nlat(), nlon, |j, k| q(j, k) * gu.at(j, k));
        let qv = GridField::from_fn(gu.nlat(), nlon, |j, k| q(j, k) * gv.at(j, k));
        let (curl, div) = self.sht.vortdiv_unchecked(&qu, &qv);
        out.vort.sub_assign(&div);
        out.div.add_assign(&curl);
    }

    /// Adds `−∇·(Φ′V)` to Φ′ and `−∇²(V·V/2)` to δ.
    fn add_nonlinear_scalar_terms(
        &self,
        u: &PrognosticState,
        gu: &GridField,
        gv: &GridField,
        out: &mut PrognosticState,
    ) {
        let phi = self.sht.synthesis_unchecked(&u.phi);
        let pu = phi.zip_map(gu, |p, x| p * x);
        let pv = phi.zip_map(gv, |p, y| p * y);
        let (_, div) = self.sht.vortdiv_unchecked(&pu, &pv);
        out.phi.sub_assign(&div);

        let ke = gu.zip_map(gv, |x, y| 0.5 * (x * x + y * y));
        let mut ke = self.sht.analysis_unchecked(&ke);
        let inv_a2 = 1.0 / (self.cfg().radius * self.cfg().radius);
        ke.map_degree(|l| (l * (l + 1)) as f64 * inv_a2);
        out.div.add_assign(&ke);
    }

    fn split_complex(
        &self,
        u: &PrognosticState,
        f: impl Fn(&PrognosticState) -> PrognosticState,
    ) -> PrognosticState {
        let (pr, pi) = u.phi.split_re_im();
        let (vr, vi) = u.vort.split_re_im();
        let (dr, di) = u.div.split_re_im();
        let re = f(&PrognosticState::new(pr, vr, dr));
        let im = f(&PrognosticState::new(pi, vi, di));
        let join = |a: &SpectralField, b: &SpectralField| SpectralField::from_re_im(a, b);
        PrognosticState::new(
            join(&re.phi, &im.phi),
            join(&re.vort, &im.vort),
            join(&re.div, &im.div),
        )
    }

    /// Applies a linear group to a half-spectrum state: a real-origin
    /// layout whose m = 0 coefficients may carry imaginary parts, as
    /// produced by per-order complex solves.
    pub fn apply_linear_half_spectrum(&self, group: TermGroup, u: &PrognosticState) -> PrognosticState {
        assert!(group.is_linear());
        assert_eq!(u.kind(), ValueKind::RealOrigin);
        let t = self.cfg().trunc;
        let mut re_part = u.clone();
        let mut im_part = u.zeros_like();
        for (src, dst) in re_part.fields_mut().into_iter().zip(im_part.fields_mut()) {
            for l in 0..=t {
                let c = src.get(l, 0);
                dst.set(l, 0, Complex64::new(c.im, 0.0));
                src.set(l, 0, Complex64::new(c.re, 0.0));
            }
        }
        let mut out = self.tendency(group, &re_part);
        // L does not couple orders, so the imaginary m = 0 input only feeds m = 0
        let tim = self.tendency(group, &im_part);
        for (o, s) in out.fields_mut().into_iter().zip(tim.fields()) {
            for l in 0..=t {
                let c = o.get(l, 0);
                o.set(l, 0, Complex64::new(c.re, s.get(l, 0).re));
            }
        }
        out
    }
}
