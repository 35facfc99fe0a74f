use num_complex::Complex64;

use super::banded::{BandLu, BandMatrix};
use crate::error::{Error, Result};
use crate::sphere::legendre::epsilon;
use crate::sphere::ValueKind;
use crate::swe::{PrognosticState, SweModel, TermGroup};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One shifted system `(Δt·L + α) x = b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedSolveSpec {
    /// `lg` or `l`.
    pub group: TermGroup,
    pub dt: f64,
    pub alpha: Complex64,
}

impl ShiftedSolveSpec {
    pub fn new(group: TermGroup, dt: f64, alpha: Complex64) -> Result<Self> {
        if group != TermGroup::LG && group != TermGroup::L {
            return Err(Error::config(format!(
                "shifted solves support groups lg and l, not '{group}'"
            )));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::config(format!("dt must be positive, got {dt}")));
        }
        Ok(ShiftedSolveSpec { group, dt, alpha })
    }
}

#[derive(Debug, Clone)]
enum Factors {
    /// Per degree l: `1/det` of the (Φ′, δ) block.
    Gravity { inv_det: Vec<Complex64> },
    /// Per signed order m (index m + T): band LU over interleaved
    /// `(Φ′_l, ζ_l, δ_l)`, l = |m|..=T.
    Full { lu: Vec<BandLu> },
}

/// Prefactored shifted solver for one `(group, Δt, α)`.
#[derive(Debug, Clone)]
pub struct ShiftedSolver {
    spec: ShiftedSolveSpec,
    trunc: usize,
    phibar: f64,
    inv_a2: f64,
    factors: Factors,
}

impl ShiftedSolver {
    pub fn new(model: &SweModel, spec: ShiftedSolveSpec) -> Result<Self> {
        let spec = ShiftedSolveSpec::new(spec.group, spec.dt, spec.alpha)?;
        let cfg = model.cfg();
        let t = cfg.trunc;
        let phibar = model.mean_geopotential();
        let inv_a2 = 1.0 / (cfg.radius * cfg.radius);
        let alpha = spec.alpha;
        if alpha == ZERO {
            return Err(Error::Solver {
                m: 0,
                alpha_re: 0.0,
                alpha_im: 0.0,
                detail: "zero shift leaves the vorticity equation singular".into(),
            });
        }
        let factors = if spec.group == TermGroup::LG {
            let mut inv_det = Vec::with_capacity(t + 1);
            for l in 0..=t {
                let cl = (l * (l + 1)) as f64 * inv_a2;
                let coupling = spec.dt * spec.dt * phibar * cl;
                let det = alpha * alpha + coupling;
                if det.norm() <= 1e-13 * (alpha.norm_sqr() + coupling) {
                    return Err(Error::Solver {
                        m: 0,
                        alpha_re: alpha.re,
                        alpha_im: alpha.im,
                        detail: format!("shift on the gravity-wave eigenvalue of degree l={l}"),
                    });
                }
                inv_det.push(1.0 / det);
            }
            Factors::Gravity { inv_det }
        } else {
            let ti = t as i64;
            let mut lu = Vec::with_capacity(2 * t + 1);
            for m in -ti..=ti {
                let band = assemble_full(m, t, spec.dt, alpha, phibar, inv_a2, 2.0 * cfg.omega);
                lu.push(band.factor().map_err(|ratio| Error::Solver {
                    m,
                    alpha_re: alpha.re,
                    alpha_im: alpha.im,
                    detail: format!("band matrix numerically singular (pivot ratio {ratio:.3e})"),
                })?);
            }
            Factors::Full { lu }
        };
        Ok(ShiftedSolver {
            spec,
            trunc: t,
            phibar,
            inv_a2,
            factors,
        })
    }

    pub fn spec(&self) -> &ShiftedSolveSpec {
        &self.spec
    }

    /// Solves for every order present in `b`: m = −T..=T for
    /// complex-origin states, m = 0..=T (half spectrum) otherwise. In the
    /// half-spectrum case the m = 0 result may be complex.
    pub fn solve(&self, b: &PrognosticState) -> PrognosticState {
        let mut out = b.zeros_like();
        self.solve_into(b, &mut out);
        out
    }

    pub fn solve_into(&self, b: &PrognosticState, out: &mut PrognosticState) {
        assert_eq!(b.trunc(), self.trunc, "state truncation does not match the solver");
        assert_eq!(out.trunc(), self.trunc);
        assert_eq!(out.kind(), b.kind());
        let t = self.trunc as i64;
        let orders = match b.kind() {
            ValueKind::RealOrigin => 0..=t,
            ValueKind::ComplexOrigin => -t..=t,
        };
        let alpha = self.spec.alpha;
        let dt = self.spec.dt;
        match &self.factors {
            Factors::Gravity { inv_det } => {
                let inv_alpha = 1.0 / alpha;
                for m in orders {
                    let ma = m.unsigned_abs() as usize;
                    let (bp, bz, bd) = (b.phi.block(m), b.vort.block(m), b.div.block(m));
                    for (i, l) in (ma..=self.trunc).enumerate() {
                        let cl = (l * (l + 1)) as f64 * self.inv_a2;
                        let x_phi = (alpha * bp[i] + dt * self.phibar * bd[i]) * inv_det[l];
                        let x_div = (alpha * bd[i] - dt * cl * bp[i]) * inv_det[l];
                        out.phi.block_mut(m)[i] = x_phi;
                        out.div.block_mut(m)[i] = x_div;
                        out.vort.block_mut(m)[i] = bz[i] * inv_alpha;
                    }
                }
            }
            Factors::Full { lu } => {
                let mut buf = Vec::with_capacity(3 * (self.trunc + 1));
                for m in orders {
                    let (bp, bz, bd) = (b.phi.block(m), b.vort.block(m), b.div.block(m));
                    buf.clear();
                    for i in 0..bp.len() {
                        buf.extend_from_slice(&[bp[i], bz[i], bd[i]]);
                    }
                    lu[(m + t) as usize].solve_in_place(&mut buf);
                    for (i, x) in buf.chunks_exact(3).enumerate() {
                        out.phi.block_mut(m)[i] = x[0];
                        out.vort.block_mut(m)[i] = x[1];
                        out.div.block_mut(m)[i] = x[2];
                    }
                }
            }
        }
    }
}

/// `Δt·(L_g + L_c) + α` for signed order m over interleaved unknowns.
///
/// The Coriolis coupling follows from `μ P̄_l = ε_{l+1} P̄_{l+1} + ε_l P̄_{l−1}`
/// and `(1−μ²) ∂_μ P̄_l = −l ε_{l+1} P̄_{l+1} + (l+1) ε_l P̄_{l−1}` applied to
/// `−∇·(fV)` and `k·∇×(fV)` with `V` expressed through ψ and χ.
fn assemble_full(
    m: i64,
    t: usize,
    dt: f64,
    alpha: Complex64,
    phibar: f64,
    inv_a2: f64,
    two_omega: f64,
) -> BandMatrix {
    let ma = m.unsigned_abs() as usize;
    let nl = t + 1 - ma;
    let mut a = BandMatrix::zeros(3 * nl, 4, 4);
    let idx = |l: usize, f: usize| 3 * (l - ma) + f;
    let c = two_omega * dt;
    let re = |x: f64| Complex64::new(x, 0.0);
    for k in ma..=t {
        let (p, z, d) = (idx(k, 0), idx(k, 1), idx(k, 2));
        let kf = k as f64;
        a.add(p, p, alpha);
        a.add(z, z, alpha);
        a.add(d, d, alpha);
        // gravity
        a.add(p, d, re(-dt * phibar));
        a.add(d, p, re(dt * (k * (k + 1)) as f64 * inv_a2));
        if c == 0.0 {
            continue;
        }
        if k > 0 {
            let diag = Complex64::new(0.0, c * m as f64 / (kf * (kf + 1.0)));
            a.add(z, z, diag);
            a.add(d, d, diag);
        }
        if k >= 2 && k > ma {
            let w = c * (kf + 1.0) * epsilon(k, ma) / kf;
            a.add(z, idx(k - 1, 2), re(-w));
            a.add(d, idx(k - 1, 1), re(w));
        }
        if k < t {
            let w = c * kf * epsilon(k + 1, ma) / (kf + 1.0);
            a.add(z, idx(k + 1, 2), re(-w));
            a.add(d, idx(k + 1, 1), re(w));
        }
    }
    a
}

/// Solve `(Δt·L_g + α) x = b` mode by mode.
pub fn solve_lg_shifted(model: &SweModel, dt: f64, alpha: Complex64, b: &PrognosticState) -> Result<PrognosticState> {
    let spec = ShiftedSolveSpec::new(TermGroup::LG, dt, alpha)?;
    Ok(ShiftedSolver::new(model, spec)?.solve(b))
}

/// Solve `(Δt·(L_g + L_c) + α) x = b` order by order.
pub fn solve_l_shifted(model: &SweModel, dt: f64, alpha: Complex64, b: &PrognosticState) -> Result<PrognosticState> {
    let spec = ShiftedSolveSpec::new(TermGroup::L, dt, alpha)?;
    Ok(ShiftedSolver::new(model, spec)?.solve(b))
}
