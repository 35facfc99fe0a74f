use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::explicit::erk_step;
use super::splitting::{check_finite, strang_split_step};
use super::{erk2_step, irk_cn_step, Method, SplitVersion, SweLinear, TimeStepperSpec};
use crate::error::{Error, Result};
use crate::parallel::{ReduceMode, RexiExecutor, Stopwatch, TimingBreakdown, WeightedInput};
use crate::rexi::{circle_contour_coeffs, FunctionId, RexiCoefficients, RexiConfig};
use crate::solvers::{FactorCache, ShiftedSolveSpec, ShiftedSolver};
use crate::swe::{PrognosticState, SweModel};

/// Blow-up threshold on the grid maximum of |Φ′| (m²/s²).
pub const DIVERGENCE_PHI_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct StepperOptions {
    pub rexi: RexiConfig,
    /// REXI worker threads K.
    pub workers: usize,
    pub reduce: ReduceMode,
}

impl Default for StepperOptions {
    fn default() -> Self {
        StepperOptions {
            rexi: RexiConfig::default(),
            workers: 1,
            reduce: ReduceMode::FixedTree,
        }
    }
}

/// Coefficients and factorizations for one linear substep size.
struct Prepared {
    coeffs: Vec<RexiCoefficients>,
    solvers: Vec<Arc<ShiftedSolver>>,
}

/// A stepper assembled from a [`TimeStepperSpec`] for one model and Δt.
pub struct Stepper {
    spec: TimeStepperSpec,
    model: SweModel,
    dt: f64,
    opts: StepperOptions,
    cache: FactorCache,
    executor: Option<RexiExecutor>,
    prepared: HashMap<u64, Prepared>,
    timing: TimingBreakdown,
    max_residue: f64,
}

impl std::fmt::Debug for Stepper {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Stepper")
            .field("spec", &self.spec.canonical())
            .field("dt", &self.dt)
            .field("opts", &self.opts)
            .finish()
    }
}

impl Stepper {
    /// Builds coefficient sets and factorizations up front, so solver
    /// configuration errors surface here rather than mid-run.
    pub fn new(spec: TimeStepperSpec, model: SweModel, dt: f64, opts: StepperOptions) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::config(format!("dt must be positive, got {dt}")));
        }
        if opts.workers == 0 {
            return Err(Error::config("at least one worker is required"));
        }
        let mut s = Stepper {
            spec,
            model,
            dt,
            executor: None,
            cache: FactorCache::new(),
            prepared: HashMap::new(),
            timing: TimingBreakdown::default(),
            max_residue: 0.0,
            opts,
        };
        let h = s.linear_substep();
        match spec.linear_method {
            Method::Rexi => {
                let psi = if spec.is_etdrk() { 3 } else { 1 };
                s.prepare_rexi(h, psi)?;
            }
            Method::Irk => {
                s.cache.get_or_build(
                    &s.model,
                    ShiftedSolveSpec::new(spec.linear_group, h, Complex64::new(-2.0, 0.0))?,
                )?;
            }
            _ => {}
        }
        Ok(s)
    }

    pub fn from_id(id: &str, model: SweModel, dt: f64, opts: StepperOptions) -> Result<Self> {
        Self::new(id.parse()?, model, dt, opts)
    }

    fn linear_substep(&self) -> f64 {
        match self.spec.split_version {
            Some(SplitVersion::Ver0) => 0.5 * self.dt,
            _ => self.dt,
        }
    }

    fn prepare_rexi(&mut self, h: f64, num_psi: usize) -> Result<()> {
        let contour = self.opts.rexi.contour(h)?;
        let coeffs = (0..num_psi)
            .map(|k| circle_contour_coeffs(FunctionId::from_order(k).expect("k <= 2"), &contour))
            .collect::<Result<Vec<_>>>()?;
        let solvers = self
            .cache
            .solvers_for(&self.model, self.spec.linear_group, h, coeffs[0].alphas())?;
        if self.executor.is_none() {
            self.executor = Some(RexiExecutor::new(contour.num_poles, self.opts.workers, self.opts.reduce)?);
        }
        self.prepared.insert(h.to_bits(), Prepared { coeffs, solvers });
        Ok(())
    }

    pub fn spec(&self) -> &TimeStepperSpec {
        &self.spec
    }

    pub fn model(&self) -> &SweModel {
        &self.model
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn options(&self) -> &StepperOptions {
        &self.opts
    }

    /// Accumulated timings since construction or the last reset.
    pub fn timing(&self) -> &TimingBreakdown {
        &self.timing
    }

    pub fn reset_timing(&mut self) {
        self.timing = TimingBreakdown::default();
    }

    /// Largest imaginary m = 0 residue discarded after a REXI sum.
    pub fn max_rexi_residue(&self) -> f64 {
        self.max_residue
    }

    /// Coefficients used for the linear substep, if REXI is involved.
    pub fn rexi_coefficients(&self) -> Option<&RexiCoefficients> {
        self.prepared
            .get(&self.linear_substep().to_bits())
            .map(|p| &p.coeffs[0])
    }

    pub fn step(&mut self, u: &PrognosticState) -> Result<PrognosticState> {
        let sw = Stopwatch::start();
        let out = self.step_inner(u);
        self.timing.overall += sw.elapsed();
        let out = out?;
        self.check_blowup(&out)?;
        Ok(out)
    }

    fn step_inner(&mut self, u: &PrognosticState) -> Result<PrognosticState> {
        let spec = self.spec;
        let dt = self.dt;
        if spec.is_etdrk() {
            return self.etdrk_step(u);
        }
        match spec.split_version {
            None => {
                let sw = Stopwatch::start();
                let model = &self.model;
                let out = erk_step(spec.order, &mut |s| model.tendency(spec.linear_group, s), u, dt);
                self.timing.nonlinearities += sw.elapsed();
                Ok(out)
            }
            Some(version) => {
                let this = RefCell::new(self);
                strang_split_step(
                    version,
                    &mut |s, h| this.borrow_mut().linear_step(s, h),
                    &mut |s, h| Ok(this.borrow_mut().remainder_step(s, h)),
                    u,
                    dt,
                )
            }
        }
    }

    fn remainder_step(&mut self, u: &PrognosticState, h: f64) -> PrognosticState {
        let sw = Stopwatch::start();
        let model = &self.model;
        let g = self.spec.remainder_group;
        let out = erk2_step(&mut |s| model.tendency(g, s), u, h);
        self.timing.nonlinearities += sw.elapsed();
        out
    }

    fn linear_step(&mut self, u: &PrognosticState, h: f64) -> Result<PrognosticState> {
        let g = self.spec.linear_group;
        match self.spec.linear_method {
            Method::Erk => {
                let model = &self.model;
                Ok(erk2_step(&mut |s| model.tendency(g, s), u, h))
            }
            Method::Irk => {
                let op = SweLinear {
                    model: &self.model,
                    group: g,
                    cache: &self.cache,
                };
                irk_cn_step(&op, u, h, 0.5)
            }
            Method::Rexi => {
                let betas = self.prepared[&h.to_bits()].coeffs[0].betas().to_vec();
                let inputs = [WeightedInput {
                    weights: &betas,
                    input: u,
                }];
                self.run_rexi(h, &inputs)
            }
            Method::Etdrk => unreachable!("etdrk is never the linear method"),
        }
    }

    fn run_rexi(&mut self, h: f64, inputs: &[WeightedInput<'_, PrognosticState>]) -> Result<PrognosticState> {
        let sw = Stopwatch::start();
        let prepared = self.prepared.get(&h.to_bits()).expect("substep prepared");
        let solvers = &prepared.solvers;
        let solve = |i: usize, b: &PrognosticState| solvers[i].solve(b);
        let exec = self.executor.as_ref().expect("executor prepared");
        let (out, residue) = exec.apply(&solve, inputs, &mut self.timing)?;
        self.max_residue = self.max_residue.max(residue);
        self.timing.rexi_total += sw.elapsed();
        Ok(out)
    }

    fn nonlinear(&mut self, u: &PrognosticState) -> PrognosticState {
        let sw = Stopwatch::start();
        let out = self.model.tendency(self.spec.remainder_group, u);
        self.timing.nonlinearities += sw.elapsed();
        out
    }

    fn etdrk_step(&mut self, u: &PrognosticState) -> Result<PrognosticState> {
        let dt = self.dt;
        let nu = self.nonlinear(u);
        let mut dt_nu = nu.clone();
        dt_nu.scale(dt);
        let (b0, b1, b2) = {
            let p = self.prepared.get(&dt.to_bits()).expect("substep prepared");
            (
                p.coeffs[0].betas().to_vec(),
                p.coeffs[1].betas().to_vec(),
                p.coeffs[2].betas().to_vec(),
            )
        };
        let a = self.run_rexi(
            dt,
            &[
                WeightedInput { weights: &b0, input: u },
                WeightedInput { weights: &b1, input: &dt_nu },
            ],
        )?;
        check_finite(&a, "first-half")?;
        let mut d = self.nonlinear(&a);
        d.sub_assign(&nu);
        d.scale(dt);
        let corr = self.run_rexi(dt, &[WeightedInput { weights: &b2, input: &d }])?;
        let mut out = a;
        out.add_assign(&corr);
        check_finite(&out, "second-half")?;
        Ok(out)
    }

    fn check_blowup(&self, u: &PrognosticState) -> Result<()> {
        check_finite(u, "end")?;
        let phi = self.model.transform().synthesis(&u.phi)?;
        if phi.max_abs() > DIVERGENCE_PHI_LIMIT {
            return Err(Error::Divergence {
                steps: 0,
                time: 0.0,
                position: None,
            });
        }
        Ok(())
    }
}

/// Outcome of [`integrate`].
#[derive(Debug, Clone)]
pub struct Integration {
    pub state: PrognosticState,
    pub steps: usize,
    pub time: f64,
}

/// Number of steps of size `dt` covering `t_end`; refuses horizons that
/// are not a whole multiple of `dt`.
pub fn step_count(t_end: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::config(format!("invalid horizon {t_end} s for dt {dt} s")));
    }
    let k = (t_end / dt).round();
    if (k * dt - t_end).abs() > 1e-9 * t_end.max(dt) {
        return Err(Error::config(format!(
            "horizon {t_end} s is not a multiple of dt {dt} s"
        )));
    }
    Ok(k as usize)
}

/// Steps `u0` to `t_end`, calling `observer(step, time, state)` for the
/// initial state and after every step. Divergence stops the run with the
/// failing step number and time.
pub fn integrate(
    stepper: &mut Stepper,
    u0: &PrognosticState,
    t_end: f64,
    observer: &mut dyn FnMut(usize, f64, &PrognosticState),
) -> Result<Integration> {
    let n = step_count(t_end, stepper.dt())?;
    let dt = stepper.dt();
    let mut u = u0.clone();
    observer(0, 0.0, &u);
    for k in 1..=n {
        u = stepper.step(&u).map_err(|e| match e {
            Error::Divergence { position, .. } => Error::Divergence {
                steps: k,
                time: k as f64 * dt,
                position,
            },
            other => other,
        })?;
        observer(k, k as f64 * dt, &u);
    }
    Ok(Integration {
        state: u,
        steps: n,
        time: n as f64 * dt,
    })
}

/// Convenience wrapper without an observer.
pub fn run(stepper: &mut Stepper, u0: &PrognosticState, t_end: f64) -> Result<PrognosticState> {
    Ok(integrate(stepper, u0, t_end, &mut |_, _, _| {})?.state)
}

