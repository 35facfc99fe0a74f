use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Mutex;

use rayon::prelude::*;

use super::timing::Stopwatch;
use super::tree::{combine, owned_subtrees, term_rhs, tree_sum, WeightedInput};
use super::{distribute_terms, TimingBreakdown, WorkPlan};
use crate::error::{Error, Result};
use crate::integrators::StateVector;
use crate::rexi::RexiCoefficients;
use crate::solvers::FactorCache;
use crate::swe::{PrognosticState, SweModel, TermGroup};

/// How worker partial sums are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReduceMode {
    /// Canonical pairwise tree over term indices; bitwise independent of
    /// the worker count and of scheduling.
    #[default]
    FixedTree,
    /// Workers sum their range left to right and merge in completion
    /// order. Faster to reason about for throughput runs, not reproducible.
    Unordered,
}

/// Fork-join evaluation of `Σ_n solve_n(rhs_n)` over a worker pool.
pub struct RexiExecutor {
    plan: WorkPlan,
    pool: Option<rayon::ThreadPool>,
    reduce: ReduceMode,
}

impl std::fmt::Debug for RexiExecutor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RexiExecutor")
            .field("plan", &self.plan)
            .field("reduce", &self.reduce)
            .finish()
    }
}

type Partial<S> = Vec<((usize, usize), S)>;

impl RexiExecutor {
    pub fn new(num_terms: usize, workers: usize, reduce: ReduceMode) -> Result<Self> {
        if num_terms == 0 || workers == 0 {
            return Err(Error::config("REXI execution needs at least one term and one worker"));
        }
        let plan = distribute_terms(num_terms, workers);
        let pool = if workers > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .thread_name(|i| format!("rexi-worker-{i}"))
                    .build()
                    .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?,
            )
        } else {
            None
        };
        Ok(RexiExecutor { plan, pool, reduce })
    }

    pub fn serial(num_terms: usize) -> Result<Self> {
        Self::new(num_terms, 1, ReduceMode::FixedTree)
    }

    pub fn plan(&self) -> &WorkPlan {
        &self.plan
    }

    pub fn workers(&self) -> usize {
        self.plan.num_workers()
    }

    pub fn reduce_mode(&self) -> ReduceMode {
        self.reduce
    }

    /// Sum of `solve(n, Σ_k w_k[n] v_k)` over all terms, followed by
    /// [`StateVector::finish_real`]. Returns the sum and the discarded
    /// residue; adds broadcast, term-solve and reduce times to `timing`.
    pub fn apply<S: StateVector>(
        &self,
        solve: &(dyn Fn(usize, &S) -> S + Sync),
        inputs: &[WeightedInput<'_, S>],
        timing: &mut TimingBreakdown,
    ) -> Result<(S, f64)> {
        let n = self.plan.num_terms();
        for w in inputs {
            assert_eq!(w.weights.len(), n, "weights do not match the work plan");
        }
        // broadcast: inputs are published to workers by reference
        let sw = Stopwatch::start();
        let shared: &[WeightedInput<'_, S>] = inputs;
        timing.broadcast += sw.elapsed();

        let sw = Stopwatch::start();
        let leaf = |i: usize| -> Result<S> { Ok(solve(i, &term_rhs(i, shared))) };
        let worker = |range: &std::ops::Range<usize>| -> Result<Partial<S>> {
            if range.is_empty() {
                return Ok(Vec::new());
            }
            let run = || -> Result<Partial<S>> {
                let mut leaf = leaf;
                match self.reduce {
                    ReduceMode::FixedTree => {
                        let mut out = Vec::new();
                        owned_subtrees(0, n, range, &mut leaf, &mut out)?;
                        Ok(out)
                    }
                    ReduceMode::Unordered => {
                        let mut acc = leaf(range.start)?;
                        for i in range.start + 1..range.end {
                            acc.add_assign(&leaf(i)?);
                        }
                        Ok(vec![((range.start, range.end), acc)])
                    }
                }
            };
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
                let detail = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "worker panicked".into());
                Err(Error::Worker {
                    terms: range.clone().collect(),
                    detail,
                })
            })
        };

        let results: Vec<Result<Partial<S>>> = match (&self.pool, self.reduce) {
            (None, _) => self.plan.assignments().iter().map(worker).collect(),
            (Some(pool), ReduceMode::FixedTree) => {
                pool.install(|| self.plan.assignments().par_iter().map(worker).collect())
            }
            (Some(pool), ReduceMode::Unordered) => {
                // merge in completion order
                let acc: Mutex<Option<S>> = Mutex::new(None);
                let errs: Mutex<Vec<Error>> = Mutex::new(Vec::new());
                pool.install(|| {
                    self.plan.assignments().par_iter().for_each(|r| match worker(r) {
                        Ok(parts) => {
                            for (_, v) in parts {
                                let mut g = acc.lock().expect("reduce lock");
                                match g.as_mut() {
                                    Some(a) => a.add_assign(&v),
                                    None => *g = Some(v),
                                }
                            }
                        }
                        Err(e) => errs.lock().expect("reduce lock").push(e),
                    })
                });
                timing.term_solves += sw.elapsed();
                if let Some(e) = errs.into_inner().expect("reduce lock").into_iter().next() {
                    return Err(e);
                }
                let sw = Stopwatch::start();
                let mut sum = acc.into_inner().expect("reduce lock").expect("at least one term");
                let residue = sum.finish_real();
                timing.reduce += sw.elapsed();
                return Ok((sum, residue));
            }
        };
        timing.term_solves += sw.elapsed();

        let sw = Stopwatch::start();
        let mut nodes = HashMap::new();
        for r in results {
            nodes.extend(r?);
        }
        let mut sum = match self.reduce {
            ReduceMode::FixedTree => combine(0, n, &mut nodes),
            ReduceMode::Unordered => {
                let mut parts: Vec<_> = nodes.into_iter().collect();
                parts.sort_by_key(|p| p.0);
                let mut it = parts.into_iter().map(|p| p.1);
                let mut a = it.next().expect("at least one term");
                it.for_each(|b| a.add_assign(&b));
                a
            }
        };
        let residue = sum.finish_real();
        timing.reduce += sw.elapsed();
        Ok((sum, residue))
    }
}

/// Serial reference: canonical tree sum of `solve(n, rhs_n)`.
pub fn serial_rexi_sum<S: StateVector>(
    n: usize,
    solve: &mut impl FnMut(usize, &S) -> Result<S>,
    inputs: &[WeightedInput<'_, S>],
) -> Result<S> {
    let mut leaf = |i: usize| solve(i, &term_rhs(i, inputs));
    let mut sum = tree_sum(0, n, &mut leaf)?;
    sum.finish_real();
    Ok(sum)
}

/// One REXI application `Σ β_n (Δt·L + α_n)⁻¹ U` distributed over the
/// executor's workers; returns the new state and this call's timings.
pub fn parallel_rexi_apply(
    model: &SweModel,
    group: TermGroup,
    u: &PrognosticState,
    dt: f64,
    coeffs: &RexiCoefficients,
    executor: &RexiExecutor,
    cache: &FactorCache,
) -> Result<(PrognosticState, TimingBreakdown)> {
    if executor.plan().num_terms() != coeffs.len() {
        return Err(Error::config(format!(
            "work plan covers {} terms, coefficients have {}",
            executor.plan().num_terms(),
            coeffs.len()
        )));
    }
    let solvers = cache.solvers_for(model, group, dt, coeffs.alphas())?;
    let mut timing = TimingBreakdown::default();
    let sw = Stopwatch::start();
    let inputs = [WeightedInput {
        weights: coeffs.betas(),
        input: u,
    }];
    let solve = |i: usize, b: &PrognosticState| solvers[i].solve(b);
    let (out, _) = executor.apply(&solve, &inputs, &mut timing)?;
    timing.rexi_total = sw.elapsed();
    timing.overall = timing.rexi_total;
    Ok((out, timing))
}
