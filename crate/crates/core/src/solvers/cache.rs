use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;

use super::{ShiftedSolveSpec, ShiftedSolver};
use crate::error::Result;
use crate::swe::SweModel;

type Key = (bool, bool, u64, u64, u64, u64);

fn key(model: &SweModel, spec: &ShiftedSolveSpec) -> Key {
    (
        spec.group.lg,
        spec.group.lc,
        spec.dt.to_bits(),
        spec.alpha.re.to_bits(),
        spec.alpha.im.to_bits(),
        model.mean_geopotential().to_bits(),
    )
}

/// Factorizations keyed by `(group, Δt, α, Φ̄)` for one model grid.
#[derive(Debug, Default)]
pub struct FactorCache {
    map: RwLock<HashMap<Key, Arc<ShiftedSolver>>>,
}

impl FactorCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_build(&self, model: &SweModel, spec: ShiftedSolveSpec) -> Result<Arc<ShiftedSolver>> {
        let k = key(model, &spec);
        if let Some(s) = self.map.read().expect("factor cache poisoned").get(&k) {
            return Ok(Arc::clone(s));
        }
        let s = Arc::new(ShiftedSolver::new(model, spec)?);
        self.map
            .write()
            .expect("factor cache poisoned")
            .insert(k, Arc::clone(&s));
        Ok(s)
    }

    /// Solvers for every pole of a coefficient set, in index order.
    pub fn solvers_for(
        &self,
        model: &SweModel,
        group: crate::swe::TermGroup,
        dt: f64,
        alphas: &[Complex64],
    ) -> Result<Vec<Arc<ShiftedSolver>>> {
        alphas
            .iter()
            .map(|&a| self.get_or_build(model, ShiftedSolveSpec::new(group, dt, a)?))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("factor cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.map.write().expect("factor cache poisoned").clear();
    }
}
