use std::collections::HashMap;
use std::ops::Range;

use num_complex::Complex64;

use crate::error::Result;
use crate::integrators::StateVector;

/// Split point of the canonical reduction tree over `[lo, hi)`.
#[inline]
pub(crate) fn split(lo: usize, hi: usize) -> usize {
    lo + (hi - lo) / 2
}

/// Pairwise sum of `leaf(lo..hi)` following the canonical tree. The
/// association depends only on the index range, never on who evaluates it.
pub fn tree_sum<S: StateVector>(
    lo: usize,
    hi: usize,
    leaf: &mut impl FnMut(usize) -> Result<S>,
) -> Result<S> {
    debug_assert!(hi > lo);
    if hi - lo == 1 {
        return leaf(lo);
    }
    let mid = split(lo, hi);
    let mut a = tree_sum(lo, mid, leaf)?;
    let b = tree_sum(mid, hi, leaf)?;
    a.add_assign(&b);
    Ok(a)
}

/// Values of the maximal canonical subtrees lying inside `owned`.
pub(crate) fn owned_subtrees<S: StateVector>(
    lo: usize,
    hi: usize,
    owned: &Range<usize>,
    leaf: &mut impl FnMut(usize) -> Result<S>,
    out: &mut Vec<((usize, usize), S)>,
) -> Result<()> {
    if hi <= owned.start || lo >= owned.end {
        return Ok(());
    }
    if owned.start <= lo && hi <= owned.end {
        out.push(((lo, hi), tree_sum(lo, hi, leaf)?));
        return Ok(());
    }
    let mid = split(lo, hi);
    owned_subtrees(lo, mid, owned, leaf, out)?;
    owned_subtrees(mid, hi, owned, leaf, out)
}

/// Coordinator side: rebuild the canonical sum from worker subtrees.
pub(crate) fn combine<S: StateVector>(
    lo: usize,
    hi: usize,
    nodes: &mut HashMap<(usize, usize), S>,
) -> S {
    if let Some(v) = nodes.remove(&(lo, hi)) {
        return v;
    }
    assert!(hi - lo > 1, "missing leaf {lo} in worker results");
    let mid = split(lo, hi);
    let mut a = combine(lo, mid, nodes);
    let b = combine(mid, hi, nodes);
    a.add_assign(&b);
    a
}

/// One right-hand side broadcast to every term together with its
/// per-term weights.
#[derive(Debug, Clone, Copy)]
pub struct WeightedInput<'a, S> {
    pub weights: &'a [Complex64],
    pub input: &'a S,
}

/// `Σ_k w_k[n] · v_k`, the right-hand side of term n.
pub fn term_rhs<S: StateVector>(n: usize, inputs: &[WeightedInput<'_, S>]) -> S {
    let mut rhs = inputs[0].input.clone();
    rhs.scale_complex(inputs[0].weights[n]);
    for w in &inputs[1..] {
        rhs.axpy_complex(w.weights[n], w.input);
    }
    rhs
}
