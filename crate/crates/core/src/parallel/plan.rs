use std::ops::Range;

/// Contiguous, balanced assignment of REXI terms to workers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkPlan {
    assignments: Vec<Range<usize>>,
    num_terms: usize,
}

impl WorkPlan {
    pub fn num_workers(&self) -> usize {
        self.assignments.len()
    }

    pub fn num_terms(&self) -> usize {
        self.num_terms
    }

    /// Term index range (0-based) of each worker; empty for idle workers.
    pub fn assignments(&self) -> &[Range<usize>] {
        &self.assignments
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.assignments.iter().map(|r| r.len()).collect()
    }
}

/// Split `n` terms over `k` workers; the first `n mod k` workers get one
/// extra term.
///
/// # Panics
/// If `n` or `k` is zero.
pub fn distribute_terms(n: usize, k: usize) -> WorkPlan {
    assert!(n >= 1 && k >= 1, "need at least one term and one worker");
    let base = n / k;
    let extra = n % k;
    let mut start = 0;
    let assignments = (0..k)
        .map(|w| {
            let len = base + usize::from(w < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect();
    WorkPlan {
        assignments,
        num_terms: n,
    }
}
