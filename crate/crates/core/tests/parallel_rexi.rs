mod common;

use common::{earth_model, random_state, rng};
use num_complex::Complex64;
use proptest::prelude::*;
use swe_rexi::integrators::rexi_step;
use swe_rexi::integrators::SweLinear;
use swe_rexi::parallel::{
    amdahl_report, distribute_terms, parallel_rexi_apply, tree_sum, ReduceMode, RexiExecutor, TimingBreakdown,
    TimingRecord, WeightedInput,
};
use swe_rexi::rexi::{circle_contour_coeffs, FunctionId, RexiCoefficients, RexiConfig};
use swe_rexi::solvers::FactorCache;
use swe_rexi::swe::{PrognosticState, SweModel, TermGroup};
use swe_rexi::Error;

const PHIBAR: f64 = 1.0e4 * 9.80616;

fn setup(trunc: usize, n: usize, seed: u64) -> (SweModel, PrognosticState, RexiCoefficients) {
    let model = earth_model(trunc, PHIBAR);
    let mut r = rng(seed);
    let u = random_state(&mut r, trunc, 1e3, 1e-5);
    let contour = RexiConfig::default().with_num_poles(n).contour(600.0).unwrap();
    (model, u, circle_contour_coeffs(FunctionId::Psi0, &contour).unwrap())
}

#[test]
fn distribution_examples() {
    assert_eq!(distribute_terms(128, 128).sizes(), vec![1; 128]);
    assert_eq!(distribute_terms(128, 3).sizes(), vec![43, 43, 42]);
    let p = distribute_terms(4, 6);
    assert_eq!(p.sizes(), vec![1, 1, 1, 1, 0, 0]);
    assert_eq!(p.num_workers(), 6);
    assert_eq!(p.num_terms(), 4);
}

proptest! {
    #[test]
    fn distribution_partitions_and_balances(n in 1usize..300, k in 1usize..40) {
        let p = distribute_terms(n, k);
        let mut next = 0;
        for r in p.assignments() {
            prop_assert_eq!(r.start, next);
            next = r.end;
        }
        prop_assert_eq!(next, n);
        let s = p.sizes();
        prop_assert!(s.iter().max().unwrap() - s.iter().min().unwrap() <= 1);
    }

    #[test]
    fn tree_sum_is_exact_for_integers(n in 1usize..200) {
        let v = tree_sum(0, n, &mut |i| Ok(Complex64::new(i as f64, 1.0))).unwrap();
        prop_assert_eq!(v, Complex64::new((n * (n - 1) / 2) as f64, n as f64));
    }
}

#[test]
fn worker_counts_are_bitwise_equal_to_serial() {
    let (model, u, coeffs) = setup(21, 64, 51);
    let cache = FactorCache::new();
    let op = SweLinear {
        model: &model,
        group: TermGroup::L,
        cache: &cache,
    };
    let serial = rexi_step(&op, &u, 600.0, &coeffs).unwrap();
    for k in [1, 2, 3, 4, 8, 64, 100] {
        let ex = RexiExecutor::new(coeffs.len(), k, ReduceMode::FixedTree).unwrap();
        let (out, timing) = parallel_rexi_apply(&model, TermGroup::L, &u, 600.0, &coeffs, &ex, &cache).unwrap();
        assert_eq!(out, serial, "K = {k}");
        timing.check_closure().unwrap();
    }
}

#[test]
fn repeated_runs_are_identical() {
    let (model, u, coeffs) = setup(16, 32, 52);
    let cache = FactorCache::new();
    let ex = RexiExecutor::new(coeffs.len(), 4, ReduceMode::FixedTree).unwrap();
    let (first, _) = parallel_rexi_apply(&model, TermGroup::L, &u, 600.0, &coeffs, &ex, &cache).unwrap();
    for _ in 0..20 {
        let (again, t) = parallel_rexi_apply(&model, TermGroup::L, &u, 600.0, &coeffs, &ex, &cache).unwrap();
        assert_eq!(again, first);
        t.check_closure().unwrap();
    }
}

#[test]
fn unordered_reduce_is_close() {
    let (model, u, coeffs) = setup(16, 32, 53);
    let cache = FactorCache::new();
    let fixed = RexiExecutor::new(coeffs.len(), 1, ReduceMode::FixedTree).unwrap();
    let (want, _) = parallel_rexi_apply(&model, TermGroup::L, &u, 600.0, &coeffs, &fixed, &cache).unwrap();
    for k in [1, 3, 8] {
        let ex = RexiExecutor::new(coeffs.len(), k, ReduceMode::Unordered).unwrap();
        let (got, _) = parallel_rexi_apply(&model, TermGroup::L, &u, 600.0, &coeffs, &ex, &cache).unwrap();
        let mut d = got.clone();
        d.sub_assign(&want);
        for (df, wf) in d.fields().into_iter().zip(want.fields()) {
            let rel = df.max_abs() / wf.max_abs();
            assert!(rel <= 1e-13, "K = {k}: {rel:e}");
        }
    }
}

#[test]
fn worker_panic_names_failed_terms() {
    let ex = RexiExecutor::new(8, 2, ReduceMode::FixedTree).unwrap();
    let w = vec![Complex64::new(1.0, 0.0); 8];
    let input = Complex64::new(1.0, 0.0);
    let inputs = [WeightedInput {
        weights: &w,
        input: &input,
    }];
    let solve = |i: usize, b: &Complex64| {
        if i == 6 {
            panic!("factorization missing");
        }
        *b
    };
    let mut t = TimingBreakdown::default();
    match ex.apply(&solve, &inputs, &mut t) {
        Err(Error::Worker { terms, detail }) => {
            assert_eq!(terms, vec![4, 5, 6, 7]);
            assert!(detail.contains("factorization missing"));
        }
        other => panic!("expected worker error, got {other:?}"),
    }
    let (ok, _) = ex.apply(&|_, b: &Complex64| *b, &inputs, &mut t).unwrap();
    assert_eq!(ok, Complex64::new(8.0, 0.0));
}

#[test]
fn mismatched_plan_is_a_config_error() {
    let (model, u, coeffs) = setup(8, 16, 54);
    let ex = RexiExecutor::new(10, 1, ReduceMode::FixedTree).unwrap();
    let r = parallel_rexi_apply(&model, TermGroup::L, &u, 600.0, &coeffs, &ex, &FactorCache::new());
    assert!(matches!(r, Err(Error::Config(_))));
}

fn breakdown(overall: f64, term_solves: f64) -> TimingBreakdown {
    TimingBreakdown {
        overall,
        nonlinearities: overall - term_solves,
        rexi_total: term_solves,
        broadcast: 0.0,
        term_solves,
        reduce: 0.0,
    }
}

#[test]
fn amdahl_synthetic_cases() {
    // all serial: nothing to gain
    let r = amdahl_report(&[(1, breakdown(10.0, 0.0)), (8, breakdown(10.0, 0.0))], None).unwrap();
    assert_eq!(r.serial_fraction, 1.0);
    assert!(r.rows.iter().all(|x| (x.projected_speedup - 1.0).abs() < 1e-15));
    // no serial part: projection K
    let r = amdahl_report(&[(1, breakdown(8.0, 8.0)), (4, breakdown(2.0, 2.0)), (8, breakdown(1.0, 1.0))], None).unwrap();
    assert_eq!(r.serial_fraction, 0.0);
    for row in &r.rows {
        assert!((row.projected_speedup - row.workers as f64).abs() < 1e-12);
        assert!((row.measured_speedup - row.workers as f64).abs() < 1e-12);
    }
    // 20% serial: 1/(0.2 + 0.8/4)
    let r = amdahl_report(&[(1, breakdown(10.0, 8.0)), (4, breakdown(4.0, 2.0))], None).unwrap();
    assert!((r.rows[1].projected_speedup - 2.5).abs() < 1e-12);
    assert!((r.max_speedup - 5.0).abs() < 1e-12);
    // one hardware thread caps the usable concurrency
    let r = amdahl_report(&[(1, breakdown(10.0, 8.0)), (8, breakdown(10.0, 8.0))], Some(1)).unwrap();
    assert!((r.rows[1].projected_speedup - 1.0).abs() < 1e-12);
    assert!(amdahl_report(&[(2, breakdown(1.0, 1.0))], None).is_none());
}

#[test]
fn timing_closure_and_json() {
    let good = TimingBreakdown {
        overall: 2.0,
        nonlinearities: 0.5,
        rexi_total: 1.0,
        broadcast: 0.01,
        term_solves: 0.98,
        reduce: 0.04,
    };
    good.check_closure().unwrap();
    let mut bad = good;
    bad.term_solves = 1.2;
    assert!(bad.check_closure().is_err());
    bad = good;
    bad.rexi_total = 3.0;
    assert!(bad.check_closure().is_err());
    bad = good;
    bad.reduce = -1e-9;
    assert!(bad.check_closure().is_err());

    let m = TimingBreakdown::min_over(&[good, TimingBreakdown { overall: 1.5, ..good }]).unwrap();
    assert_eq!(m.overall, 1.5);
    let rec = TimingRecord {
        breakdown: good,
        workers: 4,
        num_terms: 128,
        ensemble: 2,
    };
    let v: serde_json::Value = serde_json::from_str(&rec.to_json()).unwrap();
    for key in ["overall", "nonlinearities", "rexi_total", "broadcast", "term_solves", "reduce", "K", "N", "ensemble"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["K"], 4);
}

#[test]
fn stepper_timings_close_for_every_worker_count() {
    use swe_rexi::integrators::{Stepper, StepperOptions};
    let model = earth_model(16, PHIBAR);
    let u = random_state(&mut rng(55), 16, 1e2, 1e-5);
    let mut outs = Vec::new();
    for k in [1, 2, 4, 8] {
        let opts = StepperOptions {
            rexi: RexiConfig::default(),
            workers: k,
            reduce: ReduceMode::FixedTree,
        };
        let mut s = Stepper::from_id("lg_rexi_lc_n_erk_ver1", model.clone(), 600.0, opts).unwrap();
        let mut v = u.clone();
        for _ in 0..3 {
            v = s.step(&v).unwrap();
        }
        s.timing().check_closure().unwrap();
        assert!(s.timing().nonlinearities > 0.0 && s.timing().term_solves > 0.0);
        outs.push(v);
    }
    assert!(outs.windows(2).all(|w| w[0] == w[1]));
}
