mod common;

use common::all_feasible;
use fair_alloc::algorithms::exact_nash_oracle;
use fair_alloc::milp::{
    build_nashmax_model, cut_anchors, log_cut_bound, lp_string, parse_solution, scale_utilities, LogCut,
};
use fair_alloc::{CardinalityBounds, Instance};

#[test]
fn cuts_are_tight_at_every_integer() {
    for u in 1..=1000u32 {
        let v = f64::from(u);
        assert!((log_cut_bound(v) - v.ln()).abs() <= 1e-9, "u = {u}");
    }
    assert_eq!(cut_anchors().count(), 500);
}

#[test]
fn single_chord_example() {
    let c = LogCut::new(0, 3);
    assert!((c.at(4.0) - 4f64.ln()).abs() < 1e-12);
    assert!((c.at(3.0) - 3f64.ln()).abs() < 1e-12);
}

fn fixed_instances() -> Vec<(Instance, CardinalityBounds)> {
    let rows = |r: &[&[f64]]| Instance::from_rows(&r.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap();
    vec![
        (rows(&[&[3.0, 1.0], &[1.0, 3.0]]), CardinalityBounds::uniform(1)),
        (rows(&[&[5.0, 2.0], &[4.0, 4.0]]), CardinalityBounds { l1: 1, l2: 2, r1: 1, r2: 2 }),
        (rows(&[&[9.0, 1.0], &[2.0, 7.0]]), CardinalityBounds { l1: 1, l2: 2, r1: 0, r2: 2 }),
        (rows(&[&[1.0, 1.0], &[1.0, 1.0]]), CardinalityBounds::uniform(2)),
        (rows(&[&[7.0, 1.0, 2.0], &[5.5, 2.0, 2.5]]), CardinalityBounds { l1: 1, l2: 2, r1: 1, r2: 1 }),
        (rows(&[&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]]), CardinalityBounds { l1: 1, l2: 3, r1: 1, r2: 2 }),
        (rows(&[&[6.0, 3.0, 1.0], &[2.0, 2.0, 6.0]]), CardinalityBounds { l1: 2, l2: 2, r1: 1, r2: 2 }),
        (rows(&[&[4.0, 4.0, 2.0], &[1.0, 8.0, 1.0]]), CardinalityBounds { l1: 1, l2: 2, r1: 0, r2: 1 }),
    ]
}

/// Solves the model by trying every binary assignment; returns the best
/// objective and the first assignment reaching it (row-major bit order).
fn solve_by_enumeration(model: &fair_alloc::milp::MilpModel, m: usize, n: usize) -> (f64, Vec<bool>) {
    let mut best: Option<(f64, Vec<bool>)> = None;
    for mask in 0u32..1 << (m * n) {
        let x: Vec<bool> = (0..m * n).map(|k| mask >> k & 1 == 1).collect();
        if let Some(v) = model.objective_at(&x) {
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, x));
            }
        }
    }
    best.expect("fixed instances are feasible")
}

#[test]
fn model_optimum_is_the_nash_optimum_of_the_scaled_instance() {
    for (inst, b) in fixed_instances() {
        let scaled = scale_utilities(&inst).unwrap();
        let model = build_nashmax_model(&scaled, &b);
        let (m, n) = (inst.resellers(), inst.products());
        let (objective, x) = solve_by_enumeration(&model, m, n);

        let oracle = exact_nash_oracle(&scaled.to_instance(), &b, u64::MAX);
        assert!(oracle.exhaustive);
        // integral utilities: the model value is exactly sum ln u_i
        assert!((objective - oracle.best_nash_log).abs() <= 1e-9, "{inst:?} {b}");
        // the decoded allocation is optimal for the scaled utilities
        let decoded = fair_alloc::Allocation::from_matrix(m, n, &x);
        let value = fair_alloc::metrics::nash_welfare(&scaled.to_instance(), &decoded).log;
        assert!((value - oracle.best_nash_log).abs() <= 1e-9);
        assert!(all_feasible(m, n, &b).contains(&decoded));
    }
}

#[test]
fn scaling_preserves_the_argmax_when_free_of_ties() {
    for (inst, b) in fixed_instances().into_iter().take(3).chain(fixed_instances().into_iter().skip(4)) {
        let raw = exact_nash_oracle(&inst, &b, u64::MAX).best_allocation.unwrap();
        let scaled = exact_nash_oracle(&scale_utilities(&inst).unwrap().to_instance(), &b, u64::MAX);
        assert_eq!(raw, scaled.best_allocation.unwrap(), "{inst:?}");
    }
}

#[test]
fn table_c_model_counts() {
    let (inst, b) = fair_alloc::datagen::paper_instance("table-c").unwrap();
    let model = build_nashmax_model(&scale_utilities(&inst).unwrap(), &b);
    assert_eq!(model.binary_count(), 9);
    assert_eq!(model.continuous_count(), 3);
    assert_eq!(model.cuts().len(), 1500);
    let text = lp_string(&model);
    assert_eq!(text.matches(" cut_").count(), 1500);
    assert_eq!(text.lines().skip_while(|l| *l != "Binaries").skip(1).take_while(|l| *l != "End").count(), 9);
}

#[test]
fn lp_round_trip_through_a_solution_file() {
    let (inst, b) = fair_alloc::datagen::paper_instance("table-c").unwrap();
    let model = build_nashmax_model(&scale_utilities(&inst).unwrap(), &b);
    let solution = "x_0_0 1\nx_0_1 0\nx_0_2 1\nx_1_0 0\nx_1_1 1\nx_1_2 1\nx_2_0 1\nx_2_1 1\nx_2_2 0\n";
    let a = parse_solution(solution, &model).unwrap();
    assert_eq!(a.to_vecs(), vec![vec![0, 2], vec![1, 2], vec![0, 1]]);
}
