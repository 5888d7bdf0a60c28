mod common;

use common::{all_feasible, any_bounds};
use fair_alloc::instance::{check_feasibility, is_feasible_allocation, screen_bounds, InfeasibleReason};
use fair_alloc::{CardinalityBounds, Instance};
use proptest::prelude::*;

#[test]
fn agrees_with_brute_force_on_every_small_case() {
    for m in 1..=4 {
        for n in 1..=4 {
            for l1 in 0..=n + 1 {
                for l2 in l1..=n + 1 {
                    for r1 in 0..=m + 1 {
                        for r2 in r1..=m + 1 {
                            let b = CardinalityBounds { l1, l2, r1, r2 };
                            let report = check_feasibility(m, n, &b);
                            let exists = l2 <= n && r2 <= m && !all_feasible(m, n, &b).is_empty();
                            assert_eq!(report.feasible, exists, "{m}x{n} {b}");
                            assert_eq!(report.feasible, report.reason.is_none());
                        }
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn witness_is_feasible((m, n, b) in (1usize..=5, 1usize..=5).prop_flat_map(|(m, n)| (Just(m), Just(n), any_bounds(m, n)))) {
        let report = check_feasibility(m, n, &b);
        let inst = Instance::new(m, n, vec![1.0; m * n]).unwrap();
        match report.witness {
            Some(w) => {
                prop_assert!(report.feasible);
                prop_assert!(is_feasible_allocation(&inst, &w, &b).is_feasible());
            }
            None => prop_assert!(!report.feasible),
        }
        if let Some(reason) = screen_bounds(m, n, &b) {
            prop_assert!(!report.feasible);
            prop_assert_eq!(report.reason, Some(reason));
        }
    }
}

#[test]
fn screen_reasons() {
    let r = |m, n, l1, l2, r1, r2| check_feasibility(m, n, &CardinalityBounds { l1, l2, r1, r2 }).reason;
    assert_eq!(r(3, 3, 2, 2, 2, 2), None);
    assert_eq!(r(3, 3, 1, 4, 1, 3), Some(InfeasibleReason::L2ExceedsN));
    assert_eq!(r(3, 3, 1, 3, 1, 4), Some(InfeasibleReason::R2ExceedsM));
    assert_eq!(r(4, 2, 2, 2, 0, 3), Some(InfeasibleReason::IntervalEmpty));
}
