//! EF1 and EQ1 audits.
//!
//! Both criteria quantify over ordered pairs `(i, k)` of distinct re-sellers
//! with a non-empty bundle `A_k`, and ask whether removing the single best
//! item from `A_k` closes the gap:
//!
//! - EF1: `U_i(A_i) >= min_{p in A_k} U_i(A_k \ {p})`
//! - EQ1: `U_i(A_i) >= min_{p in A_k} U_k(A_k \ {p})`
//!
//! Pairs with an empty `A_k` are skipped; an empty `A_i` simply has value 0.

use serde::Serialize;

use crate::algorithms::search::{Decision, PairSearch};
use crate::instance::{self, Allocation, CardinalityBounds, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Ef1,
    Eq1,
}

/// The first violating ordered pair found, scanning `i` then `k` ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessWitness {
    /// Re-seller whose own utility is compared (the envier for EF1).
    pub reseller: usize,
    /// Re-seller whose bundle is reduced by one item.
    pub other: usize,
    /// Item whose removal leaves the smallest remainder.
    pub removed_item: usize,
    /// `U_i(A_i)`.
    pub own_value: f64,
    /// Value of `A_k` minus `removed_item`, valued per the criterion.
    pub remainder_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessVerdict {
    pub criterion: Criterion,
    pub satisfied: bool,
    pub witness: Option<FairnessWitness>,
}

pub fn check_ef1(inst: &Instance, alloc: &Allocation) -> FairnessVerdict {
    check(inst, alloc, Criterion::Ef1)
}

pub fn check_eq1(inst: &Instance, alloc: &Allocation) -> FairnessVerdict {
    check(inst, alloc, Criterion::Eq1)
}

/// Checks a single ordered pair; `None` means the pair is fine.
pub fn check_pair(
    inst: &Instance,
    alloc: &Allocation,
    criterion: Criterion,
    reseller: usize,
    other: usize,
) -> Option<FairnessWitness> {
    let own_value = inst.bundle_value(reseller, alloc.bundle(reseller));
    let valuer = match criterion {
        Criterion::Ef1 => reseller,
        Criterion::Eq1 => other,
    };
    let (removed_item, remainder_value) = best_removal(inst, valuer, alloc, other)?;
    (own_value < remainder_value).then_some(FairnessWitness {
        reseller,
        other,
        removed_item,
        own_value,
        remainder_value,
    })
}

fn check(inst: &Instance, alloc: &Allocation, criterion: Criterion) -> FairnessVerdict {
    let m = inst.resellers().min(alloc.len());
    for i in 0..m {
        for k in 0..m {
            if i == k {
                continue;
            }
            if let Some(w) = check_pair(inst, alloc, criterion, i, k) {
                return FairnessVerdict { criterion, satisfied: false, witness: Some(w) };
            }
        }
    }
    FairnessVerdict { criterion, satisfied: true, witness: None }
}

/// Minimum over `p in A_k` of `valuer`'s value for `A_k \ {p}`, summed
/// directly in ascending order; ties keep the lowest item. `None` for an
/// empty bundle.
fn best_removal(inst: &Instance, valuer: usize, alloc: &Allocation, other: usize) -> Option<(usize, f64)> {
    let bundle = alloc.bundle(other);
    let mut best: Option<(usize, f64)> = None;
    for &p in bundle {
        let rest: f64 = bundle.iter().filter(|&&q| q != p).map(|&q| inst.weight(valuer, q)).fold(0.0, |acc, w| acc + w);
        if best.is_none_or(|(_, v)| rest < v) {
            best = Some((p, rest));
        }
    }
    best
}

/// Result of [`eq1_exists`].
#[derive(Debug, Clone, PartialEq)]
pub enum Eq1Existence {
    Exists(Allocation),
    NotExists,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eq1Search {
    pub outcome: Eq1Existence,
    pub nodes_expanded: u64,
}

/// Exhaustive search for a feasible EQ1 allocation.
///
/// Products are decided in index order and, within a product, re-sellers in
/// index order with "assign" tried before "skip". Branches that can no
/// longer meet a bound are cut. The first EQ1 allocation reached is returned,
/// so the witness is deterministic. `budget` caps decision nodes.
pub fn eq1_exists(inst: &Instance, b: &CardinalityBounds, budget: u64) -> Eq1Search {
    let mut search = PairSearch::new(inst.resellers(), inst.products(), *b, budget);
    let mut found = None;
    let complete = search.run(&mut |_, _| true, &mut |alloc: &Allocation| {
        if check_eq1(inst, alloc).satisfied {
            found = Some(alloc.clone());
            Decision::Stop
        } else {
            Decision::Continue
        }
    });
    let outcome = match (found, complete) {
        (Some(a), _) => Eq1Existence::Exists(a),
        (None, true) => Eq1Existence::NotExists,
        (None, false) => Eq1Existence::BudgetExhausted,
    };
    Eq1Search { outcome, nodes_expanded: search.nodes_expanded() }
}

/// Per-re-seller utilities plus both verdicts, for audit output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessAudit {
    pub utilities: Vec<f64>,
    pub ef1: FairnessVerdict,
    pub eq1: FairnessVerdict,
}

pub fn audit(inst: &Instance, alloc: &Allocation) -> FairnessAudit {
    FairnessAudit {
        utilities: instance::utilities(inst, alloc),
        ef1: check_ef1(inst, alloc),
        eq1: check_eq1(inst, alloc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::check_feasibility;

    fn table_c() -> Instance {
        Instance::from_rows(&[vec![7.0, 1.0, 2.0], vec![5.5, 2.0, 2.5], vec![5.0, 4.0, 1.0]]).unwrap()
    }

    fn table_a(alpha: f64) -> Instance {
        let mut rows = vec![vec![alpha / 4.0, alpha / 4.0, alpha / 4.0, alpha / 4.0, 10.0 - alpha]; 4];
        rows.push(vec![2.0; 5]);
        Instance::from_rows(&rows).unwrap()
    }

    #[test]
    fn theorem_three_split_violates_ef1() {
        let inst = Instance::from_rows(&[vec![1.0, 1.0, 2.2, 2.2], vec![0.2, 0.2, 3.0, 3.0]]).unwrap();
        let alloc = Allocation::from_bundles(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let v = check_ef1(&inst, &alloc);
        assert!(!v.satisfied);
        let w = v.witness.unwrap();
        assert_eq!((w.reseller, w.other), (0, 1));
        assert_eq!(w.own_value, 2.0);
        assert_eq!(w.remainder_value, 2.2);
        // re-checking the witness pair alone reproduces it
        assert!(check_pair(&inst, &alloc, Criterion::Ef1, 0, 1).is_some());
    }

    #[test]
    fn identical_bundles_are_envy_free() {
        let inst = Instance::from_rows(&[vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]]).unwrap();
        let alloc = Allocation::from_bundles(3, vec![vec![0, 2], vec![0, 2]]).unwrap();
        assert!(check_ef1(&inst, &alloc).satisfied);
        assert!(check_eq1(&inst, &alloc).satisfied);
    }

    #[test]
    fn table_c_seal_allocation_is_fair() {
        let inst = table_c();
        let alloc = Allocation::from_bundles(3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        assert!(check_ef1(&inst, &alloc).satisfied);
        assert!(check_eq1(&inst, &alloc).satisfied);
    }

    #[test]
    fn table_a_witness_violates_eq1() {
        let inst = table_a(4.0);
        let b = CardinalityBounds::uniform(3);
        let alloc = check_feasibility(5, 5, &b).witness.unwrap();
        let v = check_eq1(&inst, &alloc);
        assert!(!v.satisfied);
        let w = v.witness.unwrap();
        assert!(check_pair(&inst, &alloc, Criterion::Eq1, w.reseller, w.other).is_some());
    }

    #[test]
    fn empty_other_bundle_is_skipped() {
        let inst = Instance::from_rows(&[vec![0.0, 0.0], vec![5.0, 5.0]]).unwrap();
        let alloc = Allocation::from_bundles(2, vec![vec![], vec![0]]).unwrap();
        // u1 vs u2: remainder after removing the only item is 0
        assert!(check_ef1(&inst, &alloc).satisfied);
        assert!(check_eq1(&inst, &alloc).satisfied);
        let alloc = Allocation::from_bundles(2, vec![vec![], vec![0, 1]]).unwrap();
        let v = check_eq1(&inst, &alloc);
        assert_eq!(v.witness.map(|w| (w.reseller, w.other, w.remainder_value)), Some((0, 1, 5.0)));
    }

    #[test]
    fn eq1_table_a() {
        let b = CardinalityBounds::uniform(3);
        let r = eq1_exists(&table_a(4.0), &b, u64::MAX);
        assert_eq!(r.outcome, Eq1Existence::NotExists);
        let inst = table_a(8.0);
        let r = eq1_exists(&inst, &b, u64::MAX);
        let Eq1Existence::Exists(w) = r.outcome else { panic!("expected a witness") };
        assert!(crate::instance::is_feasible_allocation(&inst, &w, &b).is_feasible());
        assert!(check_eq1(&inst, &w).satisfied);
    }

    #[test]
    fn eq1_identity_instance() {
        let inst = Instance::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = eq1_exists(&inst, &CardinalityBounds::uniform(1), 1000);
        assert_eq!(r.outcome, Eq1Existence::Exists(Allocation::from_bundles(2, vec![vec![0], vec![1]]).unwrap()));
    }

    #[test]
    fn eq1_budget_is_reported() {
        let r = eq1_exists(&table_a(4.0), &CardinalityBounds::uniform(3), 10);
        assert_eq!(r.outcome, Eq1Existence::BudgetExhausted);
        assert!(r.nodes_expanded <= 10);
    }
}
