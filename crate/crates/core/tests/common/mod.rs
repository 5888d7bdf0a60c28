#![allow(dead_code)]

use fair_alloc::instance::check_feasibility;
use fair_alloc::{Allocation, CardinalityBounds, Instance};
use proptest::prelude::*;

/// Every feasible allocation, by plain nested enumeration of bundles
/// (re-seller by re-seller, bundles as bit masks in increasing order).
pub fn all_feasible(m: usize, n: usize, b: &CardinalityBounds) -> Vec<Allocation> {
    let masks: Vec<u32> = (0..1u32 << n).filter(|mask| (b.l1..=b.l2).contains(&(mask.count_ones() as usize))).collect();
    let mut out = Vec::new();
    let mut chosen = vec![0u32; m];
    let mut copies = vec![0usize; n];
    fn rec(
        i: usize,
        masks: &[u32],
        b: &CardinalityBounds,
        n: usize,
        chosen: &mut Vec<u32>,
        copies: &mut Vec<usize>,
        out: &mut Vec<Allocation>,
    ) {
        if i == chosen.len() {
            if copies.iter().all(|&c| c >= b.r1) {
                let bundles = chosen.iter().map(|mask| (0..n).filter(|j| mask >> j & 1 == 1).collect()).collect();
                out.push(Allocation::from_bundles(n, bundles).unwrap());
            }
            return;
        }
        for &mask in masks {
            let bits: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
            if bits.iter().any(|&j| copies[j] >= b.r2) {
                continue;
            }
            bits.iter().for_each(|&j| copies[j] += 1);
            chosen[i] = mask;
            rec(i + 1, masks, b, n, chosen, copies, out);
            bits.iter().for_each(|&j| copies[j] -= 1);
        }
    }
    rec(0, &masks, b, n, &mut chosen, &mut copies, &mut out);
    out
}

/// `sum_i ln(sum_{j in A_i} W[i][j])`, both sums in ascending index order.
pub fn log_nash(inst: &Instance, alloc: &Allocation) -> f64 {
    let mut total = 0.0;
    for i in 0..inst.resellers() {
        let mut u = 0.0;
        for &j in alloc.bundle(i) {
            u += inst.weight(i, j);
        }
        if u <= 0.0 {
            return f64::NEG_INFINITY;
        }
        total += u.ln();
    }
    total
}

pub fn enumerated_optimum(inst: &Instance, b: &CardinalityBounds) -> Option<f64> {
    all_feasible(inst.resellers(), inst.products(), b)
        .iter()
        .map(|a| log_nash(inst, a))
        .fold(None, |best: Option<f64>, v| Some(best.map_or(v, |b| b.max(v))))
}

pub fn any_bounds(m: usize, n: usize) -> impl Strategy<Value = CardinalityBounds> {
    (0..=n, 0..=n, 0..=m, 0..=m).prop_map(|(a, b, c, d)| CardinalityBounds {
        l1: a.min(b),
        l2: a.max(b),
        r1: c.min(d),
        r2: c.max(d),
    })
}

/// A small instance with integer-valued utilities in `0..=max` and
/// feasible bounds.
pub fn feasible_case(max_dim: usize, max_w: u32) -> impl Strategy<Value = (Instance, CardinalityBounds)> {
    (1..=max_dim, 1..=max_dim)
        .prop_flat_map(move |(m, n)| {
            (prop::collection::vec(0..=max_w, m * n), any_bounds(m, n))
                .prop_map(move |(w, b)| (Instance::new(m, n, w.into_iter().map(f64::from).collect()).unwrap(), b))
        })
        .prop_filter("bounds must admit an allocation", |(inst, b)| {
            check_feasibility(inst.resellers(), inst.products(), b).feasible
        })
}

/// Like [`feasible_case`] but with strictly positive utilities.
pub fn positive_case(max_dim: usize) -> impl Strategy<Value = (Instance, CardinalityBounds)> {
    (1..=max_dim, 1..=max_dim)
        .prop_flat_map(move |(m, n)| {
            (prop::collection::vec(1u32..=50, m * n), any_bounds(m, n))
                .prop_map(move |(w, b)| (Instance::new(m, n, w.into_iter().map(f64::from).collect()).unwrap(), b))
        })
        .prop_filter("bounds must admit an allocation", |(inst, b)| {
            check_feasibility(inst.resellers(), inst.products(), b).feasible
        })
}
