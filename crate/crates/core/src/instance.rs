//! Instances, cardinality bounds and allocations.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::flow::FlowNetwork;
use crate::{Error, Result};

/// Relative tolerance when checking `W = E * rev`.
pub const DECOMPOSITION_RTOL: f64 = 1e-9;

/// Dense utility matrix of `m` re-sellers by `n` products.
///
/// `weight(i, j)` is the expected revenue re-seller `i` earns by selling
/// product `j`. When the expertise matrix and per-product revenue are both
/// present, every weight equals `expertise(i, j) * revenue(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    m: usize,
    n: usize,
    weights: Vec<f64>,
    expertise: Option<Vec<f64>>,
    revenue: Option<Vec<f64>>,
}

impl Instance {
    /// Builds an instance from a row-major weight vector.
    pub fn new(m: usize, n: usize, weights: Vec<f64>) -> Result<Self> {
        validate_instance(Instance { m, n, weights, expertise: None, revenue: None })
    }

    /// Builds an instance from nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Dimension(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        Self::new(m, n, rows.concat())
    }

    /// Builds an instance with the optional expertise / revenue decomposition.
    pub fn with_decomposition(
        m: usize,
        n: usize,
        weights: Vec<f64>,
        expertise: Option<Vec<f64>>,
        revenue: Option<Vec<f64>>,
    ) -> Result<Self> {
        validate_instance(Instance { m, n, weights, expertise, revenue })
    }

    /// Builds `W = E * rev` from a row-major expertise matrix and revenues.
    pub fn from_expertise(m: usize, n: usize, expertise: Vec<f64>, revenue: Vec<f64>) -> Result<Self> {
        if expertise.len() != m * n || revenue.len() != n {
            return Err(Error::Dimension(format!(
                "expertise has {} entries and revenue {}, expected {} and {n}",
                expertise.len(),
                revenue.len(),
                m * n
            )));
        }
        let weights = expertise.iter().enumerate().map(|(idx, e)| e * revenue[idx % n]).collect();
        Self::with_decomposition(m, n, weights, Some(expertise), Some(revenue))
    }

    pub fn resellers(&self) -> usize {
        self.m
    }

    pub fn products(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self, reseller: usize, product: usize) -> f64 {
        self.weights[reseller * self.n + product]
    }

    pub fn row(&self, reseller: usize) -> &[f64] {
        &self.weights[reseller * self.n..(reseller + 1) * self.n]
    }

    /// Row-major weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn expertise(&self) -> Option<&[f64]> {
        self.expertise.as_deref()
    }

    pub fn revenue(&self) -> Option<&[f64]> {
        self.revenue.as_deref()
    }

    /// Copy of the instance with every weight multiplied by `factor`.
    ///
    /// The decomposition is dropped since it no longer holds for the scaled
    /// weights.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.m, self.n, self.weights.iter().map(|w| w * factor).collect())
    }

    /// Sum of `W[i][j]` over the bundle of `reseller`, in ascending product
    /// order.
    pub fn bundle_value(&self, reseller: usize, bundle: &BTreeSet<usize>) -> f64 {
        bundle.iter().map(|&j| self.weight(reseller, j)).fold(0.0, |acc, w| acc + w)
    }
}

/// Checks every instance invariant and hands the instance back unchanged.
pub fn validate_instance(raw: Instance) -> Result<Instance> {
    let Instance { m, n, ref weights, ref expertise, ref revenue } = raw;
    if m == 0 || n == 0 {
        return Err(Error::Dimension(format!("need m >= 1 and n >= 1, got m = {m}, n = {n}")));
    }
    if weights.len() != m * n {
        return Err(Error::Dimension(format!("weights has {} entries, expected m * n = {}", weights.len(), m * n)));
    }
    for (idx, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidUtility { row: idx / n, col: idx % n, value: w });
        }
    }
    if let Some(e) = expertise {
        if e.len() != m * n {
            return Err(Error::Dimension(format!("expertise has {} entries, expected {}", e.len(), m * n)));
        }
        for (idx, &p) in e.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidExpertise { row: idx / n, col: idx % n, value: p });
            }
        }
    }
    if let Some(r) = revenue {
        if r.len() != n {
            return Err(Error::Dimension(format!("revenue has {} entries, expected {n}", r.len())));
        }
        for (j, &v) in r.iter().enumerate() {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidRevenue { product: j, value: v });
            }
        }
    }
    if let (Some(e), Some(r)) = (expertise, revenue) {
        for (idx, (&w, &p)) in weights.iter().zip(e).enumerate() {
            let expected = p * r[idx % n];
            if (w - expected).abs() > DECOMPOSITION_RTOL * w.abs().max(expected.abs()) {
                return Err(Error::InconsistentDecomposition { row: idx / n, col: idx % n, weight: w, expected });
            }
        }
    }
    Ok(raw)
}

/// The two-sided cardinality limits: every re-seller holds between `l1` and
/// `l2` distinct products, every product goes to between `r1` and `r2`
/// re-sellers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CardinalityBounds {
    pub l1: usize,
    pub l2: usize,
    pub r1: usize,
    pub r2: usize,
}

impl CardinalityBounds {
    pub fn new(l1: usize, l2: usize, r1: usize, r2: usize) -> Result<Self> {
        let b = CardinalityBounds { l1, l2, r1, r2 };
        b.validate()?;
        Ok(b)
    }

    /// `l1 = l2 = r1 = r2 = k`.
    pub fn uniform(k: usize) -> Self {
        CardinalityBounds { l1: k, l2: k, r1: k, r2: k }
    }

    pub fn validate(&self) -> Result<()> {
        if self.l1 > self.l2 {
            return Err(Error::InvalidBounds(format!("l1 = {} exceeds l2 = {}", self.l1, self.l2)));
        }
        if self.r1 > self.r2 {
            return Err(Error::InvalidBounds(format!("r1 = {} exceeds r2 = {}", self.r1, self.r2)));
        }
        Ok(())
    }
}

impl fmt::Display for CardinalityBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.l1, self.l2, self.r1, self.r2)
    }
}

impl std::str::FromStr for CardinalityBounds {
    type Err = Error;

    /// Parses `l1,l2,r1,r2`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidBounds(format!("`{s}`: {e}")))?;
        match parts[..] {
            [l1, l2, r1, r2] => CardinalityBounds::new(l1, l2, r1, r2),
            _ => Err(Error::InvalidBounds(format!("`{s}`: expected four values l1,l2,r1,r2"))),
        }
    }
}

/// One bundle of distinct product indices per re-seller.
///
/// Equivalent to the binary matrix `A` with `A[i][j] = 1` iff product `j` is
/// in the bundle of re-seller `i`. Bundles iterate in ascending product order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation {
    bundles: Vec<BTreeSet<usize>>,
}

impl Allocation {
    pub fn empty(m: usize) -> Self {
        Allocation { bundles: vec![BTreeSet::new(); m] }
    }

    /// Builds an allocation over `n` products, rejecting out-of-range and
    /// repeated product indices.
    pub fn from_bundles(n: usize, bundles: Vec<Vec<usize>>) -> Result<Self> {
        let mut out = Vec::with_capacity(bundles.len());
        for (i, bundle) in bundles.into_iter().enumerate() {
            let mut set = BTreeSet::new();
            for j in bundle {
                if j >= n {
                    return Err(Error::ProductOutOfRange { index: j, n });
                }
                if !set.insert(j) {
                    return Err(Error::DuplicateProduct { reseller: i, product: j });
                }
            }
            out.push(set);
        }
        Ok(Allocation { bundles: out })
    }

    /// Reads the binary matrix `A` (row-major, `m` rows of `n` flags).
    pub fn from_matrix(m: usize, n: usize, matrix: &[bool]) -> Self {
        assert_eq!(matrix.len(), m * n, "matrix must have m * n entries");
        let bundles = (0..m).map(|i| (0..n).filter(|&j| matrix[i * n + j]).collect()).collect();
        Allocation { bundles }
    }

    pub fn to_matrix(&self, n: usize) -> Vec<bool> {
        let mut a = vec![false; self.bundles.len() * n];
        for (i, b) in self.bundles.iter().enumerate() {
            for &j in b {
                a[i * n + j] = true;
            }
        }
        a
    }

    /// Number of re-sellers.
    pub fn len(&self) -> usize {
        self.bundles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bundles.is_empty()
    }

    pub fn bundle(&self, reseller: usize) -> &BTreeSet<usize> {
        &self.bundles[reseller]
    }

    pub fn bundles(&self) -> &[BTreeSet<usize>] {
        &self.bundles
    }

    pub fn contains(&self, reseller: usize, product: usize) -> bool {
        self.bundles[reseller].contains(&product)
    }

    /// Adds `product` to the bundle; returns false if it was already there.
    pub fn insert(&mut self, reseller: usize, product: usize) -> bool {
        self.bundles[reseller].insert(product)
    }

    pub fn remove(&mut self, reseller: usize, product: usize) -> bool {
        self.bundles[reseller].remove(&product)
    }

    /// Number of re-sellers holding each of the `n` products.
    pub fn copies(&self, n: usize) -> Vec<usize> {
        let mut c = vec![0; n];
        for b in &self.bundles {
            for &j in b {
                if j < n {
                    c[j] += 1;
                }
            }
        }
        c
    }

    pub fn bundle_sizes(&self) -> Vec<usize> {
        self.bundles.iter().map(BTreeSet::len).collect()
    }

    pub fn to_vecs(&self) -> Vec<Vec<usize>> {
        self.bundles.iter().map(|b| b.iter().copied().collect()).collect()
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.bundles.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "u{}{{", i + 1)?;
            for (k, j) in b.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "p{}", j + 1)?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

/// `U_i(A_i)`: the summed utility of re-seller `i` for its own bundle.
pub fn utility(inst: &Instance, alloc: &Allocation, reseller: usize) -> Result<f64> {
    if reseller >= inst.resellers() || reseller >= alloc.len() {
        return Err(Error::ResellerOutOfRange { index: reseller, m: inst.resellers() });
    }
    if let Some(&j) = alloc.bundle(reseller).iter().find(|&&j| j >= inst.products()) {
        return Err(Error::ProductOutOfRange { index: j, n: inst.products() });
    }
    Ok(inst.bundle_value(reseller, alloc.bundle(reseller)))
}

/// Per-re-seller utilities, index order. Out-of-range products are ignored.
pub fn utilities(inst: &Instance, alloc: &Allocation) -> Vec<f64> {
    alloc
        .bundles()
        .iter()
        .enumerate()
        .take(inst.resellers())
        .map(|(i, b)| {
            b.iter().filter(|&&j| j < inst.products()).map(|&j| inst.weight(i, j)).fold(0.0, |acc, w| acc + w)
        })
        .collect()
}

/// A single broken constraint of an allocation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    ResellerCount { expected: usize, found: usize },
    ProductOutOfRange { reseller: usize, product: usize },
    BundleTooSmall { reseller: usize, size: usize, min: usize },
    BundleTooLarge { reseller: usize, size: usize, max: usize },
    TooFewCopies { product: usize, copies: usize, min: usize },
    TooManyCopies { product: usize, copies: usize, max: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::ResellerCount { expected, found } => {
                write!(f, "allocation has {found} bundles, instance has {expected} re-sellers")
            }
            Violation::ProductOutOfRange { reseller, product } => {
                write!(f, "re-seller {reseller} holds unknown product {product}")
            }
            Violation::BundleTooSmall { reseller, size, min } => {
                write!(f, "re-seller {reseller} holds {size} products, needs at least {min}")
            }
            Violation::BundleTooLarge { reseller, size, max } => {
                write!(f, "re-seller {reseller} holds {size} products, allowed at most {max}")
            }
            Violation::TooFewCopies { product, copies, min } => {
                write!(f, "product {product} has {copies} copies, needs at least {min}")
            }
            Violation::TooManyCopies { product, copies, max } => {
                write!(f, "product {product} has {copies} copies, allowed at most {max}")
            }
        }
    }
}

/// Outcome of [`is_feasible_allocation`]; feasible iff no violations.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct FeasibilityVerdict {
    pub violations: Vec<Violation>,
}

impl FeasibilityVerdict {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every re-seller- and product-side bound the allocation breaks.
pub fn is_feasible_allocation(inst: &Instance, alloc: &Allocation, b: &CardinalityBounds) -> FeasibilityVerdict {
    let (m, n) = (inst.resellers(), inst.products());
    let mut violations = Vec::new();
    if alloc.len() != m {
        violations.push(Violation::ResellerCount { expected: m, found: alloc.len() });
    }
    for (i, bundle) in alloc.bundles().iter().enumerate() {
        for &j in bundle.iter().filter(|&&j| j >= n) {
            violations.push(Violation::ProductOutOfRange { reseller: i, product: j });
        }
        let size = bundle.len();
        if size < b.l1 {
            violations.push(Violation::BundleTooSmall { reseller: i, size, min: b.l1 });
        }
        if size > b.l2 {
            violations.push(Violation::BundleTooLarge { reseller: i, size, max: b.l2 });
        }
    }
    for (j, copies) in alloc.copies(n).into_iter().enumerate() {
        if copies < b.r1 {
            violations.push(Violation::TooFewCopies { product: j, copies, min: b.r1 });
        }
        if copies > b.r2 {
            violations.push(Violation::TooManyCopies { product: j, copies, max: b.r2 });
        }
    }
    FeasibilityVerdict { violations }
}

/// Why no allocation satisfies the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfeasibleReason {
    /// `l1 > l2` or `r1 > r2`.
    InvalidBounds,
    L2ExceedsN,
    R2ExceedsM,
    /// `[max(m l1, n r1), min(m l2, n r2)]` is empty.
    IntervalEmpty,
    /// The lower-bounded flow cannot be routed.
    FlowDeficit,
}

impl InfeasibleReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            InfeasibleReason::InvalidBounds => "invalid-bounds",
            InfeasibleReason::L2ExceedsN => "L2-exceeds-n",
            InfeasibleReason::R2ExceedsM => "R2-exceeds-m",
            InfeasibleReason::IntervalEmpty => "interval-empty",
            InfeasibleReason::FlowDeficit => "flow-deficit",
        }
    }
}

impl fmt::Display for InfeasibleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub witness: Option<Allocation>,
    pub reason: Option<InfeasibleReason>,
}

impl FeasibilityReport {
    fn infeasible(reason: InfeasibleReason) -> Self {
        FeasibilityReport { feasible: false, witness: None, reason: Some(reason) }
    }
}

/// Bounds every feasible allocation already satisfies, derived by counting:
/// a product cannot take more copies than the re-seller slots left after
/// every other product has its `r1`, and symmetrically for the other three
/// bounds. Iterated until nothing changes. The feasible set is unchanged.
pub fn implied_bounds(m: usize, n: usize, b: &CardinalityBounds) -> CardinalityBounds {
    let mut t = CardinalityBounds { l2: b.l2.min(n), r2: b.r2.min(m), ..*b };
    loop {
        let before = t;
        let others = n.saturating_sub(1);
        let resellers_left = m.saturating_sub(1);
        t.r2 = t.r2.min((m * t.l2).saturating_sub(others * t.r1));
        t.l2 = t.l2.min((n * t.r2).saturating_sub(resellers_left * t.l1));
        t.r1 = t.r1.max((m * t.l1).saturating_sub(others * t.r2));
        t.l1 = t.l1.max((n * t.r1).saturating_sub(resellers_left * t.l2));
        if t == before || t.l1 > t.l2 || t.r1 > t.r2 {
            return t;
        }
    }
}

/// Fast necessary conditions; `None` means the flow test has to decide.
pub fn screen_bounds(m: usize, n: usize, b: &CardinalityBounds) -> Option<InfeasibleReason> {
    if b.l1 > b.l2 || b.r1 > b.r2 {
        return Some(InfeasibleReason::InvalidBounds);
    }
    if b.l2 > n {
        return Some(InfeasibleReason::L2ExceedsN);
    }
    if b.r2 > m {
        return Some(InfeasibleReason::R2ExceedsM);
    }
    let lo = (m * b.l1).max(n * b.r1);
    let hi = (m * b.l2).min(n * b.r2);
    if lo > hi {
        return Some(InfeasibleReason::IntervalEmpty);
    }
    None
}

/// Decides whether any allocation of distinct products meets the bounds.
///
/// The interval screen runs first; the exact answer comes from a circulation
/// with lower bounds on source -> re-seller `[l1, l2]`, re-seller -> product
/// `[0, 1]` and product -> sink `[r1, r2]` arcs. A feasible circulation gives
/// the witness allocation directly.
pub fn check_feasibility(m: usize, n: usize, b: &CardinalityBounds) -> FeasibilityReport {
    if let Some(reason) = screen_bounds(m, n, b) {
        return FeasibilityReport::infeasible(reason);
    }
    if m == 0 || n == 0 {
        return FeasibilityReport::infeasible(InfeasibleReason::IntervalEmpty);
    }
    let source = 0;
    let reseller = |i: usize| 1 + i;
    let product = |j: usize| 1 + m + j;
    let sink = 1 + m + n;
    let mut net = FlowNetwork::new(m + n + 2);
    for i in 0..m {
        net.add_bounded_edge(source, reseller(i), b.l1, b.l2);
    }
    let mut pair_edges = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            pair_edges.push(net.add_bounded_edge(reseller(i), product(j), 0, 1));
        }
    }
    for j in 0..n {
        net.add_bounded_edge(product(j), sink, b.r1, b.r2);
    }
    net.add_bounded_edge(sink, source, 0, usize::MAX / 4);
    if !net.solve_circulation() {
        return FeasibilityReport::infeasible(InfeasibleReason::FlowDeficit);
    }
    let matrix: Vec<bool> = pair_edges.iter().map(|&e| net.flow(e) > 0).collect();
    FeasibilityReport { feasible: true, witness: Some(Allocation::from_matrix(m, n, &matrix)), reason: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implied_bounds_tighten_slack_caps() {
        // sixteen slots over eight products with two each required
        let b = CardinalityBounds { l1: 2, l2: 2, r1: 2, r2: 8 };
        assert_eq!(implied_bounds(8, 8, &b), CardinalityBounds::uniform(2));
        let b = CardinalityBounds { l1: 0, l2: 5, r1: 1, r2: 3 };
        assert_eq!(implied_bounds(2, 4, &b), CardinalityBounds { l1: 0, l2: 4, r1: 1, r2: 2 });
        let b = CardinalityBounds { l1: 1, l2: 3, r1: 0, r2: 2 };
        assert_eq!(implied_bounds(3, 4, &b), b);
    }

    fn table_c() -> Instance {
        Instance::from_rows(&[vec![7.0, 1.0, 2.0], vec![5.5, 2.0, 2.5], vec![5.0, 4.0, 1.0]]).unwrap()
    }

    #[test]
    fn minimal_instance_is_accepted_unchanged() {
        let inst = Instance::new(1, 1, vec![5.0]).unwrap();
        assert_eq!(inst.weights(), &[5.0]);
        assert_eq!(validate_instance(inst.clone()).unwrap(), inst);
    }

    #[test]
    fn table_c_validates() {
        let inst = table_c();
        assert_eq!((inst.resellers(), inst.products()), (3, 3));
        assert_eq!(inst.row(1), &[5.5, 2.0, 2.5]);
    }

    #[test]
    fn rejects_negative_utility() {
        let err = Instance::from_rows(&[vec![1.0, -1.0], vec![0.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::InvalidUtility { row: 0, col: 1, .. }), "{err}");
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(matches!(Instance::new(2, 2, vec![1.0; 3]), Err(Error::Dimension(_))));
        assert!(matches!(Instance::new(0, 2, vec![]), Err(Error::Dimension(_))));
        assert!(matches!(Instance::new(1, 1, vec![f64::NAN]), Err(Error::InvalidUtility { .. })));
        assert!(matches!(Instance::from_rows(&[vec![1.0, 2.0], vec![1.0]]), Err(Error::Dimension(_))));
        assert!(matches!(
            Instance::from_expertise(1, 2, vec![0.5, 1.5], vec![1.0, 1.0]),
            Err(Error::InvalidExpertise { col: 1, .. })
        ));
        assert!(matches!(
            Instance::with_decomposition(1, 1, vec![3.0], Some(vec![0.5]), Some(vec![4.0])),
            Err(Error::InconsistentDecomposition { .. })
        ));
        assert!(Instance::with_decomposition(1, 1, vec![2.0], Some(vec![0.5]), Some(vec![4.0])).is_ok());
    }

    #[test]
    fn utility_sums_bundle() {
        let inst = table_c();
        let alloc = Allocation::from_bundles(3, vec![vec![0, 2], vec![], vec![1]]).unwrap();
        assert_eq!(utility(&inst, &alloc, 0).unwrap(), 9.0);
        assert_eq!(utility(&inst, &alloc, 1).unwrap(), 0.0);
        assert!(matches!(utility(&inst, &alloc, 3), Err(Error::ResellerOutOfRange { .. })));
    }

    #[test]
    fn duplicate_products_are_rejected() {
        let err = Allocation::from_bundles(3, vec![vec![0, 0]]).unwrap_err();
        assert!(matches!(err, Error::DuplicateProduct { reseller: 0, product: 0 }));
        let err = Allocation::from_bundles(3, vec![vec![3]]).unwrap_err();
        assert!(matches!(err, Error::ProductOutOfRange { index: 3, n: 3 }));
    }

    #[test]
    fn table_c_allocation_feasibility() {
        let inst = table_c();
        let alloc = Allocation::from_bundles(3, vec![vec![0, 2], vec![0, 1], vec![1, 2]]).unwrap();
        assert!(is_feasible_allocation(&inst, &alloc, &CardinalityBounds::uniform(2)).is_feasible());

        let b = CardinalityBounds::new(2, 2, 3, 3).unwrap();
        let verdict = is_feasible_allocation(&inst, &alloc, &b);
        assert_eq!(
            verdict.violations,
            (0..3).map(|j| Violation::TooFewCopies { product: j, copies: 2, min: 3 }).collect::<Vec<_>>()
        );
    }

    #[test]
    fn empty_bundle_breaks_lower_bound() {
        let inst = table_c();
        let alloc = Allocation::from_bundles(3, vec![vec![], vec![0], vec![1]]).unwrap();
        let b = CardinalityBounds::new(1, 3, 0, 3).unwrap();
        let verdict = is_feasible_allocation(&inst, &alloc, &b);
        assert_eq!(verdict.violations, vec![Violation::BundleTooSmall { reseller: 0, size: 0, min: 1 }]);
    }

    #[test]
    fn feasibility_examples() {
        let r = check_feasibility(5, 5, &CardinalityBounds::uniform(3));
        assert!(r.feasible);

        let r = check_feasibility(2, 5, &CardinalityBounds::new(2, 2, 1, 1).unwrap());
        assert_eq!(r.reason, Some(InfeasibleReason::IntervalEmpty));
        assert!(r.witness.is_none());

        let b = CardinalityBounds::new(2, 2, 1, 1).unwrap();
        let r = check_feasibility(2, 4, &b);
        assert!(r.feasible);
        let w = r.witness.unwrap();
        let inst = Instance::new(2, 4, vec![1.0; 8]).unwrap();
        assert!(is_feasible_allocation(&inst, &w, &b).is_feasible());
    }

    #[test]
    fn screen_reasons() {
        let b = CardinalityBounds::new(1, 4, 0, 1).unwrap();
        assert_eq!(check_feasibility(3, 3, &b).reason, Some(InfeasibleReason::L2ExceedsN));
        let b = CardinalityBounds::new(0, 1, 1, 4).unwrap();
        assert_eq!(check_feasibility(3, 3, &b).reason, Some(InfeasibleReason::R2ExceedsM));
        let b = CardinalityBounds { l1: 2, l2: 1, r1: 0, r2: 0 };
        assert_eq!(check_feasibility(3, 3, &b).reason, Some(InfeasibleReason::InvalidBounds));
    }

    #[test]
    fn witness_meets_single_product_bounds() {
        let b = CardinalityBounds::new(1, 1, 3, 3).unwrap();
        let r = check_feasibility(3, 1, &b);
        assert_eq!(r.witness.unwrap().to_vecs(), vec![vec![0], vec![0], vec![0]]);
    }

    #[test]
    fn bounds_parse() {
        let b: CardinalityBounds = "1, 2,3,4".parse().unwrap();
        assert_eq!(b, CardinalityBounds { l1: 1, l2: 2, r1: 3, r2: 4 });
        assert_eq!(b.to_string(), "1,2,3,4");
        assert!("1,2,3".parse::<CardinalityBounds>().is_err());
        assert!("2,1,0,0".parse::<CardinalityBounds>().is_err());
        assert!("a,1,0,0".parse::<CardinalityBounds>().is_err());
    }

    #[test]
    fn allocation_display_uses_one_based_names() {
        let alloc = Allocation::from_bundles(3, vec![vec![0, 2], vec![1]]).unwrap();
        assert_eq!(alloc.to_string(), "u1{p1,p3}, u2{p2}");
    }
}
